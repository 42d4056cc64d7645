#include "asgmkg/http_clients.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <set>
#include <thread>

#include "asgmkg/error.hpp"
#include "asgmkg/json_io.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("URL without scheme: " + url);
  const auto path_start = url.find_first_of("/?", scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  std::string target = url.substr(path_start);
  if (target.front() == '?') target.insert(target.begin(), '/');
  return {url.substr(0, path_start), target};
}

httplib::Headers to_httplib(const HttpHeaders& h) {
  httplib::Headers out;
  for (const auto& [k, v] : h) out.emplace(k, v);
  return out;
}

HttpResponse from_result(httplib::Result& r) {
  if (!r) return HttpResponse{0, {}, httplib::to_string(r.error())};
  return HttpResponse{r->status, r->body, {}};
}

bool transient(int status) { return status <= 0 || status == 429 || status >= 500; }

void backoff(const RetryPolicy& retry, int attempt) {
  if (retry.initial_backoff.count() <= 0) return;
  std::this_thread::sleep_for(retry.initial_backoff * (1 << attempt));
}

std::string with_query(const std::string& endpoint, const std::string& query) {
  return endpoint + (endpoint.find('?') == std::string::npos ? "?" : "&") + query;
}

}  // namespace

HttplibTransport::HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

HttpResponse HttplibTransport::get(const std::string& url, const HttpHeaders& headers) {
  const auto parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  auto r = client.Get(parts.target, to_httplib(headers));
  return from_result(r);
}

HttpResponse HttplibTransport::post(const std::string& url, const HttpHeaders& headers,
                                    const std::string& body, const std::string& content_type) {
  const auto parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  auto r = client.Post(parts.target, to_httplib(headers), body, content_type);
  return from_result(r);
}

std::string url_encode(const std::string& s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string html_to_text(const std::string& html) {
  std::string lower = html;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::string out;
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] == '<') {
      for (const char* block : {"script", "style"}) {
        const std::string open = std::string("<") + block;
        if (lower.compare(i, open.size(), open) == 0) {
          const auto close = lower.find(std::string("</") + block, i);
          i = close == std::string::npos ? html.size() : close;
          break;
        }
      }
      const auto end = html.find('>', i);
      i = end == std::string::npos ? html.size() : end + 1;
      out += ' ';
      continue;
    }
    if (html[i] == '&') {
      static const std::pair<const char*, const char*> kEntities[] = {
          {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"},
          {"&apos;", "'"}, {"&nbsp;", " "}};
      bool matched = false;
      for (const auto& [ent, rep] : kEntities) {
        const std::string e(ent);
        if (html.compare(i, e.size(), e) == 0) {
          out += rep;
          i += e.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out += html[i++];
  }
  return text::join(text::split_words(out), " ");
}

HttpLlmClient::HttpLlmClient(std::shared_ptr<HttpTransport> transport, std::string endpoint,
                             std::string key, std::string model, RetryPolicy retry)
    : transport_(std::move(transport)), endpoint_(std::move(endpoint)), key_(std::move(key)),
      model_(std::move(model)), retry_(retry) {}

std::string HttpLlmClient::complete(const std::string& prompt) {
  if (endpoint_.empty()) throw LlmUnavailable("LLM_ENDPOINT is not configured");
  const Json request{{"model", model_},
                     {"temperature", 0},
                     {"messages", Json::array({Json{{"role", "user"}, {"content", prompt}}})}};
  HttpHeaders headers;
  if (!key_.empty()) headers["Authorization"] = "Bearer " + key_;
  std::string last_error;
  for (int attempt = 0; attempt < retry_.attempts; ++attempt) {
    const auto r = transport_->post(endpoint_, headers, request.dump(), "application/json");
    if (r.status == 401 || r.status == 403) throw AuthError("LLM endpoint rejected credentials");
    if (r.status == 200) {
      try {
        const auto j = Json::parse(r.body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const Json::exception& e) {
        throw ProtocolError(std::string("unexpected LLM response shape: ") + e.what());
      }
    }
    last_error = r.status <= 0 ? r.error : "HTTP " + std::to_string(r.status);
    if (!transient(r.status)) break;
    if (attempt + 1 < retry_.attempts) backoff(retry_, attempt);
  }
  throw LlmUnavailable("LLM request failed: " + last_error);
}

HttpSearchClient::HttpSearchClient(std::shared_ptr<HttpTransport> transport, std::string endpoint,
                                   std::shared_ptr<TokenBucket> limiter)
    : transport_(std::move(transport)), endpoint_(std::move(endpoint)),
      limiter_(std::move(limiter)) {}

std::vector<SearchHit> HttpSearchClient::search(const std::string& query, std::size_t n) {
  if (limiter_) limiter_->acquire();
  const auto r = transport_->get(
      with_query(endpoint_, "q=" + url_encode(query) + "&format=json&no_html=1&skip_disambig=1"), {});
  if (r.status == 429) throw RateLimited("search engine rate limit");
  if (r.status != 200) {
    throw SearchUnavailable("search failed: " + (r.status <= 0 ? r.error : "HTTP " + std::to_string(r.status)));
  }
  Json j;
  try {
    j = Json::parse(r.body);
  } catch (const Json::exception&) {
    throw SearchUnavailable("search response is not JSON");
  }
  std::vector<SearchHit> hits;
  std::set<std::string> seen;
  auto add = [&](const Json& item) {
    if (!item.is_object() || !item.contains("FirstURL") || !item["FirstURL"].is_string()) return;
    const auto url = item["FirstURL"].get<std::string>();
    if (url.empty() || !seen.insert(url).second) return;
    const auto body = item.value("Text", "");
    const auto dash = body.find(" - ");
    hits.push_back({url, dash == std::string::npos ? body : body.substr(0, dash), body});
  };
  if (j.contains("Results") && j["Results"].is_array()) {
    for (const auto& item : j["Results"]) add(item);
  }
  if (j.contains("RelatedTopics") && j["RelatedTopics"].is_array()) {
    for (const auto& item : j["RelatedTopics"]) {
      if (item.contains("Topics") && item["Topics"].is_array()) {
        for (const auto& sub : item["Topics"]) add(sub);
      } else {
        add(item);
      }
    }
  }
  if (hits.size() > n) hits.resize(n);
  return hits;
}

std::string HttpSearchClient::fetch(const std::string& url) {
  HttpResponse r;
  try {
    r = transport_->get(url, {{"User-Agent", "asgmkg/1.0"}});
  } catch (const ConfigError& e) {
    throw FetchFailure(e.what());
  }
  if (r.status != 200) {
    throw FetchFailure("fetch " + url + " failed: " + (r.status <= 0 ? r.error : "HTTP " + std::to_string(r.status)));
  }
  return html_to_text(r.body);
}

HttpPageRankClient::HttpPageRankClient(std::shared_ptr<HttpTransport> transport,
                                       std::string endpoint, std::string key,
                                       std::shared_ptr<TokenBucket> limiter)
    : transport_(std::move(transport)), endpoint_(std::move(endpoint)), key_(std::move(key)),
      limiter_(std::move(limiter)) {}

PageRankResult HttpPageRankClient::page_rank(const std::string& domain) {
  const std::string one[] = {domain};
  return page_rank_batch(one).front();
}

std::vector<PageRankResult> HttpPageRankClient::page_rank_batch(std::span<const std::string> domains) {
  std::vector<PageRankResult> out;
  out.reserve(domains.size());
  for (std::size_t start = 0; start < domains.size(); start += kMaxDomainsPerCall) {
    const auto batch = domains.subspan(start, std::min(kMaxDomainsPerCall, domains.size() - start));
    std::string query;
    for (const auto& d : batch) {
      if (!query.empty()) query += '&';
      query += "domains%5B%5D=" + url_encode(d);
    }
    if (limiter_) limiter_->acquire();
    const auto r = transport_->get(with_query(endpoint_, query), {{"API-OPR", key_}});
    if (r.status == 401 || r.status == 403) throw AuthError("page-rank endpoint rejected credentials");
    if (r.status == 429) throw RateLimited("page-rank rate limit");
    if (r.status != 200) {
      throw PageRankUnavailable("page-rank failed: " + (r.status <= 0 ? r.error : "HTTP " + std::to_string(r.status)));
    }
    std::map<std::string, PageRankResult> by_domain;
    try {
      const auto j = Json::parse(r.body);
      for (const auto& item : j.at("response")) {
        const auto d = item.value("domain", "");
        if (item.value("status_code", 200) != 200) {
          by_domain[d] = {0.0, false};
          continue;
        }
        const auto& v = item.at("page_rank_decimal");
        double score = 0;
        if (v.is_number()) score = v.get<double>();
        else if (v.is_string() && !v.get<std::string>().empty()) score = std::stod(v.get<std::string>());
        else {
          by_domain[d] = {0.0, false};
          continue;
        }
        by_domain[d] = {checked_score(score), true};
      }
    } catch (const Json::exception& e) {
      throw ProtocolError(std::string("unexpected page-rank response: ") + e.what());
    } catch (const std::invalid_argument&) {
      throw ProtocolError("non-numeric page-rank value");
    }
    for (const auto& d : batch) {
      auto it = by_domain.find(d);
      out.push_back(it == by_domain.end() ? PageRankResult{0.0, false} : it->second);
    }
  }
  return out;
}

}  // namespace asgmkg
