#include "asgmkg/cache.hpp"

#include <fstream>
#include <sstream>

#include "asgmkg/api.hpp"
#include "asgmkg/error.hpp"
#include "asgmkg/hash.hpp"
#include "asgmkg/json_io.hpp"

namespace asgmkg {

std::string_view to_string(ClientMode mode) {
  switch (mode) {
    case ClientMode::live: return "live";
    case ClientMode::record: return "record";
    case ClientMode::replay: return "replay";
    case ClientMode::fixture: return "fixture";
  }
  return "fixture";
}

ClientMode client_mode_from_string(std::string_view name) {
  if (name == "live") return ClientMode::live;
  if (name == "record") return ClientMode::record;
  if (name == "replay") return ClientMode::replay;
  if (name == "fixture") return ClientMode::fixture;
  throw ConfigError("unknown client mode: " + std::string(name));
}

std::string ClientRequest::cache_key() const { return sha256_hex(role + "\n" + payload); }

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<CacheEntry> ResponseCache::get(const std::string& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::exception&) {
    return std::nullopt;
  }
  return CacheEntry{j.at("cache_key").get<std::string>(), j.at("role").get<std::string>(),
                    j.at("payload").get<std::string>(),   j.at("response").get<std::string>(),
                    j.value("fetched_at", ""),            j.value("source", "live")};
}

void ResponseCache::put(const CacheEntry& entry) {
  const auto target = path_for(entry.cache_key);
  std::error_code ec;
  if (std::filesystem::exists(target, ec)) return;
  std::filesystem::create_directories(dir_, ec);
  const Json j{{"cache_key", entry.cache_key}, {"role", entry.role},
               {"payload", entry.payload},     {"response", entry.response},
               {"fetched_at", entry.fetched_at}, {"source", entry.source}};
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("CacheError", "cannot write cache entry " + tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, target);
}

CachedCaller::CachedCaller(ClientMode mode, std::shared_ptr<ResponseCache> cache)
    : mode_(mode), cache_(std::move(cache)) {
  if ((mode_ == ClientMode::record || mode_ == ClientMode::replay) && !cache_) {
    throw ConfigError("record/replay mode needs a response cache");
  }
}

std::mutex& CachedCaller::key_mutex(const std::string& key) {
  std::lock_guard lock(table_mutex_);
  auto& slot = key_mutexes_[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::string CachedCaller::call(const ClientRequest& request, const Producer& live,
                               const Producer& fixture) {
  switch (mode_) {
    case ClientMode::live:
      return live();
    case ClientMode::fixture:
      return fixture();
    case ClientMode::replay: {
      auto hit = cache_->get(request.cache_key());
      if (!hit) throw ReplayMiss("no recorded response for " + request.role + " request " + request.cache_key());
      return hit->response;
    }
    case ClientMode::record: {
      const auto key = request.cache_key();
      std::lock_guard lock(key_mutex(key));
      if (auto hit = cache_->get(key)) return hit->response;
      auto response = live();
      cache_->put(CacheEntry{key, request.role, request.payload, response, utc_now_iso8601(), "live"});
      return response;
    }
  }
  return fixture();
}

namespace {

template <class Client>
Client& require(const std::shared_ptr<Client>& c, const char* what) {
  if (!c) throw ConfigError(std::string("no ") + what + " client configured for this mode");
  return *c;
}

}  // namespace

CachedLlm::CachedLlm(std::shared_ptr<CachedCaller> caller, std::shared_ptr<LlmClient> live,
                     std::shared_ptr<LlmClient> fixture)
    : caller_(std::move(caller)), live_(std::move(live)), fixture_(std::move(fixture)) {}

std::string CachedLlm::complete(const std::string& prompt) {
  return caller_->call(
      ClientRequest{"llm", prompt}, [&] { return require(live_, "live LLM").complete(prompt); },
      [&] { return require(fixture_, "fixture LLM").complete(prompt); });
}

CachedSearch::CachedSearch(std::shared_ptr<CachedCaller> caller,
                           std::shared_ptr<SearchClient> live,
                           std::shared_ptr<SearchClient> fixture)
    : caller_(std::move(caller)), live_(std::move(live)), fixture_(std::move(fixture)) {}

std::vector<SearchHit> CachedSearch::search(const std::string& query, std::size_t n) {
  auto encode = [](const std::vector<SearchHit>& hits) { return Json(hits).dump(); };
  const auto body = caller_->call(
      ClientRequest{"search", "search\nn=" + std::to_string(n) + "\n" + query},
      [&] { return encode(require(live_, "live search").search(query, n)); },
      [&] { return encode(require(fixture_, "fixture search").search(query, n)); });
  return Json::parse(body).get<std::vector<SearchHit>>();
}

std::string CachedSearch::fetch(const std::string& url) {
  return caller_->call(
      ClientRequest{"search", "fetch\n" + url},
      [&] { return require(live_, "live search").fetch(url); },
      [&] { return require(fixture_, "fixture search").fetch(url); });
}

CachedPageRank::CachedPageRank(std::shared_ptr<CachedCaller> caller,
                               std::shared_ptr<PageRankClient> live,
                               std::shared_ptr<PageRankClient> fixture)
    : caller_(std::move(caller)), live_(std::move(live)), fixture_(std::move(fixture)) {}

PageRankResult CachedPageRank::page_rank(const std::string& domain) {
  auto encode = [](const PageRankResult& r) {
    return Json{{"score", r.score}, {"known", r.known}}.dump();
  };
  const auto body = caller_->call(
      ClientRequest{"pagerank", "pagerank\n" + domain},
      [&] { return encode(require(live_, "live page-rank").page_rank(domain)); },
      [&] { return encode(require(fixture_, "fixture page-rank").page_rank(domain)); });
  const auto j = Json::parse(body);
  return {checked_score(j.at("score").get<double>()), j.at("known").get<bool>()};
}

}  // namespace asgmkg
