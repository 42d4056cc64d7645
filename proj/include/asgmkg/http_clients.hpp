#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "asgmkg/clients.hpp"
#include "asgmkg/rate_limit.hpp"

namespace asgmkg {

struct HttpResponse {
  int status = 0;  // <= 0: transport failure
  std::string body;
  std::string error;
};

using HttpHeaders = std::map<std::string, std::string>;

// Seam between the adapters and the network; tests substitute a recording
// transport.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url, const HttpHeaders& headers) = 0;
  virtual HttpResponse post(const std::string& url, const HttpHeaders& headers,
                            const std::string& body, const std::string& content_type) = 0;
};

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(30));
  HttpResponse get(const std::string& url, const HttpHeaders& headers) override;
  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                    const std::string& content_type) override;

 private:
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

// Chat-completions style endpoint: POST {model, messages:[{role:user}]},
// reply read from choices[0].message.content.
class HttpLlmClient : public LlmClient {
 public:
  HttpLlmClient(std::shared_ptr<HttpTransport> transport, std::string endpoint, std::string key,
                std::string model, RetryPolicy retry = {});
  std::string complete(const std::string& prompt) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
  std::string endpoint_;
  std::string key_;
  std::string model_;
  RetryPolicy retry_;
};

// DuckDuckGo Instant Answer JSON (`Results` and nested `RelatedTopics`
// entries with FirstURL/Text). `fetch` GETs the page and strips markup.
class HttpSearchClient : public SearchClient {
 public:
  HttpSearchClient(std::shared_ptr<HttpTransport> transport, std::string endpoint,
                   std::shared_ptr<TokenBucket> limiter);
  std::vector<SearchHit> search(const std::string& query, std::size_t n) override;
  std::string fetch(const std::string& url) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
  std::string endpoint_;
  std::shared_ptr<TokenBucket> limiter_;
};

// Open PageRank: GET ?domains[]=... with an `API-OPR` key header; reads
// `page_rank_decimal` per domain. Batches up to kMaxDomainsPerCall.
class HttpPageRankClient : public PageRankClient {
 public:
  static constexpr std::size_t kMaxDomainsPerCall = 100;

  HttpPageRankClient(std::shared_ptr<HttpTransport> transport, std::string endpoint,
                     std::string key, std::shared_ptr<TokenBucket> limiter);
  PageRankResult page_rank(const std::string& domain) override;
  std::vector<PageRankResult> page_rank_batch(std::span<const std::string> domains) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
  std::string endpoint_;
  std::string key_;
  std::shared_ptr<TokenBucket> limiter_;
};

std::string url_encode(const std::string& s);
// Crude tag stripper for fetched HTML: drops script/style bodies and tags,
// decodes a few common entities, collapses whitespace.
std::string html_to_text(const std::string& html);

}  // namespace asgmkg
