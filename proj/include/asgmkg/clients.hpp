#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

// The three external service roles: an LLM, an open search engine (which also
// fetches hit pages), and a page-rank finder.
namespace asgmkg {

struct SearchHit {
  std::string url;
  std::string title;
  std::string snippet;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct PageRankResult {
  double score = 0.0;  // [0, 10]
  bool known = true;   // false: the provider had no data, score is 0
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

class SearchClient {
 public:
  virtual ~SearchClient() = default;
  virtual std::vector<SearchHit> search(const std::string& query, std::size_t n) = 0;
  // Text content of a hit page. Throws FetchFailure.
  virtual std::string fetch(const std::string& url) = 0;
};

class PageRankClient {
 public:
  virtual ~PageRankClient() = default;
  virtual PageRankResult page_rank(const std::string& domain) = 0;
  virtual std::vector<PageRankResult> page_rank_batch(std::span<const std::string> domains);
};

struct ClientSet {
  std::shared_ptr<LlmClient> llm;
  std::shared_ptr<SearchClient> search;
  std::shared_ptr<PageRankClient> pagerank;
};

// Throws ProtocolError for NaN or values outside [0, 10].
double checked_score(double raw);

// Lowercased host of an http(s) URL without a leading "www.".
std::string domain_of(const std::string& url);

}  // namespace asgmkg
