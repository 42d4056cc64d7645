#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asgmkg/clients.hpp"

// Deterministic offline test doubles for the three service roles. These are
// rule-based stand-ins, not models of real service behavior.
namespace asgmkg {

struct FixtureTables {
  // Search results keyed by normalized query text.
  std::map<std::string, std::vector<SearchHit>> search;
  std::set<std::string> search_unavailable;
  // Page bodies keyed by URL; a missing URL fails to fetch.
  std::map<std::string, std::string> pages;
  // Page-rank scores keyed by domain; missing domains are unknown (score 0).
  std::map<std::string, double> pagerank;
  std::set<std::string> pagerank_unavailable;
  // Verb lexicon for the rule-based extractor.
  std::set<std::string> verbs;
  // Chunks containing any of these strings get an unparseable reply.
  std::vector<std::string> malformed_markers;
};

FixtureTables load_fixture_tables(const std::filesystem::path& path);
FixtureTables parse_fixture_tables(const std::string& json_text);

// Dispatches on the `### TASK:` header of the prompt:
//  extract-triples: subject-verb-object rule extraction per sentence, with
//    "not"/"does not" negation, a trailing preposition folded into the
//    predicate, and pronouns replaced by the previous sentence's object.
//  judge-triple: "Yes" iff every keyword of the triple occurs in the
//    reference text.
//  summarize-page: echoes the content.
//  chat: concatenates the supplied statements.
class FixtureLlm : public LlmClient {
 public:
  explicit FixtureLlm(std::shared_ptr<const FixtureTables> tables);
  std::string complete(const std::string& prompt) override;

 private:
  std::string extract(const std::string& text) const;
  std::shared_ptr<const FixtureTables> tables_;
};

class FixtureSearch : public SearchClient {
 public:
  explicit FixtureSearch(std::shared_ptr<const FixtureTables> tables);
  std::vector<SearchHit> search(const std::string& query, std::size_t n) override;
  std::string fetch(const std::string& url) override;

 private:
  std::shared_ptr<const FixtureTables> tables_;
};

class FixturePageRank : public PageRankClient {
 public:
  explicit FixturePageRank(std::shared_ptr<const FixtureTables> tables);
  PageRankResult page_rank(const std::string& domain) override;

 private:
  std::shared_ptr<const FixtureTables> tables_;
};

ClientSet make_fixture_clients(std::shared_ptr<const FixtureTables> tables);

// Fixture judging rule, exposed for tests: yes iff every keyword token of
// the statement appears among the tokens of `reference`.
bool fixture_judge_says_yes(const std::string& subject, const std::string& predicate,
                            const std::string& object, bool negated,
                            const std::string& reference);

}  // namespace asgmkg
