#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asgmkg/clients.hpp"
#include "asgmkg/triple.hpp"

// Evidence-based triple validation: search, relevance filter, per-page LLM
// verdicts, majority vote.
namespace asgmkg {

enum class JudgeMode {
  truncate,   // judge the first `content_word_budget` words of the page
  summarize,  // ask the LLM for a summary first, then judge the summary
};

struct DasConfig {
  std::size_t n_hits = 10;
  std::size_t k_pages = 5;
  double relevance_threshold = 7.0;
  std::size_t min_evidence = 1;
  std::size_t content_word_budget = 2000;
  JudgeMode judge_mode = JudgeMode::truncate;
  std::size_t parallelism = 1;

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

enum class Verdict { yes, no };
enum class Outcome { factual, non_factual, unverifiable };

std::string_view to_string(Verdict v);
std::string_view to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);
Status to_status(Outcome o);

struct EvidencePage {
  std::string url;
  double relevance_score = 0.0;
  std::string content;
  std::optional<Verdict> verdict;
  std::string reason;  // verdict reason, or why the page was excluded
};

struct Degradation {
  std::string stage;  // search | pagerank | fetch | judge
  std::string detail;

  friend bool operator==(const Degradation&, const Degradation&) = default;
};

struct ScoredHit {
  SearchHit hit;
  double score = 0.0;
};

struct ValidationRecord {
  TripleId triple_id;
  std::string query;
  std::vector<ScoredHit> hits;
  std::vector<EvidencePage> judged_pages;    // pages that produced a verdict
  std::vector<EvidencePage> excluded_pages;  // passed the filter, no verdict
  std::size_t yes_count = 0;
  std::size_t no_count = 0;
  Outcome outcome = Outcome::unverifiable;
  std::vector<Degradation> degradations;
};

// `subject [not] predicate object`.
std::string build_query(const Triple& triple);

// Top `n_hits` in engine order, keeping hits whose title or snippet shares a
// keyword with the query. Throws SearchUnavailable.
std::vector<SearchHit> retrieve_evidence(const std::string& query, SearchClient& search,
                                         const DasConfig& config);

struct FilterLog {
  std::vector<ScoredHit> scored;
  std::vector<Degradation> degradations;
};

// Scores each hit's domain, keeps score >= threshold, orders by score
// (stable in hit order), truncates to k_pages and fetches content. Pages
// that fail to fetch are dropped.
std::vector<EvidencePage> score_and_filter(const std::vector<SearchHit>& hits,
                                           PageRankClient& pagerank, SearchClient& fetcher,
                                           const DasConfig& config, FilterLog* log = nullptr);

std::string build_judge_prompt(const Triple& triple, std::string_view reference);
std::string build_summary_prompt(std::string_view content);

struct Judgement {
  Verdict verdict;
  std::string reason;
};
// Accepts "Yes | reason", "No: reason", "Is_The_Triple_Valid: Yes ..." etc.
std::optional<Judgement> parse_judgement(std::string_view reply);

// Returns the page with a verdict, or without one (reason says why) when the
// LLM is unavailable or its reply cannot be parsed.
EvidencePage judge_page(const Triple& triple, EvidencePage page, LlmClient& llm,
                        const DasConfig& config = {});

// Fewer than `min_evidence` verdicts: unverifiable; otherwise strict yes
// majority is factual, anything else (including ties) non-factual.
Outcome majority_vote(std::span<const Verdict> verdicts, std::size_t min_evidence);

// Full pipeline for one triple. The status moves from pending to the outcome;
// any other status is left untouched.
ValidationRecord validate_triple(Triple& triple, const DasConfig& config, const ClientSet& clients);

// Validates independently, up to `config.parallelism` at a time. Records are
// returned in input order.
std::vector<ValidationRecord> validate_all(std::vector<Triple>& triples, const DasConfig& config,
                                           const ClientSet& clients);

}  // namespace asgmkg
