#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asgmkg/clients.hpp"
#include "asgmkg/corpus.hpp"
#include "asgmkg/triple.hpp"

namespace asgmkg {

inline constexpr std::size_t kMaxLabelWords = 2;

struct CandidateTriple {
  std::string subject_raw;
  std::string predicate_raw;
  std::string object_raw;
  bool negated = false;
  SourceRef source;
  std::optional<std::string> rejection_reason;
};

struct SkippedRow {
  std::size_t line = 0;
  std::string text;
  std::string reason;
};

struct ExtractionTable {
  std::vector<CandidateTriple> rows;
  std::vector<SkippedRow> skipped;
  // True when the reply had content but no header or data row was recognized.
  bool unparseable = false;
};

// Pipe-delimited `subject | predicate | object` rows, optional header and
// markdown ruling. A predicate starting with "not " sets `negated`.
ExtractionTable parse_extraction_table(std::string_view reply);

std::string build_extraction_prompt(const Chunk& chunk);

// Throws LlmUnavailable, or LlmMalformedOutput when both the first attempt
// and the single retry are unparseable.
std::vector<CandidateTriple> extract_candidates(const Chunk& chunk, LlmClient& llm);

struct ConstraintResult {
  std::vector<Triple> accepted;
  std::vector<CandidateTriple> rejected;
};

ConstraintResult enforce_constraints(const std::vector<CandidateTriple>& candidates);

// Per-candidate decision, used for the extraction report.
struct CandidateDecision {
  CandidateTriple candidate;
  std::optional<TripleId> triple_id;  // set iff accepted
};

struct ChunkFailure {
  SourceRef source;
  std::string error;
};

struct ExtractionOptions {
  std::size_t max_words = kDefaultChunkWords;
  std::size_t parallelism = 1;
};

struct ExtractionRun {
  std::vector<CandidateDecision> decisions;  // sorted by source, then reply order
  std::vector<ChunkFailure> failures;
  std::size_t chunk_count = 0;

  std::size_t accepted_count() const;
  std::size_t rejected_count() const;
};

ExtractionRun run_extraction(const std::vector<Document>& corpus, LlmClient& llm,
                             const ExtractionOptions& options = {});

}  // namespace asgmkg
