#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asgmkg/clients.hpp"
#include "asgmkg/graph.hpp"

namespace asgmkg {

struct Pattern {
  std::optional<Label> subject;
  std::optional<Label> predicate;
  std::optional<Label> object;
  // Set by a predicate written as "not <verb>"; unset matches either.
  std::optional<bool> negated;

  // Builds from raw strings; empty strings mean "absent". Throws
  // InvalidArgument when every field is absent.
  static Pattern from_raw(std::string_view subject, std::string_view predicate,
                          std::string_view object);
};

// Triples matching every present field, ordered by id.
std::vector<Triple> match_pattern(const KnowledgeGraph& graph, const Pattern& pattern);

enum class Direction { out, in, both };
std::string_view to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

struct Subgraph {
  std::string source;
  std::size_t k = 0;
  std::set<TripleId> triples;
  std::map<std::string, std::size_t> distance;
};

// Breadth-first expansion. A triple is included when the endpoint it is
// traversed from lies at distance < k. Throws UnknownEntity.
Subgraph k_hop(const KnowledgeGraph& graph, const Label& source, std::size_t k,
               Direction direction = Direction::both);

struct Path {
  std::vector<TripleId> triples;
  std::vector<std::string> entities;  // source .. target
};

struct PathResult {
  std::string source;
  std::string target;
  std::vector<Path> paths;
  bool truncated = false;
};

struct PathLimits {
  std::size_t max_hops_ceiling = 6;
  std::size_t result_cap = 1000;
};

// Simple paths of at most `max_hops` edges, shortest first, ties in
// lexicographic triple-id order. Sets `truncated` when more than
// `result_cap` paths exist. Throws UnknownEntity / InvalidArgument.
PathResult enumerate_paths(const KnowledgeGraph& graph, const Label& source, const Label& target,
                           std::size_t max_hops, Direction direction = Direction::both,
                           const PathLimits& limits = {});

// "<subject> <predicate> <object>." with "not" for negated triples.
std::string triple_sentence(const Triple& triple);

std::string render_summary(const KnowledgeGraph& graph, const Subgraph& subgraph);
std::string render_summary(const KnowledgeGraph& graph, const PathResult& paths);

// Optional paraphrase of a template summary through an LLM.
std::string paraphrase_summary(const std::string& summary, LlmClient& llm);

struct ChatAnswer {
  std::string answer;
  std::vector<TripleId> cited;
};

inline constexpr std::string_view kNoSupportReply =
    "No supporting statements were found in the knowledge graph.";

// Up to `budget` triples ranked by shared keyword count with the question,
// ties by id; zero-overlap triples are never retrieved.
std::vector<TripleId> retrieve_for_chat(const std::string& question, const KnowledgeGraph& graph,
                                        std::size_t budget);

std::string build_chat_prompt(const std::string& question, const KnowledgeGraph& graph,
                              const std::vector<TripleId>& context);

// Throws LlmUnavailable. Without retrieved context the LLM is not called.
ChatAnswer chat_answer(const std::string& question, const KnowledgeGraph& graph, LlmClient& llm,
                       std::size_t retrieval_budget);

}  // namespace asgmkg
