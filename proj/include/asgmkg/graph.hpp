#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asgmkg/triple.hpp"

namespace asgmkg {

enum class UpsertResult { inserted, merged };

// Deduplicated triple set with label indexes. A plain value type: copy it to
// take a snapshot.
class KnowledgeGraph {
 public:
  using Index = std::map<std::string, std::set<TripleId>>;

  UpsertResult upsert(Triple triple);

  const Triple* find(const TripleId& id) const;
  bool contains(const TripleId& id) const { return triples_.count(id) != 0; }

  bool apply_machine_status(const TripleId& id, Status outcome);
  void apply_expert_status(const TripleId& id, Status expert_label);

  const std::map<TripleId, Triple>& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  const Index& subject_index() const noexcept { return subject_index_; }
  const Index& predicate_index() const noexcept { return predicate_index_; }
  const Index& object_index() const noexcept { return object_index_; }

  // Empty set when the label is not indexed.
  const std::set<TripleId>& with_subject(const std::string& label) const;
  const std::set<TripleId>& with_predicate(const std::string& label) const;
  const std::set<TripleId>& with_object(const std::string& label) const;

  bool has_entity(const std::string& label) const;
  std::set<std::string> entity_labels() const;
  std::set<std::string> relation_labels() const;

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

 private:
  std::map<TripleId, Triple> triples_;
  Index subject_index_;
  Index predicate_index_;
  Index object_index_;
};

struct GraphStats {
  std::size_t triple_count = 0;
  std::size_t unique_entity_count = 0;
  std::size_t unique_relation_count = 0;
  std::map<Status, std::size_t> status_histogram;
};

GraphStats compute_stats(const KnowledgeGraph& graph);

struct NoveltyReport {
  double entity_novel_fraction = 0.0;
  double relation_novel_fraction = 0.0;
};

// Fractions of graph labels absent from the reference sets; 0 for an empty
// graph.
NoveltyReport novelty_report(const KnowledgeGraph& graph,
                             const std::set<std::string>& reference_entities,
                             const std::set<std::string>& reference_relations);

}  // namespace asgmkg
