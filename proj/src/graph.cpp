#include "asgmkg/graph.hpp"

namespace asgmkg {

namespace {

const std::set<TripleId>& lookup(const KnowledgeGraph::Index& index, const std::string& label) {
  static const std::set<TripleId> kEmpty;
  auto it = index.find(label);
  return it == index.end() ? kEmpty : it->second;
}

}  // namespace

UpsertResult KnowledgeGraph::upsert(Triple triple) {
  auto it = triples_.find(triple.id);
  if (it != triples_.end()) {
    merge_provenance(it->second.provenance, triple.provenance);
    return UpsertResult::merged;
  }
  merge_provenance(triple.provenance, {});
  subject_index_[triple.subject.text()].insert(triple.id);
  predicate_index_[triple.predicate.text()].insert(triple.id);
  object_index_[triple.object.text()].insert(triple.id);
  auto id = triple.id;
  triples_.emplace(std::move(id), std::move(triple));
  return UpsertResult::inserted;
}

const Triple* KnowledgeGraph::find(const TripleId& id) const {
  auto it = triples_.find(id);
  return it == triples_.end() ? nullptr : &it->second;
}

bool KnowledgeGraph::apply_machine_status(const TripleId& id, Status outcome) {
  auto it = triples_.find(id);
  if (it == triples_.end()) return false;
  return asgmkg::apply_machine_status(it->second, outcome);
}

void KnowledgeGraph::apply_expert_status(const TripleId& id, Status expert_label) {
  auto it = triples_.find(id);
  if (it != triples_.end()) asgmkg::apply_expert_status(it->second, expert_label);
}

const std::set<TripleId>& KnowledgeGraph::with_subject(const std::string& label) const {
  return lookup(subject_index_, label);
}
const std::set<TripleId>& KnowledgeGraph::with_predicate(const std::string& label) const {
  return lookup(predicate_index_, label);
}
const std::set<TripleId>& KnowledgeGraph::with_object(const std::string& label) const {
  return lookup(object_index_, label);
}

bool KnowledgeGraph::has_entity(const std::string& label) const {
  return subject_index_.count(label) || object_index_.count(label);
}

std::set<std::string> KnowledgeGraph::entity_labels() const {
  std::set<std::string> out;
  for (const auto& [label, _] : subject_index_) out.insert(label);
  for (const auto& [label, _] : object_index_) out.insert(label);
  return out;
}

std::set<std::string> KnowledgeGraph::relation_labels() const {
  std::set<std::string> out;
  for (const auto& [label, _] : predicate_index_) out.insert(label);
  return out;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.triples_.size() != b.triples_.size()) return false;
  for (auto ia = a.triples_.begin(), ib = b.triples_.begin(); ia != a.triples_.end(); ++ia, ++ib) {
    const Triple& x = ia->second;
    const Triple& y = ib->second;
    if (x.id != y.id || x.subject != y.subject || x.predicate != y.predicate ||
        x.object != y.object || x.negated != y.negated || x.status != y.status ||
        x.provenance != y.provenance) {
      return false;
    }
  }
  return true;
}

GraphStats compute_stats(const KnowledgeGraph& graph) {
  GraphStats s;
  s.triple_count = graph.size();
  s.unique_entity_count = graph.entity_labels().size();
  s.unique_relation_count = graph.predicate_index().size();
  for (Status st : kAllStatuses) s.status_histogram[st] = 0;
  for (const auto& [_, t] : graph.triples()) ++s.status_histogram[t.status];
  return s;
}

NoveltyReport novelty_report(const KnowledgeGraph& graph,
                             const std::set<std::string>& reference_entities,
                             const std::set<std::string>& reference_relations) {
  auto fraction = [](const std::set<std::string>& labels, const std::set<std::string>& ref) {
    if (labels.empty()) return 0.0;
    std::size_t novel = 0;
    for (const auto& l : labels) novel += ref.count(l) == 0;
    return static_cast<double>(novel) / static_cast<double>(labels.size());
  };
  return {fraction(graph.entity_labels(), reference_entities),
          fraction(graph.relation_labels(), reference_relations)};
}

}  // namespace asgmkg
