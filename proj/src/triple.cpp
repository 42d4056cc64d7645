#include "asgmkg/triple.hpp"

#include <algorithm>

#include "asgmkg/hash.hpp"

namespace asgmkg {

namespace {

struct StatusName {
  Status status;
  std::string_view name;
};

constexpr StatusName kStatusNames[] = {
    {Status::pending, "pending"},
    {Status::factual, "factual"},
    {Status::non_factual, "non-factual"},
    {Status::unverifiable, "unverifiable"},
    {Status::expert_factual, "expert-factual"},
    {Status::expert_non_factual, "expert-non-factual"},
};

}  // namespace

std::string_view to_string(Status status) {
  for (const auto& s : kStatusNames) {
    if (s.status == status) return s.name;
  }
  return "pending";
}

std::optional<Status> status_from_string(std::string_view name) {
  for (const auto& s : kStatusNames) {
    if (s.name == name) return s.status;
  }
  return std::nullopt;
}

bool is_expert(Status status) {
  return status == Status::expert_factual || status == Status::expert_non_factual;
}

bool is_machine_outcome(Status status) {
  return status == Status::factual || status == Status::non_factual ||
         status == Status::unverifiable;
}

bool can_transition(Status from, Status to) {
  if (is_expert(to)) return true;
  if (is_machine_outcome(to)) return from == Status::pending;
  return false;
}

TripleId make_triple_id(const Label& subject, const Label& predicate, const Label& object,
                        bool negated) {
  std::string key;
  key.reserve(subject.text().size() + predicate.text().size() + object.text().size() + 8);
  key += subject.text();
  key += '\x1f';
  key += predicate.text();
  key += '\x1f';
  key += object.text();
  key += '\x1f';
  key += negated ? '1' : '0';
  return sha256_hex(key).substr(0, 16);
}

std::string Triple::predicate_surface() const {
  return negated ? "not " + predicate.text() : predicate.text();
}

PredicateParts split_negation(const Label& predicate) {
  const auto& t = predicate.text();
  if (t.size() > 4 && t.compare(0, 4, "not ") == 0) {
    return {Label::normalize(t.substr(4)), true};
  }
  return {predicate, false};
}

Triple make_triple(const Label& subject, const Label& predicate, const Label& object,
                   bool negated) {
  auto parts = split_negation(predicate);
  const bool neg = negated || parts.negated;
  Triple t{make_triple_id(subject, parts.predicate, object, neg),
           subject,
           parts.predicate,
           object,
           neg,
           {},
           Status::pending};
  return t;
}

Triple make_triple(std::string_view subject, std::string_view predicate, std::string_view object,
                   bool negated) {
  return make_triple(Label::normalize(subject), Label::normalize(predicate),
                     Label::normalize(object), negated);
}

bool apply_machine_status(Triple& triple, Status outcome) {
  if (!is_machine_outcome(outcome) || !can_transition(triple.status, outcome)) return false;
  triple.status = outcome;
  return true;
}

void apply_expert_status(Triple& triple, Status expert_label) {
  if (is_expert(expert_label)) triple.status = expert_label;
}

void merge_provenance(std::vector<SourceRef>& into, const std::vector<SourceRef>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace asgmkg
