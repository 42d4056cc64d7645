#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asgmkg/label.hpp"

namespace asgmkg {

struct SourceRef {
  std::string document_id;
  int page = 1;
  int chunk_index = 0;

  friend auto operator<=>(const SourceRef&, const SourceRef&) = default;
  friend bool operator==(const SourceRef&, const SourceRef&) = default;
};

enum class Status {
  pending,
  factual,
  non_factual,
  unverifiable,
  expert_factual,
  expert_non_factual,
};

inline constexpr Status kAllStatuses[] = {Status::pending,        Status::factual,
                                          Status::non_factual,    Status::unverifiable,
                                          Status::expert_factual, Status::expert_non_factual};

std::string_view to_string(Status status);
std::optional<Status> status_from_string(std::string_view name);
bool is_expert(Status status);
bool is_machine_outcome(Status status);

// Machine labels only move out of `pending`; expert labels are reachable
// from anywhere and never overwritten by a machine label.
bool can_transition(Status from, Status to);

using TripleId = std::string;

// Deterministic content hash of the identity fields.
TripleId make_triple_id(const Label& subject, const Label& predicate, const Label& object,
                        bool negated);

struct Triple {
  TripleId id;
  Label subject;
  Label predicate;
  Label object;
  bool negated = false;
  std::vector<SourceRef> provenance;
  Status status = Status::pending;

  // Predicate as written in text, e.g. "not restore".
  std::string predicate_surface() const;
};

// Builds a pending triple. A predicate whose first token is "not" (and has
// more tokens) is stripped of it and the triple is marked negated.
Triple make_triple(const Label& subject, const Label& predicate, const Label& object,
                   bool negated = false);
Triple make_triple(std::string_view subject, std::string_view predicate, std::string_view object,
                   bool negated = false);

// Splits a leading "not " token off a predicate label.
struct PredicateParts {
  Label predicate;
  bool negated;
};
PredicateParts split_negation(const Label& predicate);

// Applies a machine outcome if the transition is allowed; returns whether
// the status changed.
bool apply_machine_status(Triple& triple, Status outcome);
void apply_expert_status(Triple& triple, Status expert_label);

// Sorted, deduplicated union.
void merge_provenance(std::vector<SourceRef>& into, const std::vector<SourceRef>& from);

}  // namespace asgmkg
