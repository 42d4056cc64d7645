#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asgmkg/das.hpp"
#include "asgmkg/triple.hpp"

namespace asgmkg {

enum class GoldLabel { positive, negative };
std::string_view to_string(GoldLabel g);
std::optional<GoldLabel> gold_from_string(std::string_view s);

struct LabeledTriple {
  Triple triple;
  GoldLabel gold = GoldLabel::positive;
  std::vector<std::string> correction_history;
};

using Dataset = std::vector<LabeledTriple>;

// TSV rows `subject \t predicate \t object \t {1|0}`. An optional header row
// whose label column reads "label" is skipped. Throws BenchmarkFormatError.
Dataset load_benchmark(const std::filesystem::path& path);
Dataset parse_benchmark(std::istream& in);

struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ConfusionResult {
  ConfusionMatrix matrix;
  std::size_t unclassified_count = 0;
};

// Unverifiable predictions are counted, not classified. Throws LengthMismatch.
ConfusionResult confusion(std::span<const GoldLabel> gold, std::span<const Outcome> predicted);

struct MetricsReport {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  std::size_t unclassified_count = 0;
  // Set when the corresponding ratio had a zero denominator (value is 0).
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

// Throws EmptyMatrix when the matrix is empty.
MetricsReport metrics(const ConfusionMatrix& m, std::size_t unclassified_count = 0);

struct BenchmarkOutcome {
  TripleId triple_id;
  GoldLabel gold;
  Outcome outcome;
};

struct BenchmarkRun {
  ConfusionResult confusion;
  MetricsReport report;
  bool empty_matrix = false;  // every prediction unverifiable
  std::vector<BenchmarkOutcome> outcomes;
  std::vector<ValidationRecord> records;
};

BenchmarkRun run_benchmark(const Dataset& dataset, const DasConfig& config,
                           const ClientSet& clients);

struct Correction {
  TripleId triple_id;
  GoldLabel corrected_label;
  std::string evidence_note;
};
using CorrectionSet = std::vector<Correction>;

CorrectionSet load_corrections(const std::filesystem::path& path);
CorrectionSet parse_corrections(std::istream& in);

// Every corrected id must exist (UnknownTripleId) and change its label
// (NoOpCorrection). The dataset is not modified on error.
Dataset apply_corrections(const Dataset& dataset, const CorrectionSet& corrections);

// Corrections that undo `corrections` on the dataset they were applied to.
CorrectionSet invert_corrections(const Dataset& before, const CorrectionSet& corrections);

struct AgreementReport {
  double agreement = 0.0;
  std::size_t compared = 0;
  std::size_t matches = 0;
  std::size_t excluded = 0;  // one side missing or unverifiable
};

// Machine outcome `factual` matches expert-factual and `non_factual`
// matches expert-non-factual. Throws NoOverlap when nothing is comparable.
AgreementReport agreement(const std::map<TripleId, Outcome>& machine,
                          const std::map<TripleId, Status>& expert);

struct ReferenceRow {
  std::string method;
  double accuracy;
  double f1;
};
// Published comparison numbers for the CoDEx-S triple classification task.
const std::vector<ReferenceRow>& reference_results();

// "method  Acc  F1" table, reference rows first.
std::string render_report_table(const MetricsReport& report, std::string_view method_name,
                                bool include_reference = true);

}  // namespace asgmkg
