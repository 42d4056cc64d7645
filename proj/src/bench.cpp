#include "asgmkg/bench.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "asgmkg/error.hpp"
#include "asgmkg/json_io.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

std::string_view to_string(GoldLabel g) { return g == GoldLabel::positive ? "positive" : "negative"; }

std::optional<GoldLabel> gold_from_string(std::string_view s) {
  if (s == "positive" || s == "1") return GoldLabel::positive;
  if (s == "negative" || s == "0") return GoldLabel::negative;
  return std::nullopt;
}

Dataset parse_benchmark(std::istream& in) {
  Dataset out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim_ascii(line).empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4) {
      throw BenchmarkFormatError(row, "expected 4 tab-separated columns, got " + std::to_string(cols.size()));
    }
    const auto label = std::string(text::trim_ascii(cols[3]));
    if (out.empty() && text::to_lower(label) == "label") continue;
    GoldLabel gold;
    if (label == "1") gold = GoldLabel::positive;
    else if (label == "0") gold = GoldLabel::negative;
    else throw BenchmarkFormatError(row, "label must be 1 or 0, got \"" + label + "\"");
    try {
      out.push_back(LabeledTriple{make_triple(cols[0], cols[1], cols[2]), gold, {}});
    } catch (const EmptyLabel&) {
      throw BenchmarkFormatError(row, "empty subject, predicate or object");
    }
  }
  return out;
}

Dataset load_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BenchmarkFormatError(0, "cannot open " + path.string());
  return parse_benchmark(in);
}

ConfusionResult confusion(std::span<const GoldLabel> gold, std::span<const Outcome> predicted) {
  if (gold.size() != predicted.size()) {
    throw LengthMismatch("gold has " + std::to_string(gold.size()) + " labels, predictions " +
                         std::to_string(predicted.size()));
  }
  ConfusionResult r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool pos = gold[i] == GoldLabel::positive;
    switch (predicted[i]) {
      case Outcome::factual: ++(pos ? r.matrix.tp : r.matrix.fp); break;
      case Outcome::non_factual: ++(pos ? r.matrix.fn : r.matrix.tn); break;
      case Outcome::unverifiable: ++r.unclassified_count; break;
    }
  }
  return r;
}

MetricsReport metrics(const ConfusionMatrix& m, std::size_t unclassified_count) {
  const auto total = m.total();
  if (total == 0) throw EmptyMatrix("confusion matrix is empty");
  MetricsReport r;
  r.unclassified_count = unclassified_count;
  r.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
  if (m.tp + m.fp == 0) r.precision_undefined = true;
  else r.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn == 0) r.recall_undefined = true;
  else r.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  if (r.precision + r.recall > 0) r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  else r.f1_undefined = true;
  return r;
}

BenchmarkRun run_benchmark(const Dataset& dataset, const DasConfig& config, const ClientSet& clients) {
  std::vector<Triple> triples;
  triples.reserve(dataset.size());
  for (const auto& item : dataset) {
    Triple t = item.triple;
    t.status = Status::pending;
    triples.push_back(std::move(t));
  }
  BenchmarkRun run;
  run.records = validate_all(triples, config, clients);
  std::vector<GoldLabel> gold;
  std::vector<Outcome> predicted;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    gold.push_back(dataset[i].gold);
    predicted.push_back(run.records[i].outcome);
    run.outcomes.push_back({dataset[i].triple.id, dataset[i].gold, run.records[i].outcome});
  }
  run.confusion = confusion(gold, predicted);
  try {
    run.report = metrics(run.confusion.matrix, run.confusion.unclassified_count);
  } catch (const EmptyMatrix&) {
    run.empty_matrix = true;
    run.report = MetricsReport{};
    run.report.unclassified_count = run.confusion.unclassified_count;
    run.report.precision_undefined = run.report.recall_undefined = run.report.f1_undefined = true;
  }
  return run;
}

CorrectionSet parse_corrections(std::istream& in) {
  CorrectionSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim_ascii(line).empty()) continue;
    try {
      const auto j = Json::parse(line);
      auto label = gold_from_string(j.at("corrected_label").get<std::string>());
      if (!label) throw ParseError(line_no, "corrected_label must be positive or negative");
      out.push_back({j.at("triple_id").get<std::string>(), *label, j.value("evidence_note", "")});
    } catch (const Json::exception& e) {
      throw ParseError(line_no, std::string("bad correction record: ") + e.what());
    }
  }
  return out;
}

CorrectionSet load_corrections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_corrections(in);
}

Dataset apply_corrections(const Dataset& dataset, const CorrectionSet& corrections) {
  Dataset out = dataset;
  std::map<TripleId, std::vector<std::size_t>> where;
  for (std::size_t i = 0; i < out.size(); ++i) where[out[i].triple.id].push_back(i);
  for (const auto& c : corrections) {
    auto it = where.find(c.triple_id);
    if (it == where.end()) throw UnknownTripleId("no benchmark triple with id " + c.triple_id);
    for (std::size_t i : it->second) {
      auto& item = out[i];
      if (item.gold == c.corrected_label) {
        throw NoOpCorrection("triple " + c.triple_id + " is already " +
                             std::string(to_string(c.corrected_label)));
      }
      item.correction_history.push_back(std::string(to_string(item.gold)) + " -> " +
                                        std::string(to_string(c.corrected_label)) +
                                        (c.evidence_note.empty() ? "" : ": " + c.evidence_note));
      item.gold = c.corrected_label;
    }
  }
  return out;
}

CorrectionSet invert_corrections(const Dataset& before, const CorrectionSet& corrections) {
  std::map<TripleId, GoldLabel> original;
  for (const auto& item : before) original.emplace(item.triple.id, item.gold);
  CorrectionSet inverse;
  for (auto it = corrections.rbegin(); it != corrections.rend(); ++it) {
    auto o = original.find(it->triple_id);
    if (o == original.end()) throw UnknownTripleId("no benchmark triple with id " + it->triple_id);
    inverse.push_back({it->triple_id, o->second, "revert: " + it->evidence_note});
  }
  return inverse;
}

AgreementReport agreement(const std::map<TripleId, Outcome>& machine,
                          const std::map<TripleId, Status>& expert) {
  AgreementReport r;
  std::set<TripleId> ids;
  for (const auto& [id, _] : machine) ids.insert(id);
  for (const auto& [id, _] : expert) ids.insert(id);
  for (const auto& id : ids) {
    const auto m = machine.find(id);
    const auto e = expert.find(id);
    if (m == machine.end() || e == expert.end() || m->second == Outcome::unverifiable ||
        !is_expert(e->second)) {
      ++r.excluded;
      continue;
    }
    ++r.compared;
    const bool machine_yes = m->second == Outcome::factual;
    const bool expert_yes = e->second == Status::expert_factual;
    r.matches += machine_yes == expert_yes;
  }
  if (r.compared == 0) throw NoOverlap("no triple has both a machine outcome and an expert label");
  r.agreement = static_cast<double>(r.matches) / static_cast<double>(r.compared);
  return r;
}

const std::vector<ReferenceRow>& reference_results() {
  static const std::vector<ReferenceRow> kRows = {
      {"RESCAL", 0.843, 0.852},
      {"TransE", 0.829, 0.837},
      {"ComplEx", 0.836, 0.846},
      {"ConvE", 0.841, 0.846},
      {"TuckER", 0.840, 0.846},
      {"DAS (reported, without GT validation)", 0.852, 0.836},
      {"DAS (reported, with GT validation)", 0.914, 0.908},
  };
  return kRows;
}

std::string render_report_table(const MetricsReport& report, std::string_view method_name,
                                bool include_reference) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-40s %6s %6s\n", "Method", "Acc", "F1");
  out << buf;
  if (include_reference) {
    for (const auto& row : reference_results()) {
      std::snprintf(buf, sizeof buf, "%-40s %6.3f %6.3f\n", row.method.c_str(), row.accuracy, row.f1);
      out << buf;
    }
  }
  std::snprintf(buf, sizeof buf, "%-40s %6.3f %6.3f\n", std::string(method_name).c_str(),
                report.accuracy, report.f1);
  out << buf;
  out << "unclassified (unverifiable): " << report.unclassified_count << "\n";
  return out.str();
}

}  // namespace asgmkg
