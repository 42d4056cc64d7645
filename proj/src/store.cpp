#include "asgmkg/store.hpp"

#include <fstream>
#include <sstream>

#include "asgmkg/error.hpp"
#include "asgmkg/json_io.hpp"
#include "asgmkg/ntriples.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

void append_lines(const std::filesystem::path& path, const std::string& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("IoError", "cannot append to " + path.string());
  out << lines;
  out.flush();
  if (!out) throw Error("IoError", "write to " + path.string() + " failed");
}

// Calls `fn(json, line_no)` for every non-blank line; missing file is empty.
template <class Fn>
void for_each_record(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  const auto name = path.filename().string();
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim_ascii(line).empty()) continue;
    try {
      fn(Json::parse(line), line_no);
    } catch (const Json::exception& e) {
      throw CorruptLog(name, line_no, e.what());
    } catch (const CorruptLog&) {
      throw;
    } catch (const Error& e) {
      throw CorruptLog(name, line_no, e.what());
    }
  }
}

Json review_to_json(const ReviewEvent& e) {
  return Json{{"triple_id", e.triple_id},
              {"expert_label", std::string(to_string(e.expert_label))},
              {"reviewer", e.reviewer},
              {"note", e.note},
              {"timestamp", e.timestamp}};
}

ReviewEvent review_from_json(const Json& j) {
  ReviewEvent e;
  e.triple_id = j.at("triple_id").get<std::string>();
  const auto label = status_from_string(j.at("expert_label").get<std::string>());
  if (!label || !is_expert(*label)) throw InvalidArgument("review label must be expert-factual or expert-non-factual");
  e.expert_label = *label;
  e.reviewer = j.value("reviewer", "");
  e.note = j.value("note", "");
  e.timestamp = j.value("timestamp", "");
  return e;
}

}  // namespace

ProjectStore::ProjectStore(std::filesystem::path root) : root_(std::move(root)) {}

std::size_t ProjectStore::ingest(const std::filesystem::path& corpus_file) const {
  const auto docs = load_corpus(corpus_file);
  std::filesystem::create_directories(root_);
  std::ifstream in(corpus_file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  write_file(corpus_path(), ss.str());
  return docs.size();
}

std::vector<Document> ProjectStore::corpus() const { return load_corpus(corpus_path()); }

void ProjectStore::write_extraction(const ExtractionRun& run) const {
  std::filesystem::create_directories(root_);
  std::string report;
  for (const auto& d : run.decisions) report += candidate_to_json(d).dump() + "\n";
  write_file(extraction_report_path(), report);
  std::string failures;
  for (const auto& f : run.failures) {
    failures += Json{{"source", f.source}, {"error", f.error}}.dump() + "\n";
  }
  write_file(extraction_failures_path(), failures);
}

void ProjectStore::append_validation(const std::vector<ValidationRecord>& records) const {
  std::string lines;
  for (const auto& r : records) lines += Json(r).dump() + "\n";
  if (!lines.empty()) append_lines(validation_log_path(), lines);
}

void ProjectStore::append_review(const ReviewEvent& event) const {
  if (!is_expert(event.expert_label)) throw InvalidArgument("review label must be an expert status");
  append_lines(review_log_path(), review_to_json(event).dump() + "\n");
}

Snapshot ProjectStore::load() const {
  Snapshot s;
  for_each_record(extraction_report_path(), [&](const Json& j, std::size_t line_no) {
    const auto d = candidate_from_json(j);
    if (!d.triple_id) return;
    auto checked = enforce_constraints({d.candidate});
    if (checked.accepted.empty() || checked.accepted.front().id != *d.triple_id) {
      throw CorruptLog(extraction_report_path().filename().string(), line_no,
                       "triple_id " + *d.triple_id + " does not match its fields");
    }
    s.graph.upsert(std::move(checked.accepted.front()));
  });
  for_each_record(validation_log_path(), [&](const Json& j, std::size_t) {
    auto rec = j.get<ValidationRecord>();
    if (!s.graph.contains(rec.triple_id)) return;
    auto id = rec.triple_id;
    s.validation.insert_or_assign(std::move(id), std::move(rec));
  });
  for (const auto& [id, rec] : s.validation) s.graph.apply_machine_status(id, to_status(rec.outcome));
  for_each_record(review_log_path(), [&](const Json& j, std::size_t) {
    auto e = review_from_json(j);
    ++s.review_event_count;
    auto id = e.triple_id;
    s.reviews.insert_or_assign(std::move(id), std::move(e));
  });
  for (const auto& [id, e] : s.reviews) s.graph.apply_expert_status(id, e.expert_label);
  return s;
}

Snapshot ProjectStore::rebuild() const {
  auto s = load();
  std::filesystem::create_directories(root_);
  write_file(graph_path(), serialize_ntriples(s.graph));
  write_file(sidecar_path(), sidecar_jsonl(s));
  return s;
}

std::string sidecar_jsonl(const Snapshot& snapshot) {
  std::string out;
  for (const auto& [id, t] : snapshot.graph.triples()) {
    Json j = triple_to_json(t);
    auto v = snapshot.validation.find(id);
    j["machine_outcome"] = v == snapshot.validation.end() ? Json(nullptr) : Json(std::string(to_string(v->second.outcome)));
    auto r = snapshot.reviews.find(id);
    j["reviewed_at"] = r == snapshot.reviews.end() ? Json(nullptr) : Json(r->second.timestamp);
    j["reviewer"] = r == snapshot.reviews.end() ? Json(nullptr) : Json(r->second.reviewer);
    out += j.dump() + "\n";
  }
  return out;
}

std::string export_ntriples(const Snapshot& snapshot, bool include_all) {
  if (include_all) return serialize_ntriples(snapshot.graph);
  KnowledgeGraph published;
  for (const auto& [_, t] : snapshot.graph.triples()) {
    if (t.status == Status::factual || t.status == Status::expert_factual) published.upsert(t);
  }
  return serialize_ntriples(published);
}

}  // namespace asgmkg
