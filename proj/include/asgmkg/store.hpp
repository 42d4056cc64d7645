#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "asgmkg/corpus.hpp"
#include "asgmkg/das.hpp"
#include "asgmkg/extract.hpp"
#include "asgmkg/graph.hpp"

namespace asgmkg {

struct ReviewEvent {
  TripleId triple_id;
  Status expert_label = Status::expert_factual;
  std::string reviewer;
  std::string note;
  std::string timestamp;  // ISO-8601 UTC
};

// State folded from the project logs.
struct Snapshot {
  KnowledgeGraph graph;
  std::map<TripleId, ValidationRecord> validation;  // latest record per triple
  std::map<TripleId, ReviewEvent> reviews;          // latest event per triple
  std::size_t review_event_count = 0;
};

// Directory-backed, event-sourced project. The extraction report, validation
// log and review log are the source of truth; graph.nt and sidecar.jsonl are
// derived and can be deleted and rebuilt at any time.
class ProjectStore {
 public:
  explicit ProjectStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path corpus_path() const { return root_ / "corpus.jsonl"; }
  std::filesystem::path extraction_report_path() const { return root_ / "extraction_report.jsonl"; }
  std::filesystem::path extraction_failures_path() const {
    return root_ / "extraction_failures.jsonl";
  }
  std::filesystem::path validation_log_path() const { return root_ / "validation.jsonl"; }
  std::filesystem::path review_log_path() const { return root_ / "reviews.jsonl"; }
  std::filesystem::path graph_path() const { return root_ / "graph.nt"; }
  std::filesystem::path sidecar_path() const { return root_ / "sidecar.jsonl"; }
  std::filesystem::path cache_dir() const { return root_ / "cache"; }

  // Validates and copies the corpus into the project.
  std::size_t ingest(const std::filesystem::path& corpus_file) const;
  std::vector<Document> corpus() const;

  // Replaces the extraction report and failure list.
  void write_extraction(const ExtractionRun& run) const;
  void append_validation(const std::vector<ValidationRecord>& records) const;
  void append_review(const ReviewEvent& event) const;

  // Folds the logs. Throws CorruptLog.
  Snapshot load() const;
  // load() plus rewriting graph.nt and sidecar.jsonl.
  Snapshot rebuild() const;

 private:
  std::filesystem::path root_;
};

std::string sidecar_jsonl(const Snapshot& snapshot);

// Status-filtered N-Triples: factual and expert-factual triples only, unless
// `include_all`.
std::string export_ntriples(const Snapshot& snapshot, bool include_all = false);

}  // namespace asgmkg
