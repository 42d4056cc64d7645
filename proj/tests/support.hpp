#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asgmkg/clients.hpp"
#include "asgmkg/fixture_clients.hpp"
#include "asgmkg/graph.hpp"
#include "asgmkg/store.hpp"

namespace testsupport {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(ASGMKG_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("asgmkg-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::shared_ptr<const asgmkg::FixtureTables> fixture_tables() {
  static auto tables =
      std::make_shared<const asgmkg::FixtureTables>(asgmkg::load_fixture_tables(fixture_path("fixtures.json")));
  return tables;
}

inline std::string random_word(std::mt19937_64& rng, std::size_t max_len = 6) {
  static const std::string kAlpha = "abcdefghijklmnopqrstuvwxyz";
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> ch(0, kAlpha.size() - 1);
  std::string w;
  for (std::size_t i = len(rng); i > 0; --i) w += kAlpha[ch(rng)];
  return w;
}

// Random graph over `entities` labels e0..eN and `relations` labels r0..rM.
inline asgmkg::KnowledgeGraph random_graph(std::mt19937_64& rng, std::size_t entities, std::size_t relations,
                                           std::size_t triples, bool allow_negation = true) {
  asgmkg::KnowledgeGraph g;
  std::uniform_int_distribution<std::size_t> pick_e(0, entities - 1);
  std::uniform_int_distribution<std::size_t> pick_r(0, relations - 1);
  std::bernoulli_distribution neg(allow_negation ? 0.2 : 0.0);
  for (std::size_t i = 0; i < triples; ++i) {
    auto t = asgmkg::make_triple("e" + std::to_string(pick_e(rng)), "r" + std::to_string(pick_r(rng)),
                                 "e" + std::to_string(pick_e(rng)), neg(rng));
    t.provenance.push_back({"doc", 1, static_cast<int>(i)});
    g.upsert(std::move(t));
  }
  return g;
}

// Project directory wired to the shared fixture tables, with the fixture
// corpus ingested.
inline void init_fixture_project(const std::filesystem::path& root) {
  std::filesystem::create_directories(root);
  write_file(root / "asgmkg.toml", "[clients]\nmode = \"fixture\"\nfixtures = \"" +
                                       fixture_path("fixtures.json").string() + "\"\n");
  asgmkg::ProjectStore(root).ingest(fixture_path("corpus.jsonl"));
}

inline asgmkg::CandidateDecision accepted_decision(const std::string& s, const std::string& p, const std::string& o,
                                                   int index) {
  asgmkg::CandidateDecision d;
  d.candidate.subject_raw = s;
  d.candidate.predicate_raw = p;
  d.candidate.object_raw = o;
  d.candidate.source = {"seed", 1, index};
  d.triple_id = asgmkg::make_triple(s, p, o).id;
  return d;
}

struct SeededAgreement {
  std::vector<asgmkg::TripleId> ids;
};

// 581 triples: 579 with a definite machine outcome and an expert label, 521
// of them in agreement; one unverifiable but reviewed, one validated only.
inline SeededAgreement seed_agreement_project(const std::filesystem::path& root) {
  using namespace asgmkg;
  ProjectStore store(root);
  ExtractionRun run;
  SeededAgreement seeded;
  for (int i = 0; i < 581; ++i) {
    run.decisions.push_back(accepted_decision("s" + std::to_string(i), "relates", "o" + std::to_string(i), i));
    seeded.ids.push_back(*run.decisions.back().triple_id);
  }
  run.chunk_count = 1;
  store.write_extraction(run);
  std::vector<ValidationRecord> records;
  for (int i = 0; i < 581; ++i) {
    ValidationRecord r;
    r.triple_id = seeded.ids[i];
    r.query = "s" + std::to_string(i) + " relates o" + std::to_string(i);
    r.outcome = i == 579 ? Outcome::unverifiable : (i % 2 ? Outcome::factual : Outcome::non_factual);
    records.push_back(r);
  }
  store.append_validation(records);
  for (int i = 0; i < 580; ++i) {
    ReviewEvent e;
    e.triple_id = seeded.ids[i];
    const bool machine_yes = records[i].outcome == Outcome::factual;
    const bool agree = i < 521 || i == 579;
    e.expert_label = (machine_yes == agree) ? Status::expert_factual : Status::expert_non_factual;
    e.reviewer = "seed";
    e.timestamp = "2026-01-01T00:00:00Z";
    store.append_review(e);
  }
  return seeded;
}

}  // namespace testsupport
