#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "asgmkg/corpus.hpp"
#include "asgmkg/error.hpp"
#include "asgmkg/extract.hpp"
#include "asgmkg/fixture_clients.hpp"
#include "asgmkg/text.hpp"
#include "support.hpp"

using namespace asgmkg;

namespace {

std::vector<Document> corpus_from(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return parse_corpus(in);
}

std::shared_ptr<FixtureTables> verb_tables(std::set<std::string> verbs) {
  auto t = std::make_shared<FixtureTables>();
  t->verbs = std::move(verbs);
  return t;
}

Chunk chunk_of(const std::string& text) {
  return Chunk{{"doc", 1, 0}, text, text::count_words(text)};
}

// Replies from a script, then repeats the last one.
class ScriptedLlm : public LlmClient {
 public:
  explicit ScriptedLlm(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const std::string&) override {
    ++calls;
    const auto i = std::min(next_++, replies_.size() - 1);
    return replies_[i];
  }
  int calls = 0;

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

}  // namespace

TEST(Corpus, PagesGroupIntoOneDocument) {
  const auto docs = corpus_from(
      R"({"document_id":"wwf","page":2,"text":"Second page."})"
      "\n"
      R"({"document_id":"wwf","page":1,"text":"First page."})"
      "\n");
  ASSERT_EQ(docs.size(), 1u);
  ASSERT_EQ(docs[0].pages.size(), 2u);
  EXPECT_EQ(docs[0].pages[0].number, 1);
  EXPECT_EQ(docs[0].pages[1].text, "Second page.");
}

TEST(Corpus, MissingTextIsFormatError) {
  EXPECT_THROW(corpus_from(R"({"document_id":"wwf","page":1})"), CorpusFormatError);
  EXPECT_THROW(corpus_from("not json"), CorpusFormatError);
  EXPECT_THROW(corpus_from(R"({"document_id":"wwf","page":0,"text":"x"})"), CorpusFormatError);
}

TEST(Corpus, DuplicatePageRejected) {
  EXPECT_THROW(corpus_from(R"({"document_id":"a","page":1,"text":"x"})"
                           "\n"
                           R"({"document_id":"a","page":1,"text":"y"})"),
               DuplicatePage);
}

TEST(Corpus, FixtureCorpusLoads) {
  const auto docs = load_corpus(testsupport::fixture_path("corpus.jsonl"));
  EXPECT_EQ(docs.size(), 3u);
}

namespace {

std::string sentence_page(std::mt19937_64& rng, std::size_t words) {
  std::string out;
  std::size_t in_sentence = 0;
  for (std::size_t i = 0; i < words; ++i) {
    if (!out.empty()) out += (rng() % 7 == 0) ? "  " : " ";
    out += testsupport::random_word(rng);
    if (++in_sentence >= 4 + rng() % 20 || i + 1 == words) {
      out += (rng() % 3 == 0) ? "?" : ".";
      in_sentence = 0;
    }
  }
  return out;
}

}  // namespace

TEST(Chunking, SmallPageIsOneChunk) {
  std::mt19937_64 rng(1);
  Document d{"d", {{1, sentence_page(rng, 500)}}};
  const auto chunks = chunk_document(d, 600);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].word_count, 500u);
}

TEST(Chunking, BoundRespected) {
  std::mt19937_64 rng(2);
  Document d{"d", {{1, sentence_page(rng, 500)}}};
  const auto chunks = chunk_document(d, 250);
  EXPECT_GE(chunks.size(), 2u);
  EXPECT_LE(chunks.size(), 3u);
  for (const auto& c : chunks) {
    EXPECT_LE(c.word_count, 250u);
    EXPECT_EQ(c.word_count, text::count_words(c.text));
  }
}

TEST(Chunking, WordsConserved) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 300; ++round) {
    Document d{"d", {}};
    const int pages = 1 + static_cast<int>(rng() % 3);
    for (int p = 1; p <= pages; ++p) d.pages.push_back({p, sentence_page(rng, rng() % 900)});
    const std::size_t max_words = kMinChunkWords + rng() % 400;
    const auto chunks = chunk_document(d, max_words);
    for (const auto& page : d.pages) {
      std::size_t sum = 0;
      int expected_index = 0;
      for (const auto& c : chunks) {
        if (c.source.page != page.number) continue;
        EXPECT_EQ(c.source.chunk_index, expected_index++);
        EXPECT_LE(c.word_count, max_words);
        sum += text::count_words(c.text);
      }
      ASSERT_EQ(sum, text::count_words(page.text)) << "round " << round;
    }
  }
}

TEST(Chunking, MaxWordsBelowFloorRejected) { EXPECT_THROW(chunk_document(Document{"d", {}}, 10), InvalidArgument); }

TEST(ExtractionTable, SingleRow) {
  const auto t = parse_extraction_table("mercury | contaminates | rivers");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].subject_raw, "mercury");
  EXPECT_FALSE(t.unparseable);
}

TEST(ExtractionTable, HeaderAndRows) {
  const auto t = parse_extraction_table("Subject | Predicate | Object\n|---|---|---|\n| a | r | b |\nc | q | d\n");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1].object_raw, "d");
}

TEST(ExtractionTable, NegatedRow) {
  const auto t = parse_extraction_table("a | not restore | b");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].predicate_raw, "restore");
  EXPECT_TRUE(t.rows[0].negated);
}

TEST(ExtractionTable, MalformedRowsSkipped) {
  const auto t = parse_extraction_table("Subject | Predicate | Object\na | b\nx | y | z | w\n | r | o\ngood | row | here\n");
  EXPECT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.skipped.size(), 3u);
  EXPECT_EQ(t.skipped[0].line, 2u);
}

TEST(ExtractionTable, ProseIsUnparseable) {
  EXPECT_TRUE(parse_extraction_table("I could not find any statements.").unparseable);
  EXPECT_FALSE(parse_extraction_table("").unparseable);
}

TEST(Constraints, BoundaryAccepted) {
  CandidateTriple c{"mercury contamination", "harms", "human health"};
  const auto r = enforce_constraints({c});
  ASSERT_EQ(r.accepted.size(), 1u);
  EXPECT_EQ(r.accepted[0].status, Status::pending);
}

TEST(Constraints, LongSubjectRejectedWithReason) {
  const auto r = enforce_constraints({CandidateTriple{"artisanal gold mining", "causes", "deforestation"}});
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].rejection_reason, "subject exceeds two words");
}

TEST(Constraints, NegationTokenNotCounted) {
  const auto r = enforce_constraints({CandidateTriple{"a", "not fully restore", "b"}});
  ASSERT_EQ(r.accepted.size(), 1u);
  EXPECT_TRUE(r.accepted[0].negated);
  EXPECT_EQ(r.accepted[0].predicate.text(), "fully restore");
}

TEST(Constraints, GeneratedCandidatesMatchCountingOracle) {
  std::mt19937_64 rng(10000);
  std::vector<CandidateTriple> candidates;
  std::vector<bool> expect_accept;
  auto field = [&](std::size_t words, bool allow_not) {
    std::string raw = rng() % 4 == 0 ? "  " : "";
    std::vector<std::string> parts;
    if (allow_not && words > 0 && rng() % 4 == 0) parts.push_back(rng() % 2 ? "not" : "Not");
    while (parts.size() < words) parts.push_back(testsupport::random_word(rng));
    for (std::size_t i = 0; i < parts.size(); ++i) raw += (i ? (rng() % 5 == 0 ? "   " : " ") : "") + parts[i];
    if (rng() % 3 == 0) raw += "\t";
    return std::make_pair(raw, parts);
  };
  for (int i = 0; i < 10000; ++i) {
    auto [s, sp] = field(rng() % 5, false);
    auto [p, pp] = field(rng() % 5, true);
    auto [o, op] = field(rng() % 5, false);
    std::size_t pred_words = pp.size();
    if (pp.size() > 1 && text::to_lower(pp[0]) == "not") --pred_words;
    const bool ok = sp.size() >= 1 && sp.size() <= 2 && op.size() >= 1 && op.size() <= 2 && pred_words >= 1 &&
                    pred_words <= 2;
    candidates.push_back(CandidateTriple{s, p, o, rng() % 6 == 0, {"g", 1, i}});
    expect_accept.push_back(ok);
  }
  const auto r = enforce_constraints(candidates);
  std::vector<std::size_t> accepted_idx;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (expect_accept[i]) accepted_idx.push_back(i);
  }
  ASSERT_EQ(r.accepted.size(), accepted_idx.size());
  ASSERT_EQ(r.rejected.size(), candidates.size() - accepted_idx.size());
  std::size_t violations = 0;
  for (std::size_t k = 0; k < accepted_idx.size(); ++k) {
    const auto& t = r.accepted[k];
    const auto& c = candidates[accepted_idx[k]];
    violations += t.provenance.size() != 1 || t.provenance[0] != c.source;
    violations += t.subject.word_count() > 2 || t.object.word_count() > 2 || t.predicate.word_count() > 2;
  }
  EXPECT_EQ(violations, 0u);
  for (const auto& rej : r.rejected) EXPECT_TRUE(rej.rejection_reason.has_value());
}

TEST(FixtureExtraction, DirectSvo) {
  FixtureLlm llm(verb_tables({"contaminates"}));
  const auto c = extract_candidates(chunk_of("Mercury contaminates rivers."), llm);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].subject_raw, "Mercury");
  EXPECT_EQ(c[0].predicate_raw, "contaminates");
  EXPECT_EQ(c[0].object_raw, "rivers");
  EXPECT_FALSE(c[0].negated);
}

TEST(FixtureExtraction, NegationDetected) {
  FixtureLlm llm(verb_tables({"restore"}));
  const auto c = extract_candidates(chunk_of("Mining does not restore forests."), llm);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].subject_raw, "Mining");
  EXPECT_EQ(c[0].predicate_raw, "restore");
  EXPECT_EQ(c[0].object_raw, "forests");
  EXPECT_TRUE(c[0].negated);
}

TEST(FixtureExtraction, PronounResolved) {
  FixtureLlm llm(verb_tables({"use", "poisons"}));
  const auto c = extract_candidates(chunk_of("Miners use mercury. It poisons fish."), llm);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(normalize_label(c[1].subject_raw).text(), "mercury");
}

TEST(FixtureExtraction, PromptLeadsWithTextSection) {
  const auto p = build_extraction_prompt(chunk_of("Mercury contaminates rivers."));
  EXPECT_TRUE(p.starts_with("### TASK: extract-triples\n"));
  EXPECT_NE(p.find("\nText:\nMercury contaminates rivers."), std::string::npos);
}

TEST(Extraction, RetriesOnceThenFails) {
  ScriptedLlm bad({"no table here", "still prose"});
  EXPECT_THROW(extract_candidates(chunk_of("x"), bad), LlmMalformedOutput);
  EXPECT_EQ(bad.calls, 2);
  ScriptedLlm recovers({"no table here", "a | r | b"});
  EXPECT_EQ(extract_candidates(chunk_of("x"), recovers).size(), 1u);
}

TEST(Extraction, ProvenancePointsAtChunk) {
  const auto docs = load_corpus(testsupport::fixture_path("corpus.jsonl"));
  FixtureLlm llm(testsupport::fixture_tables());
  const auto run = run_extraction(docs, llm, {kDefaultChunkWords, 1});
  std::map<SourceRef, std::string> chunk_text;
  for (const auto& d : docs) {
    for (auto& c : chunk_document(d)) chunk_text[c.source] = c.text;
  }
  ASSERT_FALSE(run.decisions.empty());
  for (const auto& d : run.decisions) {
    ASSERT_TRUE(chunk_text.count(d.candidate.source));
    const auto& text = chunk_text[d.candidate.source];
    EXPECT_NE(text.find(d.candidate.object_raw), std::string::npos) << d.candidate.object_raw;
  }
  EXPECT_EQ(run.accepted_count() + run.rejected_count(), run.decisions.size());
  EXPECT_GT(run.rejected_count(), 0u);
}

TEST(Extraction, MalformedChunkRecordedAsFailure) {
  auto tables = std::make_shared<FixtureTables>(*testsupport::fixture_tables());
  const auto docs = corpus_from(
      R"({"document_id":"good","page":1,"text":"Mercury contaminates soil."})"
      "\n"
      R"({"document_id":"bad","page":1,"text":"[[garbled]] Rivers carry mercury."})"
      "\n");
  FixtureLlm llm(tables);
  const auto run = run_extraction(docs, llm);
  ASSERT_EQ(run.failures.size(), 1u);
  EXPECT_EQ(run.failures[0].source.document_id, "bad");
  EXPECT_EQ(run.accepted_count(), 1u);
}

TEST(Extraction, IndependentOfParallelism) {
  const auto docs = load_corpus(testsupport::fixture_path("corpus.jsonl"));
  FixtureLlm llm(testsupport::fixture_tables());
  auto signature = [&](std::size_t par) {
    const auto run = run_extraction(docs, llm, {60, par});
    std::string s;
    for (const auto& d : run.decisions) {
      s += d.candidate.source.document_id + "/" + std::to_string(d.candidate.source.page) + "/" +
           std::to_string(d.candidate.source.chunk_index) + ":" + d.triple_id.value_or("-") + "\n";
    }
    return s;
  };
  const auto base = signature(1);
  EXPECT_EQ(signature(4), base);
  EXPECT_EQ(signature(8), base);
}
