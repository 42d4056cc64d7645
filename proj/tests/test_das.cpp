#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "asgmkg/das.hpp"
#include "asgmkg/error.hpp"
#include "asgmkg/fixture_clients.hpp"
#include "asgmkg/json_io.hpp"
#include "support.hpp"

using namespace asgmkg;

namespace {

SearchHit hit(const std::string& domain, const std::string& path, const std::string& title = "mercury rivers") {
  return {"https://" + domain + "/" + path, title, ""};
}

class FailingLlm : public LlmClient {
 public:
  std::string complete(const std::string&) override { throw LlmUnavailable("down"); }
};

class ConstantLlm : public LlmClient {
 public:
  explicit ConstantLlm(std::string reply) : reply_(std::move(reply)) {}
  std::string complete(const std::string& prompt) override {
    prompts.push_back(prompt);
    return reply_;
  }
  std::vector<std::string> prompts;

 private:
  std::string reply_;
};

// Tables with one domain per score, each serving a page that either supports
// the triple or not.
std::shared_ptr<FixtureTables> scored_tables(const Triple& t, const std::vector<double>& scores,
                                             const std::vector<bool>& supports) {
  auto tables = std::make_shared<FixtureTables>();
  const auto query = build_query(t);
  auto& hits = tables->search[query];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto domain = "d" + std::to_string(i) + ".org";
    const auto h = hit(domain, "p", t.subject.text());
    hits.push_back(h);
    tables->pagerank[domain] = scores[i];
    tables->pages[h.url] = supports[i] ? query + " as reported." : "unrelated " + t.subject.text();
  }
  return tables;
}

std::vector<double> scores_of(const std::vector<EvidencePage>& pages) {
  std::vector<double> s;
  for (const auto& p : pages) s.push_back(p.relevance_score);
  return s;
}

}  // namespace

TEST(Query, Concatenation) {
  EXPECT_EQ(build_query(make_triple("mercury", "contaminates", "rivers")), "mercury contaminates rivers");
  EXPECT_EQ(build_query(make_triple("mining", "restore", "forests", true)), "mining not restore forests");
  EXPECT_EQ(build_query(make_triple("gold mining", "causes", "deforestation")), "gold mining causes deforestation");
}

TEST(Retrieve, TruncatesToN) {
  auto tables = std::make_shared<FixtureTables>();
  for (int i = 0; i < 12; ++i) tables->search["mercury rivers"].push_back(hit("s" + std::to_string(i) + ".org", "x"));
  FixtureSearch search(tables);
  EXPECT_EQ(retrieve_evidence("mercury rivers", search, DasConfig{}).size(), 10u);
}

TEST(Retrieve, DropsHitsWithoutQueryKeyword) {
  auto tables = std::make_shared<FixtureTables>();
  tables->search["mercury contaminates rivers"] = {hit("a.org", "1", "Mercury in the Amazon"),
                                                   hit("b.org", "2", "Cooking recipes"),
                                                   hit("a.org", "1", "duplicate of first")};
  FixtureSearch search(tables);
  const auto hits = retrieve_evidence("mercury contaminates rivers", search, DasConfig{});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].url, "https://a.org/1");
}

TEST(Retrieve, ZeroHits) {
  FixtureSearch search(std::make_shared<FixtureTables>());
  EXPECT_TRUE(retrieve_evidence("anything at all", search, DasConfig{}).empty());
}

TEST(ScoreFilter, ThresholdSeven) {
  const auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {9, 8, 7, 6, 3}, {true, true, true, true, true});
  FixtureSearch search(tables);
  FixturePageRank pr(tables);
  const auto pages = score_and_filter(tables->search.begin()->second, pr, search, DasConfig{});
  EXPECT_EQ(scores_of(pages), (std::vector<double>{9, 8, 7}));
  for (const auto& p : pages) EXPECT_FALSE(p.content.empty());
}

TEST(ScoreFilter, TopKWithStableTies) {
  const auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {7, 9, 8, 9, 8, 7}, std::vector<bool>(6, true));
  FixtureSearch search(tables);
  FixturePageRank pr(tables);
  const auto pages = score_and_filter(tables->search.begin()->second, pr, search, DasConfig{});
  ASSERT_EQ(pages.size(), 5u);
  EXPECT_EQ(scores_of(pages), (std::vector<double>{9, 9, 8, 8, 7}));
  EXPECT_EQ(pages[0].url, "https://d1.org/p");
  EXPECT_EQ(pages[1].url, "https://d3.org/p");
  EXPECT_EQ(pages[4].url, "https://d0.org/p");
}

TEST(ScoreFilter, AllBelowThreshold) {
  const auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {6.99, 3, 0}, {true, true, true});
  FixtureSearch search(tables);
  FixturePageRank pr(tables);
  EXPECT_TRUE(score_and_filter(tables->search.begin()->second, pr, search, DasConfig{}).empty());
}

TEST(ScoreFilter, OutagesAndMissingPagesAreRecorded) {
  auto tables = std::make_shared<FixtureTables>();
  tables->pagerank = {{"good.org", 9}, {"gone.org", 8}, {"down.org", 9.5}};
  tables->pagerank_unavailable = {"down.org"};
  tables->pages["https://good.org/a"] = "text";
  const std::vector<SearchHit> hits = {hit("good.org", "a"), hit("gone.org", "b"), hit("down.org", "c"),
                                       hit("stranger.net", "d")};
  FixtureSearch search(tables);
  FixturePageRank pr(tables);
  FilterLog log;
  const auto pages = score_and_filter(hits, pr, search, DasConfig{}, &log);
  ASSERT_EQ(pages.size(), 1u);
  EXPECT_EQ(pages[0].url, "https://good.org/a");
  ASSERT_EQ(log.scored.size(), 4u);
  EXPECT_EQ(log.scored[2].score, 0.0);
  std::set<std::string> stages;
  for (const auto& d : log.degradations) stages.insert(d.stage);
  EXPECT_EQ(stages, (std::set<std::string>{"fetch", "pagerank"}));
  EXPECT_EQ(log.degradations.size(), 3u);
}

TEST(Judge, FixtureYesAndNo) {
  FixtureLlm llm(std::make_shared<FixtureTables>());
  const auto t = make_triple("mercury", "contaminates", "rivers");
  auto yes = judge_page(t, EvidencePage{"u", 9, "Mercury contaminates nearby rivers."}, llm);
  EXPECT_EQ(yes.verdict, Verdict::yes);
  auto no = judge_page(t, EvidencePage{"u", 9, "Mercury is found near rivers."}, llm);
  EXPECT_EQ(no.verdict, Verdict::no);
  EXPECT_FALSE(no.reason.empty());
}

TEST(Judge, UnparseableAndUnavailableExcluded) {
  const auto t = make_triple("mercury", "contaminates", "rivers");
  ConstantLlm rambling("Well, it depends on many things.");
  EXPECT_FALSE(judge_page(t, EvidencePage{"u", 9, "x"}, rambling).verdict.has_value());
  FailingLlm down;
  const auto p = judge_page(t, EvidencePage{"u", 9, "x"}, down);
  EXPECT_FALSE(p.verdict.has_value());
  EXPECT_NE(p.reason.find("LlmUnavailable"), std::string::npos);
}

TEST(Judge, ContentTruncatedToBudget) {
  const auto t = make_triple("mercury", "contaminates", "rivers");
  ConstantLlm llm("Yes | ok");
  std::string content;
  for (int i = 0; i < 3000; ++i) content += "w" + std::to_string(i) + " ";
  DasConfig cfg;
  cfg.content_word_budget = 2000;
  judge_page(t, EvidencePage{"u", 9, content}, llm, cfg);
  ASSERT_EQ(llm.prompts.size(), 1u);
  EXPECT_NE(llm.prompts[0].find("w1999"), std::string::npos);
  EXPECT_EQ(llm.prompts[0].find("w2000 "), std::string::npos);
}

TEST(Judge, SummarizeModeCallsTwice) {
  const auto t = make_triple("mercury", "contaminates", "rivers");
  ConstantLlm llm("Yes | ok");
  DasConfig cfg;
  cfg.judge_mode = JudgeMode::summarize;
  EXPECT_EQ(judge_page(t, EvidencePage{"u", 9, "page"}, llm, cfg).verdict, Verdict::yes);
  ASSERT_EQ(llm.prompts.size(), 2u);
  EXPECT_TRUE(llm.prompts[0].starts_with("### TASK: summarize-page"));
  EXPECT_TRUE(llm.prompts[1].starts_with("### TASK: judge-triple"));
}

TEST(Judge, ParseJudgementForms) {
  EXPECT_EQ(parse_judgement("Yes | supported")->verdict, Verdict::yes);
  EXPECT_EQ(parse_judgement("Yes | supported")->reason, "supported");
  EXPECT_EQ(parse_judgement("**No**: contradicts")->verdict, Verdict::no);
  EXPECT_EQ(parse_judgement("is_the_triple_valid: yes")->verdict, Verdict::yes);
  EXPECT_FALSE(parse_judgement("Nothing to say"));
  EXPECT_FALSE(parse_judgement("Yesterday it rained"));
  EXPECT_FALSE(parse_judgement(""));
}

TEST(Vote, Examples) {
  const std::vector<Verdict> yyn = {Verdict::yes, Verdict::yes, Verdict::no};
  EXPECT_EQ(majority_vote(yyn, 1), Outcome::factual);
  EXPECT_EQ(majority_vote({}, 1), Outcome::unverifiable);
  const std::vector<Verdict> tie = {Verdict::yes, Verdict::no};
  EXPECT_EQ(majority_vote(tie, 1), Outcome::non_factual);
}

TEST(Vote, ExhaustiveAgainstCountingOracle) {
  for (std::size_t m = 0; m <= 7; ++m) {
    for (std::size_t min_evidence = 0; min_evidence <= 8; ++min_evidence) {
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<Verdict> v;
        int yes = 0, no = 0;
        for (std::size_t i = 0; i < m; ++i) {
          const bool y = (mask >> i) & 1u;
          v.push_back(y ? Verdict::yes : Verdict::no);
          y ? ++yes : ++no;
        }
        Outcome expected;
        if (m == 0 || m < min_evidence) expected = Outcome::unverifiable;
        else if (yes > no) expected = Outcome::factual;
        else expected = Outcome::non_factual;
        ASSERT_EQ(majority_vote(v, min_evidence), expected) << "m=" << m << " mask=" << mask;
      }
    }
  }
}

TEST(Validate, ThreeOfThreeYes) {
  auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {9, 8, 7.5}, {true, true, true});
  const auto clients = make_fixture_clients(tables);
  const auto rec = validate_triple(t, DasConfig{}, clients);
  EXPECT_EQ(rec.outcome, Outcome::factual);
  EXPECT_EQ(rec.yes_count, 3u);
  EXPECT_EQ(rec.no_count, 0u);
  EXPECT_EQ(rec.judged_pages.size(), 3u);
  EXPECT_EQ(t.status, Status::factual);
  for (const auto& p : rec.judged_pages) EXPECT_TRUE(p.content.empty());
}

TEST(Validate, NoSurvivingPages) {
  auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {3, 2}, {true, true});
  const auto rec = validate_triple(t, DasConfig{}, make_fixture_clients(tables));
  EXPECT_EQ(rec.outcome, Outcome::unverifiable);
  EXPECT_EQ(t.status, Status::unverifiable);
}

TEST(Validate, SearchOutageIsUnverifiableWithDegradation) {
  auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = std::make_shared<FixtureTables>();
  tables->search_unavailable.insert(build_query(t));
  const auto rec = validate_triple(t, DasConfig{}, make_fixture_clients(tables));
  EXPECT_EQ(rec.outcome, Outcome::unverifiable);
  ASSERT_EQ(rec.degradations.size(), 1u);
  EXPECT_EQ(rec.degradations[0].stage, "search");
}

TEST(Validate, UnparseableVerdictsDecrementCounts) {
  auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {9, 8, 7.5}, {true, true, true});
  auto clients = make_fixture_clients(tables);
  clients.llm = std::make_shared<ConstantLlm>("hmm");
  const auto rec = validate_triple(t, DasConfig{}, clients);
  EXPECT_EQ(rec.yes_count + rec.no_count, 0u);
  EXPECT_EQ(rec.excluded_pages.size(), 3u);
  EXPECT_EQ(rec.outcome, Outcome::unverifiable);
}

TEST(Validate, ExpertStatusUntouched) {
  auto t = make_triple("mercury", "contaminates", "rivers");
  apply_expert_status(t, Status::expert_non_factual);
  auto tables = scored_tables(t, {9, 8, 7.5}, {true, true, true});
  validate_triple(t, DasConfig{}, make_fixture_clients(tables));
  EXPECT_EQ(t.status, Status::expert_non_factual);
}

TEST(Validate, ConfigChecked) {
  DasConfig c;
  c.k_pages = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = DasConfig{};
  c.relevance_threshold = 11;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

namespace {

struct RandomCase {
  Triple triple;
  std::shared_ptr<FixtureTables> tables;
};

RandomCase random_case(std::mt19937_64& rng) {
  auto t = make_triple(testsupport::random_word(rng), "affects", testsupport::random_word(rng));
  const std::size_t n = rng() % 15;
  std::vector<double> scores;
  std::vector<bool> supports;
  std::uniform_real_distribution<double> score(0.0, 10.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = score(rng);
    if (rng() % 5 == 0) s = static_cast<double>(rng() % 11);
    scores.push_back(s);
    supports.push_back(rng() % 2 == 0);
  }
  return {t, scored_tables(t, scores, supports)};
}

std::set<std::string> judged_urls(const ValidationRecord& r) {
  std::set<std::string> s;
  for (const auto& p : r.judged_pages) s.insert(p.url);
  return s;
}

}  // namespace

TEST(Validate, ThresholdSoundnessOnRandomRuns) {
  std::mt19937_64 rng(77);
  std::size_t judged = 0;
  for (int round = 0; round < 400; ++round) {
    auto c = random_case(rng);
    DasConfig cfg;
    cfg.k_pages = 1 + rng() % 8;
    cfg.n_hits = 1 + rng() % 15;
    const auto rec = validate_triple(c.triple, cfg, make_fixture_clients(c.tables));
    for (const auto& p : rec.judged_pages) ASSERT_GE(p.relevance_score, 7.0);
    judged += rec.judged_pages.size();
  }
  EXPECT_GT(judged, 0u);
}

TEST(Validate, RaisingThresholdNeverGrowsJudgedSet) {
  std::mt19937_64 rng(78);
  for (int round = 0; round < 300; ++round) {
    auto c = random_case(rng);
    DasConfig cfg;
    cfg.k_pages = 100;
    std::set<std::string> previous;
    bool first = true;
    for (double tau : {7.0, 7.5, 8.0, 8.5, 9.0}) {
      cfg.relevance_threshold = tau;
      auto triple = c.triple;
      const auto current = judged_urls(validate_triple(triple, cfg, make_fixture_clients(c.tables)));
      if (!first) ASSERT_TRUE(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
      previous = current;
      first = false;
    }
  }
}

TEST(Validate, OutcomeInvariantUnderHitOrder) {
  std::mt19937_64 rng(79);
  for (int round = 0; round < 300; ++round) {
    auto c = random_case(rng);
    DasConfig cfg;
    cfg.k_pages = 100;
    cfg.n_hits = 100;
    auto t1 = c.triple;
    const auto base = validate_triple(t1, cfg, make_fixture_clients(c.tables));
    auto shuffled = std::make_shared<FixtureTables>(*c.tables);
    auto& hits = shuffled->search.begin()->second;
    std::shuffle(hits.begin(), hits.end(), rng);
    auto t2 = c.triple;
    const auto again = validate_triple(t2, cfg, make_fixture_clients(shuffled));
    ASSERT_EQ(again.outcome, base.outcome);
    ASSERT_EQ(again.yes_count, base.yes_count);
  }
}

TEST(Validate, DeterministicAcrossParallelism) {
  std::mt19937_64 rng(80);
  std::vector<Triple> triples;
  auto tables = std::make_shared<FixtureTables>();
  for (int i = 0; i < 40; ++i) {
    auto c = random_case(rng);
    triples.push_back(c.triple);
    for (auto& [k, v] : c.tables->search) tables->search[k] = v;
    for (auto& [k, v] : c.tables->pages) tables->pages[k] = v;
    for (auto& [k, v] : c.tables->pagerank) tables->pagerank.emplace(k, v);
  }
  auto signature = [&](std::size_t par) {
    DasConfig cfg;
    cfg.parallelism = par;
    auto copy = triples;
    std::string out;
    for (const auto& r : validate_all(copy, cfg, make_fixture_clients(tables))) out += Json(r).dump() + "\n";
    return out;
  };
  const auto base = signature(1);
  EXPECT_EQ(signature(4), base);
  EXPECT_EQ(signature(8), base);
}

TEST(Validate, RecordJsonRoundTrip) {
  auto t = make_triple("mercury", "contaminates", "rivers");
  auto tables = scored_tables(t, {9, 8, 7.5, 2}, {true, false, true, true});
  const auto rec = validate_triple(t, DasConfig{}, make_fixture_clients(tables));
  const Json j = rec;
  const auto back = j.get<ValidationRecord>();
  EXPECT_EQ(Json(back).dump(), j.dump());
  EXPECT_EQ(j.at("outcome"), "factual");
}
