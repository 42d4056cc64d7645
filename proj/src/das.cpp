#include "asgmkg/das.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

void DasConfig::validate() const {
  if (n_hits == 0) throw InvalidArgument("n_hits must be positive");
  if (k_pages == 0) throw InvalidArgument("k_pages must be positive");
  if (k_pages > n_hits) throw InvalidArgument("k_pages must not exceed n_hits");
  if (min_evidence == 0) throw InvalidArgument("min_evidence must be positive");
  if (min_evidence > k_pages) throw InvalidArgument("min_evidence must not exceed k_pages");
  if (!(relevance_threshold >= 0.0 && relevance_threshold <= 10.0)) {
    throw InvalidArgument("relevance threshold must lie in [0, 10]");
  }
  if (content_word_budget == 0) throw InvalidArgument("content word budget must be positive");
}

std::string_view to_string(Verdict v) { return v == Verdict::yes ? "yes" : "no"; }

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::factual: return "factual";
    case Outcome::non_factual: return "non-factual";
    case Outcome::unverifiable: return "unverifiable";
  }
  return "unverifiable";
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
  if (s == "factual") return Outcome::factual;
  if (s == "non-factual") return Outcome::non_factual;
  if (s == "unverifiable") return Outcome::unverifiable;
  return std::nullopt;
}

Status to_status(Outcome o) {
  switch (o) {
    case Outcome::factual: return Status::factual;
    case Outcome::non_factual: return Status::non_factual;
    case Outcome::unverifiable: return Status::unverifiable;
  }
  return Status::unverifiable;
}

std::string build_query(const Triple& triple) {
  return triple.subject.text() + " " + triple.predicate_surface() + " " + triple.object.text();
}

std::vector<SearchHit> retrieve_evidence(const std::string& query, SearchClient& search,
                                         const DasConfig& config) {
  auto raw = search.search(query, config.n_hits);
  if (raw.size() > config.n_hits) raw.resize(config.n_hits);
  const auto kw = text::keyword_tokens(query);
  const std::set<std::string> keywords(kw.begin(), kw.end());
  std::set<std::string> seen;
  std::vector<SearchHit> hits;
  for (auto& h : raw) {
    if (h.url.empty() || !seen.insert(h.url).second) continue;
    bool shares = false;
    for (const auto& tok : text::keyword_tokens(h.title + " " + h.snippet)) {
      if (keywords.count(tok)) {
        shares = true;
        break;
      }
    }
    if (shares) hits.push_back(std::move(h));
  }
  return hits;
}

std::vector<EvidencePage> score_and_filter(const std::vector<SearchHit>& hits,
                                           PageRankClient& pagerank, SearchClient& fetcher,
                                           const DasConfig& config, FilterLog* log) {
  FilterLog local;
  FilterLog& out_log = log ? *log : local;

  std::vector<std::string> domains;
  for (const auto& h : hits) {
    auto d = domain_of(h.url);
    if (std::find(domains.begin(), domains.end(), d) == domains.end()) domains.push_back(std::move(d));
  }
  std::map<std::string, double> score_of;
  std::vector<Degradation> notes;
  auto record = [&](const std::string& domain, const PageRankResult& r) {
    score_of[domain] = checked_score(r.score);
    if (!r.known) notes.push_back({"pagerank", "unknown domain " + domain + ", scored 0"});
  };
  bool batched = false;
  if (!domains.empty()) {
    try {
      const auto results = pagerank.page_rank_batch(domains);
      if (results.size() == domains.size()) {
        for (std::size_t i = 0; i < domains.size(); ++i) record(domains[i], results[i]);
        batched = true;
      }
    } catch (const Error&) {
    }
  }
  if (!batched) {
    // Retry one domain at a time so a single bad domain only zeroes itself.
    score_of.clear();
    notes.clear();
    for (const auto& d : domains) {
      try {
        record(d, pagerank.page_rank(d));
      } catch (const Error& e) {
        score_of[d] = 0.0;
        notes.push_back({"pagerank", e.kind() + " for " + d + ": " + e.what()});
      }
    }
  }
  out_log.degradations.insert(out_log.degradations.end(), notes.begin(), notes.end());

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const double s = score_of[domain_of(hits[i].url)];
    out_log.scored.push_back({hits[i], s});
    if (s >= config.relevance_threshold) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out_log.scored[a].score > out_log.scored[b].score;
  });
  if (order.size() > config.k_pages) order.resize(config.k_pages);

  std::vector<EvidencePage> pages;
  for (std::size_t i : order) {
    EvidencePage page;
    page.url = hits[i].url;
    page.relevance_score = out_log.scored[i].score;
    try {
      page.content = fetcher.fetch(page.url);
    } catch (const Error& e) {
      out_log.degradations.push_back({"fetch", e.kind() + " for " + page.url + ": " + e.what()});
      continue;
    }
    pages.push_back(std::move(page));
  }
  return pages;
}

std::string build_judge_prompt(const Triple& triple, std::string_view reference) {
  std::ostringstream p;
  p << "### TASK: judge-triple\n"
       "Read the reference text and decide whether the statement below makes sense and holds\n"
       "in that context.\n"
       "Subject: " << triple.subject.text() << "\n"
       "Predicate: " << triple.predicate.text() << "\n"
       "Object: " << triple.object.text() << "\n"
       "Negated: " << (triple.negated ? "yes" : "no") << "\n"
       "Answer \"Yes\" if the statement is coherent with the reference text and \"No\" otherwise,\n"
       "then explain the decision from the text. Reply on one line as \"Yes | <reason>\" or\n"
       "\"No | <reason>\".\n"
       "Reference Text:\n"
    << reference << "\n";
  return p.str();
}

std::string build_summary_prompt(std::string_view content) {
  std::ostringstream p;
  p << "### TASK: summarize-page\n"
       "Summarize the factual content of the web page below in a few sentences. Keep names,\n"
       "quantities and relations as written.\n"
       "Content:\n"
    << content << "\n";
  return p.str();
}

std::optional<Judgement> parse_judgement(std::string_view reply) {
  auto s = text::trim_ascii(reply);
  auto strip = [&](std::string_view chars) {
    while (!s.empty() && chars.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
  };
  strip("*\"'` \t");
  for (std::string_view label : {"is_the_triple_valid", "is the triple valid", "verdict", "answer"}) {
    if (text::starts_with_ci(s, label)) {
      s.remove_prefix(label.size());
      strip("*\"'` \t:=");
      break;
    }
  }
  std::optional<Verdict> verdict;
  std::size_t len = 0;
  if (text::starts_with_ci(s, "yes")) {
    verdict = Verdict::yes;
    len = 3;
  } else if (text::starts_with_ci(s, "no")) {
    verdict = Verdict::no;
    len = 2;
  }
  if (!verdict) return std::nullopt;
  if (s.size() > len && std::isalnum(static_cast<unsigned char>(s[len]))) return std::nullopt;
  s.remove_prefix(len);
  strip("*\"'` \t\r\n|:,.;-=");
  std::string reason(text::trim_ascii(s));
  if (text::starts_with_ci(reason, "reason")) {
    reason = std::string(text::trim_ascii(std::string_view(reason).substr(6)));
    while (!reason.empty() && (reason.front() == ':' || reason.front() == ' ')) reason.erase(0, 1);
  }
  if (reason.empty()) reason = "no reason given";
  return Judgement{*verdict, std::move(reason)};
}

namespace {

std::string first_words(const std::string& content, std::size_t budget) {
  const auto words = text::split_words(content);
  if (words.size() <= budget) return text::join(words, " ");
  return text::join(std::vector<std::string>(words.begin(), words.begin() + budget), " ");
}

}  // namespace

EvidencePage judge_page(const Triple& triple, EvidencePage page, LlmClient& llm,
                        const DasConfig& config) {
  try {
    std::string reference = first_words(page.content, config.content_word_budget);
    if (config.judge_mode == JudgeMode::summarize) {
      reference = llm.complete(build_summary_prompt(reference));
    }
    const auto reply = llm.complete(build_judge_prompt(triple, reference));
    if (auto j = parse_judgement(reply)) {
      page.verdict = j->verdict;
      page.reason = std::move(j->reason);
    } else {
      page.verdict.reset();
      page.reason = "excluded: unparseable verdict";
    }
  } catch (const Error& e) {
    page.verdict.reset();
    page.reason = "excluded: " + e.kind() + ": " + e.what();
  }
  return page;
}

Outcome majority_vote(std::span<const Verdict> verdicts, std::size_t min_evidence) {
  if (verdicts.size() < min_evidence || verdicts.empty()) return Outcome::unverifiable;
  std::size_t yes = 0;
  for (Verdict v : verdicts) yes += v == Verdict::yes;
  const std::size_t no = verdicts.size() - yes;
  return yes > no ? Outcome::factual : Outcome::non_factual;
}

ValidationRecord validate_triple(Triple& triple, const DasConfig& config, const ClientSet& clients) {
  ValidationRecord rec;
  rec.triple_id = triple.id;
  rec.query = build_query(triple);
  std::vector<SearchHit> hits;
  try {
    hits = retrieve_evidence(rec.query, *clients.search, config);
  } catch (const Error& e) {
    rec.degradations.push_back({"search", e.kind() + ": " + e.what()});
  }
  FilterLog log;
  auto pages = score_and_filter(hits, *clients.pagerank, *clients.search, config, &log);
  rec.hits = std::move(log.scored);
  rec.degradations.insert(rec.degradations.end(), log.degradations.begin(), log.degradations.end());

  std::vector<Verdict> verdicts;
  for (auto& page : pages) {
    auto judged = judge_page(triple, std::move(page), *clients.llm, config);
    judged.content.clear();
    if (judged.verdict) {
      verdicts.push_back(*judged.verdict);
      rec.judged_pages.push_back(std::move(judged));
    } else {
      rec.degradations.push_back({"judge", judged.url + ": " + judged.reason});
      rec.excluded_pages.push_back(std::move(judged));
    }
  }
  rec.yes_count = static_cast<std::size_t>(std::count(verdicts.begin(), verdicts.end(), Verdict::yes));
  rec.no_count = verdicts.size() - rec.yes_count;
  rec.outcome = majority_vote(verdicts, config.min_evidence);
  apply_machine_status(triple, to_status(rec.outcome));
  return rec;
}

std::vector<ValidationRecord> validate_all(std::vector<Triple>& triples, const DasConfig& config,
                                           const ClientSet& clients) {
  config.validate();
  std::vector<ValidationRecord> records(triples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < triples.size(); i = next++) {
      records[i] = validate_triple(triples[i], config, clients);
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(config.parallelism, 1, std::max<std::size_t>(1, triples.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

}  // namespace asgmkg
