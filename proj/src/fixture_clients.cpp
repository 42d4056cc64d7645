#include "asgmkg/fixture_clients.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "asgmkg/corpus.hpp"
#include "asgmkg/error.hpp"
#include "asgmkg/json_io.hpp"
#include "asgmkg/label.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

namespace {

const std::set<std::string> kArticles = {"the", "a", "an"};
const std::set<std::string> kPronouns = {"it", "they", "this", "these", "he", "she", "them"};
const std::set<std::string> kPrepositions = {"in", "into", "to", "from", "on", "onto", "with",
                                             "of", "by", "for", "at", "through"};
const std::set<std::string> kNegators = {"not", "never"};
const std::set<std::string> kContractedNegators = {"doesn't", "don't", "didn't", "cannot",
                                                   "can't", "won't", "isn't", "aren't"};
const std::set<std::string> kAuxiliaries = {"does", "do", "did", "is", "are", "was", "were",
                                            "will", "can", "could", "should", "would", "has",
                                            "have", "may", "might"};
const std::set<std::string> kClauseBreaks = {"and", "which", "that", "because", "while", "but",
                                             "where", "when"};

std::string strip_punct(const std::string& tok) {
  static const std::string kPunct = ",.;:!?\"'()[]{}";
  const auto b = tok.find_first_not_of(kPunct);
  if (b == std::string::npos) return {};
  const auto e = tok.find_last_not_of(kPunct);
  return tok.substr(b, e - b + 1);
}

// Text following the first line equal to `marker`.
std::string section_after(const std::string& prompt, const std::string& marker) {
  const auto key = "\n" + marker + "\n";
  const auto p = prompt.find(key);
  if (p == std::string::npos) return {};
  return prompt.substr(p + key.size());
}

std::string field_line(const std::string& prompt, const std::string& name) {
  const auto key = "\n" + name + ": ";
  const auto p = prompt.find(key);
  if (p == std::string::npos) return {};
  const auto start = p + key.size();
  const auto end = prompt.find('\n', start);
  return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::string task_of(const std::string& prompt) {
  static const std::string kTag = "### TASK: ";
  if (!prompt.starts_with(kTag)) return {};
  const auto end = prompt.find('\n');
  return prompt.substr(kTag.size(), end == std::string::npos ? std::string::npos : end - kTag.size());
}

std::string trim_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

FixtureTables parse_fixture_tables(const std::string& json_text) {
  const Json j = Json::parse(json_text);
  FixtureTables t;
  if (j.contains("search")) {
    for (const auto& [query, hits] : j.at("search").items()) {
      t.search[Label::normalize(query).text()] = hits.get<std::vector<SearchHit>>();
    }
  }
  if (j.contains("search_unavailable")) {
    for (const auto& q : j.at("search_unavailable")) {
      t.search_unavailable.insert(Label::normalize(q.get<std::string>()).text());
    }
  }
  if (j.contains("pages")) t.pages = j.at("pages").get<std::map<std::string, std::string>>();
  if (j.contains("pagerank")) t.pagerank = j.at("pagerank").get<std::map<std::string, double>>();
  if (j.contains("pagerank_unavailable")) {
    t.pagerank_unavailable = j.at("pagerank_unavailable").get<std::set<std::string>>();
  }
  if (j.contains("verbs")) {
    for (const auto& v : j.at("verbs")) t.verbs.insert(text::to_lower(v.get<std::string>()));
  }
  if (j.contains("malformed_markers")) {
    t.malformed_markers = j.at("malformed_markers").get<std::vector<std::string>>();
  }
  return t;
}

FixtureTables load_fixture_tables(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture tables " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_fixture_tables(ss.str());
  } catch (const Json::exception& e) {
    throw ConfigError("bad fixture tables " + path.string() + ": " + e.what());
  }
}

bool fixture_judge_says_yes(const std::string& subject, const std::string& predicate,
                            const std::string& object, bool negated,
                            const std::string& reference) {
  auto keywords = text::keyword_tokens(subject + " " + predicate + " " + object);
  if (negated) keywords.push_back("not");
  const auto ref_tokens = text::keyword_tokens(reference);
  const std::set<std::string> ref(ref_tokens.begin(), ref_tokens.end());
  for (const auto& k : keywords) {
    if (!ref.count(k)) return false;
  }
  return !keywords.empty();
}

FixtureLlm::FixtureLlm(std::shared_ptr<const FixtureTables> tables) : tables_(std::move(tables)) {}

std::string FixtureLlm::complete(const std::string& prompt) {
  const auto task = task_of(prompt);
  if (task == "extract-triples") return extract(section_after(prompt, "Text:"));
  if (task == "judge-triple") {
    const auto s = field_line(prompt, "Subject");
    const auto p = field_line(prompt, "Predicate");
    const auto o = field_line(prompt, "Object");
    const bool neg = field_line(prompt, "Negated") == "yes";
    const auto ref = section_after(prompt, "Reference Text:");
    if (fixture_judge_says_yes(s, p, o, neg, ref)) {
      return "Yes | every keyword of the statement appears in the reference text";
    }
    return "No | the reference text does not mention every keyword of the statement";
  }
  if (task == "summarize-page") return trim_trailing_newlines(section_after(prompt, "Content:"));
  if (task == "summarize-statements") return trim_trailing_newlines(section_after(prompt, "Summary:"));
  if (task == "chat") {
    std::istringstream in(section_after(prompt, "Statements:"));
    std::vector<std::string> sentences;
    std::string line;
    while (std::getline(in, line) && line.starts_with("- ")) {
      auto body = line.substr(2);
      if (body.starts_with("[")) {
        const auto close = body.find("] ");
        if (close != std::string::npos) body = body.substr(close + 2);
      }
      sentences.push_back(body);
    }
    return text::join(sentences, " ");
  }
  return "I cannot help with that request.";
}

std::string FixtureLlm::extract(const std::string& body) const {
  for (const auto& marker : tables_->malformed_markers) {
    if (!marker.empty() && body.find(marker) != std::string::npos) {
      return "I could not find any statements in this text.";
    }
  }
  std::string reply = "Subject | Predicate | Object\n| --- | --- | --- |\n";
  std::string previous_object;
  for (const auto& sentence : split_sentences(body)) {
    std::vector<std::string> tokens;
    for (const auto& w : text::split_words(sentence)) {
      auto t = strip_punct(w);
      if (!t.empty()) tokens.push_back(std::move(t));
    }
    std::vector<std::string> lower;
    for (const auto& t : tokens) lower.push_back(text::to_lower(t));

    std::size_t verb = 0;
    for (std::size_t i = 1; i < lower.size(); ++i) {
      if (tables_->verbs.count(lower[i])) {
        verb = i;
        break;
      }
    }
    if (verb == 0) continue;

    bool negated = false;
    std::size_t subject_end = verb;
    if (kNegators.count(lower[subject_end - 1])) {
      negated = true;
      --subject_end;
      if (subject_end >= 1 && kAuxiliaries.count(lower[subject_end - 1])) --subject_end;
    } else if (kContractedNegators.count(lower[subject_end - 1])) {
      negated = true;
      --subject_end;
    } else if (kAuxiliaries.count(lower[subject_end - 1]) && subject_end >= 2) {
      --subject_end;
    }
    std::size_t subject_begin = 0;
    if (subject_begin < subject_end && kArticles.count(lower[subject_begin])) ++subject_begin;
    if (subject_begin >= subject_end) continue;
    std::vector<std::string> subject(tokens.begin() + subject_begin, tokens.begin() + subject_end);
    if (subject.size() == 1 && kPronouns.count(lower[subject_begin])) {
      if (previous_object.empty()) continue;
      subject = {previous_object};
    }

    std::string predicate = tokens[verb];
    std::size_t object_begin = verb + 1;
    if (object_begin < tokens.size() && kPrepositions.count(lower[object_begin])) {
      predicate += " " + tokens[object_begin];
      ++object_begin;
    }
    if (object_begin < tokens.size() && kArticles.count(lower[object_begin])) ++object_begin;
    std::size_t object_end = object_begin;
    while (object_end < tokens.size() && !kClauseBreaks.count(lower[object_end])) ++object_end;
    if (object_begin >= object_end) continue;
    const std::vector<std::string> object(tokens.begin() + object_begin, tokens.begin() + object_end);

    const auto subject_text = text::join(subject, " ");
    const auto object_text = text::join(object, " ");
    reply += subject_text + " | " + (negated ? "not " : "") + predicate + " | " + object_text + "\n";
    previous_object = object_text;
  }
  return reply;
}

FixtureSearch::FixtureSearch(std::shared_ptr<const FixtureTables> tables)
    : tables_(std::move(tables)) {}

std::vector<SearchHit> FixtureSearch::search(const std::string& query, std::size_t n) {
  const auto key = Label::normalize(query).text();
  if (tables_->search_unavailable.count(key)) throw SearchUnavailable("fixture search down for: " + key);
  auto it = tables_->search.find(key);
  if (it == tables_->search.end()) return {};
  std::vector<SearchHit> hits = it->second;
  if (hits.size() > n) hits.resize(n);
  return hits;
}

std::string FixtureSearch::fetch(const std::string& url) {
  auto it = tables_->pages.find(url);
  if (it == tables_->pages.end()) throw FetchFailure("fixture has no page for " + url);
  return it->second;
}

FixturePageRank::FixturePageRank(std::shared_ptr<const FixtureTables> tables)
    : tables_(std::move(tables)) {}

PageRankResult FixturePageRank::page_rank(const std::string& domain) {
  if (tables_->pagerank_unavailable.count(domain)) {
    throw PageRankUnavailable("fixture page-rank down for " + domain);
  }
  auto it = tables_->pagerank.find(domain);
  if (it == tables_->pagerank.end()) return {0.0, false};
  return {checked_score(it->second), true};
}

ClientSet make_fixture_clients(std::shared_ptr<const FixtureTables> tables) {
  return ClientSet{std::make_shared<FixtureLlm>(tables), std::make_shared<FixtureSearch>(tables),
                   std::make_shared<FixturePageRank>(tables)};
}

}  // namespace asgmkg
