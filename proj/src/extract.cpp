#include "asgmkg/extract.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>
#include <variant>

#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

namespace {

std::vector<std::string> split_cells(std::string_view line) {
  line = text::trim_ascii(line);
  if (!line.empty() && line.front() == '|') line.remove_prefix(1);
  if (!line.empty() && line.back() == '|') line.remove_suffix(1);
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto bar = line.find('|', start);
    const auto cell = line.substr(start, bar == std::string_view::npos ? line.npos : bar - start);
    cells.emplace_back(text::trim_ascii(cell));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return cells;
}

bool is_ruling(const std::vector<std::string>& cells) {
  bool dash = false;
  for (const auto& c : cells) {
    for (char ch : c) {
      if (ch == '-') dash = true;
      else if (ch != ':' && ch != ' ') return false;
    }
  }
  return dash;
}

bool is_header(const std::vector<std::string>& cells) {
  if (cells.size() != 3) return false;
  return text::to_lower(cells[0]) == "subject" && text::to_lower(cells[1]) == "predicate" &&
         text::to_lower(cells[2]) == "object";
}

// Markdown emphasis and quotes that models like to wrap cells in.
std::string strip_decoration(std::string cell) {
  auto strip_pair = [&](std::string_view open, std::string_view close) {
    if (cell.size() >= open.size() + close.size() && cell.starts_with(open) &&
        cell.ends_with(close)) {
      cell = std::string(text::trim_ascii(
          std::string_view(cell).substr(open.size(), cell.size() - open.size() - close.size())));
      return true;
    }
    return false;
  };
  while (strip_pair("**", "**") || strip_pair("`", "`") || strip_pair("\"", "\"")) {
  }
  return cell;
}

std::optional<std::string> check_candidate(const CandidateTriple& c, std::optional<Triple>& out) {
  static constexpr const char* kFields[] = {"subject", "predicate", "object"};
  const std::string* raws[] = {&c.subject_raw, &c.predicate_raw, &c.object_raw};
  std::vector<Label> labels;
  for (int i = 0; i < 3; ++i) {
    try {
      labels.push_back(Label::normalize(*raws[i]));
    } catch (const EmptyLabel&) {
      return std::string(kFields[i]) + " is empty";
    }
  }
  const auto pred = split_negation(labels[1]);
  labels[1] = pred.predicate;
  for (int i = 0; i < 3; ++i) {
    if (labels[i].word_count() > kMaxLabelWords) return std::string(kFields[i]) + " exceeds two words";
  }
  Triple t = make_triple(labels[0], labels[1], labels[2], c.negated || pred.negated);
  t.provenance.push_back(c.source);
  out = std::move(t);
  return std::nullopt;
}

}  // namespace

ExtractionTable parse_extraction_table(std::string_view reply) {
  ExtractionTable table;
  bool content = false;
  bool recognized = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= reply.size()) {
    auto nl = reply.find('\n', start);
    if (nl == std::string_view::npos) nl = reply.size();
    const auto raw = reply.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    const auto line = text::trim_ascii(raw);
    if (line.empty()) {
      if (nl == reply.size()) break;
      continue;
    }
    content = true;
    if (line.find('|') == std::string_view::npos) {
      table.skipped.push_back({line_no, std::string(line), "not a table row"});
      continue;
    }
    auto cells = split_cells(line);
    if (is_ruling(cells) || is_header(cells)) {
      recognized = true;
      continue;
    }
    if (cells.size() != 3) {
      table.skipped.push_back(
          {line_no, std::string(line), "expected 3 columns, got " + std::to_string(cells.size())});
      continue;
    }
    for (auto& c : cells) c = strip_decoration(std::move(c));
    if (cells[0].empty() || cells[1].empty() || cells[2].empty()) {
      table.skipped.push_back({line_no, std::string(line), "empty cell"});
      continue;
    }
    CandidateTriple cand;
    cand.subject_raw = cells[0];
    cand.object_raw = cells[2];
    std::string_view pred = cells[1];
    while (text::starts_with_ci(pred, "not ") || text::starts_with_ci(pred, "not\t")) {
      cand.negated = true;
      pred = text::trim_ascii(pred.substr(4));
    }
    if (pred.empty()) {
      table.skipped.push_back({line_no, std::string(line), "predicate is only a negation"});
      continue;
    }
    cand.predicate_raw = std::string(pred);
    table.rows.push_back(std::move(cand));
    recognized = true;
  }
  table.unparseable = content && !recognized;
  return table;
}

std::string build_extraction_prompt(const Chunk& chunk) {
  std::ostringstream p;
  p << "### TASK: extract-triples\n"
       "Read the text below one sentence at a time and write down the statements it makes as\n"
       "(subject, predicate, object) rows for a knowledge graph.\n"
       "Rules:\n"
       "1. Subjects and objects are entities: the nouns of the sentence.\n"
       "2. Before writing a row, replace every pronoun with the noun it refers to.\n"
       "3. An entity is at most two words long.\n"
       "4. Predicates are the verbs of the sentence; a verb may take its preposition\n"
       "   (for example \"flows into\").\n"
       "5. A predicate is at most two words long, not counting a leading \"not\".\n"
       "6. A negated verb is written as \"not <verb>\".\n"
       "7. Keep entities and relations in the order they appear in the text.\n"
       "8. Leave out any row that breaks one of these rules.\n"
       "Reply with a table whose header is \"Subject | Predicate | Object\" and one row per\n"
       "statement. Do not add any other text.\n"
       "Text:\n"
    << chunk.text << "\n";
  return p.str();
}

std::vector<CandidateTriple> extract_candidates(const Chunk& chunk, LlmClient& llm) {
  const auto prompt = build_extraction_prompt(chunk);
  ExtractionTable table;
  for (int attempt = 0; attempt < 2; ++attempt) {
    table = parse_extraction_table(llm.complete(prompt));
    if (!table.unparseable) break;
  }
  if (table.unparseable) {
    throw LlmMalformedOutput("no triple table in reply for " + chunk.source.document_id + " p" +
                             std::to_string(chunk.source.page) + " c" +
                             std::to_string(chunk.source.chunk_index));
  }
  for (auto& row : table.rows) row.source = chunk.source;
  return std::move(table.rows);
}

ConstraintResult enforce_constraints(const std::vector<CandidateTriple>& candidates) {
  ConstraintResult result;
  for (const auto& c : candidates) {
    std::optional<Triple> t;
    if (auto reason = check_candidate(c, t)) {
      CandidateTriple rejected = c;
      rejected.rejection_reason = std::move(reason);
      result.rejected.push_back(std::move(rejected));
    } else {
      result.accepted.push_back(std::move(*t));
    }
  }
  return result;
}

std::size_t ExtractionRun::accepted_count() const {
  return static_cast<std::size_t>(std::count_if(
      decisions.begin(), decisions.end(), [](const auto& d) { return d.triple_id.has_value(); }));
}

std::size_t ExtractionRun::rejected_count() const { return decisions.size() - accepted_count(); }

ExtractionRun run_extraction(const std::vector<Document>& corpus, LlmClient& llm,
                             const ExtractionOptions& options) {
  std::vector<Chunk> chunks;
  for (const auto& doc : corpus) {
    auto c = chunk_document(doc, options.max_words);
    chunks.insert(chunks.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  std::stable_sort(chunks.begin(), chunks.end(),
                   [](const Chunk& a, const Chunk& b) { return a.source < b.source; });

  using Slot = std::variant<std::monostate, std::vector<CandidateTriple>, std::string>;
  std::vector<Slot> slots(chunks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < chunks.size(); i = next++) {
      try {
        slots[i] = extract_candidates(chunks[i], llm);
      } catch (const Error& e) {
        slots[i] = e.kind() + ": " + e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.parallelism, 1, std::max<std::size_t>(1, chunks.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExtractionRun run;
  run.chunk_count = chunks.size();
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (auto* err = std::get_if<std::string>(&slots[i])) {
      run.failures.push_back({chunks[i].source, *err});
      continue;
    }
    for (auto& cand : std::get<std::vector<CandidateTriple>>(slots[i])) {
      std::optional<Triple> t;
      CandidateDecision d;
      cand.rejection_reason = check_candidate(cand, t);
      if (t) d.triple_id = t->id;
      d.candidate = std::move(cand);
      run.decisions.push_back(std::move(d));
    }
  }
  return run;
}

}  // namespace asgmkg
