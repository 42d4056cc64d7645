#include "asgmkg/corpus.hpp"

#include <fstream>
#include <map>

#include "asgmkg/error.hpp"
#include "asgmkg/json_io.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::map<std::string, std::size_t> doc_index;
  std::map<std::string, std::map<int, std::string>> pages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim_ascii(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw CorpusFormatError("line " + std::to_string(line_no) + ": invalid JSON");
    }
    for (const char* field : {"document_id", "page", "text"}) {
      if (!j.is_object() || !j.contains(field)) {
        throw CorpusFormatError("line " + std::to_string(line_no) + ": missing field \"" + field +
                                "\"");
      }
    }
    if (!j["document_id"].is_string() || !j["text"].is_string() ||
        !j["page"].is_number_integer() || j["page"].get<long long>() < 1) {
      throw CorpusFormatError("line " + std::to_string(line_no) + ": wrongly typed field");
    }
    const auto id = j["document_id"].get<std::string>();
    if (id.empty()) throw CorpusFormatError("line " + std::to_string(line_no) + ": empty document_id");
    const int page = j["page"].get<int>();
    if (!doc_index.count(id)) {
      doc_index[id] = docs.size();
      docs.push_back(Document{id, {}});
    }
    auto [_, fresh] = pages[id].emplace(page, j["text"].get<std::string>());
    if (!fresh) {
      throw DuplicatePage("line " + std::to_string(line_no) + ": duplicate page " +
                          std::to_string(page) + " of document " + id);
    }
  }
  for (auto& doc : docs) {
    for (auto& [number, body] : pages[doc.document_id]) {
      doc.pages.push_back(Page{number, std::move(body)});
    }
  }
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusFormatError("cannot open corpus " + path.string());
  return parse_corpus(in);
}

namespace {

struct Span {
  std::size_t begin;
  std::size_t end;  // exclusive
  std::size_t words;
};

bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char32_t c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x201D || c == 0x2019;
}

std::size_t words_in(const std::u32string& s, std::size_t b, std::size_t e) {
  std::size_t n = 0;
  bool in_word = false;
  for (std::size_t i = b; i < e; ++i) {
    if (text::is_space(s[i])) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::vector<Span> sentence_spans(const std::u32string& s) {
  std::vector<Span> out;
  std::size_t i = 0;
  const auto n = s.size();
  while (i < n) {
    while (i < n && text::is_space(s[i])) ++i;
    if (i >= n) break;
    const std::size_t begin = i;
    std::size_t end = n;
    while (i < n) {
      if (is_terminator(s[i])) {
        std::size_t j = i + 1;
        while (j < n && (is_terminator(s[j]) || is_closer(s[j]))) ++j;
        if (j >= n || text::is_space(s[j])) {
          end = j;
          i = j;
          break;
        }
        i = j;
        continue;
      }
      ++i;
    }
    if (end == n) i = n;
    std::size_t e = end;
    while (e > begin && text::is_space(s[e - 1])) --e;
    out.push_back(Span{begin, e, words_in(s, begin, e)});
  }
  return out;
}

// Cuts an oversized span into runs of at most `max_words` words.
std::vector<Span> split_by_words(const std::u32string& s, const Span& span, std::size_t max_words) {
  std::vector<Span> out;
  std::size_t i = span.begin;
  while (i < span.end) {
    while (i < span.end && text::is_space(s[i])) ++i;
    if (i >= span.end) break;
    const std::size_t begin = i;
    std::size_t words = 0;
    std::size_t last_end = i;
    while (i < span.end && words < max_words) {
      while (i < span.end && text::is_space(s[i])) ++i;
      if (i >= span.end) break;
      while (i < span.end && !text::is_space(s[i])) ++i;
      last_end = i;
      ++words;
    }
    out.push_back(Span{begin, last_end, words});
    i = last_end;
  }
  return out;
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& body) {
  const auto s = text::decode_utf8(body);
  std::vector<std::string> out;
  for (const auto& sp : sentence_spans(s)) out.push_back(text::encode_utf8(s.substr(sp.begin, sp.end - sp.begin)));
  return out;
}

std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_words) {
  if (max_words < kMinChunkWords) {
    throw InvalidArgument("max_words must be at least " + std::to_string(kMinChunkWords));
  }
  std::vector<Chunk> chunks;
  for (const auto& page : doc.pages) {
    const auto s = text::decode_utf8(page.text);
    std::vector<Span> pieces;
    for (const auto& sp : sentence_spans(s)) {
      if (sp.words > max_words) {
        auto parts = split_by_words(s, sp, max_words);
        pieces.insert(pieces.end(), parts.begin(), parts.end());
      } else {
        pieces.push_back(sp);
      }
    }
    int chunk_index = 0;
    std::size_t i = 0;
    while (i < pieces.size()) {
      const std::size_t begin = pieces[i].begin;
      std::size_t end = pieces[i].end;
      std::size_t words = pieces[i].words;
      ++i;
      while (i < pieces.size() && words + pieces[i].words <= max_words) {
        words += pieces[i].words;
        end = pieces[i].end;
        ++i;
      }
      chunks.push_back(Chunk{SourceRef{doc.document_id, page.number, chunk_index++},
                             text::encode_utf8(s.substr(begin, end - begin)), words});
    }
  }
  return chunks;
}

}  // namespace asgmkg
