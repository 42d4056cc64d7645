#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "asgmkg/triple.hpp"

namespace asgmkg {

struct Page {
  int number = 1;
  std::string text;
};

struct Document {
  std::string document_id;
  std::vector<Page> pages;  // ascending by number
};

// JSON Lines, one `{document_id, page, text}` record per page. Documents keep
// first-appearance order. Throws CorpusFormatError / DuplicatePage.
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::istream& in);

struct Chunk {
  SourceRef source;
  std::string text;
  std::size_t word_count = 0;
};

inline constexpr std::size_t kMinChunkWords = 50;
inline constexpr std::size_t kDefaultChunkWords = 400;

// Splits each page at sentence boundaries into chunks of at most `max_words`
// words. A sentence longer than the budget is cut at word boundaries. Every
// chunk is a verbatim substring of its page.
std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_words = kDefaultChunkWords);

// Sentence spans of `text` (verbatim substrings, trimmed).
std::vector<std::string> split_sentences(const std::string& text);

}  // namespace asgmkg
