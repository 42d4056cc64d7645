#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by label normalization, keyword matching and prompts.
namespace asgmkg::text {

// Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view code_points);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);
bool is_word_char(char32_t cp);

std::string to_lower(std::string_view utf8);
std::string_view trim_ascii(std::string_view s);

// Lowercased runs of letters/digits, minus common function words. Non-ASCII
// code points other than whitespace count as letters.
std::vector<std::string> keyword_tokens(std::string_view utf8);

// Whitespace-delimited tokens (Unicode whitespace).
std::vector<std::string> split_words(std::string_view utf8);
std::size_t count_words(std::string_view utf8);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);

}  // namespace asgmkg::text
