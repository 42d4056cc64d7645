#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace asgmkg {

// Normalized surface form of an entity or relation: lowercased, trimmed,
// internal whitespace collapsed to single spaces. Never empty.
class Label {
 public:
  // Throws EmptyLabel when nothing but whitespace remains.
  static Label normalize(std::string_view raw);

  const std::string& text() const noexcept { return text_; }
  std::size_t word_count() const noexcept { return word_count_; }

  friend bool operator==(const Label& a, const Label& b) { return a.text_ == b.text_; }
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return a.text_ <=> b.text_;
  }

 private:
  Label(std::string text, std::size_t words) : text_(std::move(text)), word_count_(words) {}

  std::string text_;
  std::size_t word_count_;
};

inline Label normalize_label(std::string_view raw) { return Label::normalize(raw); }

}  // namespace asgmkg
