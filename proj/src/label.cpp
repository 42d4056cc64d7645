#include "asgmkg/label.hpp"

#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

Label Label::normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t words = 0;
  bool pending_space = false;
  for (char32_t cp : text::decode_utf8(raw)) {
    if (text::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space || out.empty()) {
      if (pending_space) out.push_back(' ');
      ++words;
      pending_space = false;
    }
    text::append_utf8(out, text::to_lower(cp));
  }
  if (out.empty()) throw EmptyLabel("label is empty after normalization");
  return Label(std::move(out), words);
}

}  // namespace asgmkg
