#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace suffacts {

// Half-open character range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  constexpr std::size_t size() const { return end - start; }
  constexpr bool empty() const { return end <= start; }
  constexpr bool contains(const Span& o) const { return start <= o.start && o.end <= end; }
  constexpr bool intersects(const Span& o) const { return start < o.end && o.start < end; }

  friend constexpr auto operator<=>(const Span&, const Span&) = default;
};

inline std::string_view slice(std::string_view s, Span sp) { return s.substr(sp.start, sp.size()); }

// Removes `span` from `text` and repairs the whitespace and punctuation the
// deletion leaves behind: the gap collapses to one space (none before
// closing punctuation), an orphaned comma before ", ." / ", ," or at either
// edge of the text is dropped, and the result is trimmed. Nothing else is
// touched, so the surviving words are a subsequence of the input.
inline std::string remove_fluently(std::string_view text, Span span) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::string left(text.substr(0, span.start));
  std::string right(text.substr(span.end));
  while (!left.empty() && is_space(left.back())) left.pop_back();
  std::size_t r = 0;
  while (r < right.size() && is_space(right[r])) ++r;
  right.erase(0, r);

  auto closing = [](char c) { return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == ')'; };
  std::string out;
  if (left.empty()) {
    // A removed leading clause takes its trailing comma with it.
    if (!right.empty() && (right[0] == ',' || right[0] == ';')) {
      right.erase(0, 1);
      std::size_t k = 0;
      while (k < right.size() && is_space(right[k])) ++k;
      right.erase(0, k);
    }
    out = right;
  } else if (right.empty()) {
    if (left.back() == ',' || left.back() == ';' || left.back() == ':') left.pop_back();
    out = left;
  } else if (closing(right[0])) {
    if (left.back() == ',' && (right[0] == '.' || right[0] == ',')) left.pop_back();
    out = left + right;
  } else {
    out = left + " " + right;
  }
  while (!out.empty() && is_space(out.back())) out.pop_back();
  std::size_t b = 0;
  while (b < out.size() && is_space(out[b])) ++b;
  return out.substr(b);
}

}  // namespace suffacts
