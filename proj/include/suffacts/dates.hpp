#pragma once

// The two date templates common in Wikipedia text:
//   <month name, date, year>   "October 1, 2011", "Oct. 1 2011"
//   <date, month name, year>   "1st October 2011", "2 April 1990"

#include <algorithm>
#include <array>
#include <cstddef>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "suffacts/span.hpp"

namespace suffacts::dates {

struct DateMatch {
  Span whole;
  // Components in surface order: month, day, year or day, month, year.
  std::array<Span, 3> parts;
  bool month_first = false;

  Span day() const { return month_first ? parts[1] : parts[0]; }
  Span month() const { return month_first ? parts[0] : parts[1]; }
  Span year() const { return parts[2]; }
};

// One of the four coherent partial removals of a matched date.
struct DateRemoval {
  Span removed;  // the removed components, without separators
  Span excised;  // what is actually cut, including the adjacent separator
};

namespace detail {

inline const std::string& month_alternation() {
  static const std::string m =
      "(?:January|February|March|April|May|June|July|August|September|October|November|December|"
      "Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Sept|Oct|Nov|Dec)\\.?";
  return m;
}

inline const std::regex& month_first_re() {
  static const std::regex re("\\b(" + month_alternation() + ")\\s+([0-9]{1,2})(?:st|nd|rd|th)?(,?)\\s+([0-9]{4})\\b");
  return re;
}

inline const std::regex& day_first_re() {
  static const std::regex re("\\b([0-9]{1,2})(?:st|nd|rd|th)?\\s+(" + month_alternation() + ")(,?)\\s+([0-9]{4})\\b");
  return re;
}

inline std::size_t day_end(std::string_view text, std::size_t digits_end) {
  // Extend over an ordinal suffix so "1st" is one component.
  std::size_t e = digits_end;
  while (e < text.size() && std::isalpha(static_cast<unsigned char>(text[e]))) ++e;
  return e;
}

}  // namespace detail

// Non-overlapping template matches in left-to-right order.
inline std::vector<DateMatch> find_dates(std::string_view text) {
  std::vector<DateMatch> found;
  const std::string s(text);
  for (int pass = 0; pass < 2; ++pass) {
    const bool month_first = pass == 0;
    const std::regex& re = month_first ? detail::month_first_re() : detail::day_first_re();
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      auto pos = [&](int g) { return static_cast<std::size_t>(m.position(g)); };
      auto len = [&](int g) { return static_cast<std::size_t>(m.length(g)); };
      DateMatch d;
      d.month_first = month_first;
      d.whole = {pos(0), pos(0) + len(0)};
      const int day_group = month_first ? 2 : 1;
      const int day = std::stoi(m.str(day_group));
      if (day < 1 || day > 31) continue;
      Span day_span{pos(day_group), detail::day_end(text, pos(day_group) + len(day_group))};
      Span month_span{pos(month_first ? 1 : 2), pos(month_first ? 1 : 2) + len(month_first ? 1 : 2)};
      Span year_span{pos(4), pos(4) + len(4)};
      d.parts = month_first ? std::array<Span, 3>{month_span, day_span, year_span}
                            : std::array<Span, 3>{day_span, month_span, year_span};
      found.push_back(d);
    }
  }
  std::sort(found.begin(), found.end(), [](const DateMatch& a, const DateMatch& b) { return a.whole < b.whole; });
  std::vector<DateMatch> out;
  for (const auto& d : found)
    if (out.empty() || !out.back().whole.intersects(d.whole)) out.push_back(d);
  return out;
}

// The removals <date>, <year>, <month name and date>, and the trailing pair
// after the first component (<year and date> in month-first dates, where
// the two are adjacent; month and year in day-first dates, where day and
// year are not contiguous).
inline std::array<DateRemoval, 4> removals(const DateMatch& d) {
  const auto& p = d.parts;
  auto make = [&](int i, int j) {
    DateRemoval r;
    r.removed = {p[i].start, p[j].end};
    r.excised = j < 2 ? Span{p[i].start, p[j + 1].start} : Span{p[i - 1].end, p[j].end};
    return r;
  };
  const int date = d.month_first ? 1 : 0;
  return {make(date, date), make(2, 2), make(0, 1), make(1, 2)};
}

// True when `span` is the removed or excised span of some template removal.
inline bool is_template_subspan(std::string_view text, Span span) {
  for (const auto& d : find_dates(text))
    for (const auto& r : removals(d))
      if (r.removed == span || r.excised == span) return true;
  return false;
}

}  // namespace suffacts::dates
