#pragma once

// Tokenization and word-overlap helpers shared by donor selection,
// distractor mining and the overlap analysis.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "suffacts/error.hpp"

namespace suffacts::text {

using TokenSet = std::set<std::string, std::less<>>;

inline bool is_word_byte(unsigned char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 sequences; keep them inside words.
  return std::isalnum(c) || c >= 0x80;
}

// Case-folded tokens split on whitespace and punctuation boundaries.
inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    if (is_word_byte(c)) {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline TokenSet token_set(std::string_view s) {
  auto toks = tokenize(s);
  return TokenSet(toks.begin(), toks.end());
}

// Number of token types shared by the two sets.
inline std::size_t overlap(const TokenSet& a, const TokenSet& b) {
  const TokenSet& small = a.size() <= b.size() ? a : b;
  const TokenSet& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const auto& t : small) n += large.count(t);
  return n;
}

// Content-token set with stop words removed.
inline TokenSet content_set(std::string_view s, const std::unordered_set<std::string>& stopwords) {
  TokenSet out;
  for (auto& t : tokenize(s))
    if (!stopwords.count(t)) out.insert(std::move(t));
  return out;
}

// English stop-word list (the NLTK list, tokenized the same way as text).
inline const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = [] {
    static const char* const kWords[] = {
        "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
        "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
        "herself", "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
        "what", "which", "who", "whom", "this", "that", "these", "those", "am", "is", "are",
        "was", "were", "be", "been", "being", "have", "has", "had", "having", "do", "does",
        "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as", "until",
        "while", "of", "at", "by", "for", "with", "about", "against", "between", "into",
        "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
        "in", "out", "on", "off", "over", "under", "again", "further", "then", "once", "here",
        "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
        "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
        "than", "too", "very", "s", "t", "can", "will", "just", "don", "should", "now", "d",
        "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn",
        "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn",
        "weren", "won", "wouldn"};
    return std::unordered_set<std::string>(std::begin(kWords), std::end(kWords));
  }();
  return words;
}

// One word per line; blank lines and lines starting with '#' are ignored.
inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stop-word file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (auto& t : tokenize(line)) out.insert(std::move(t));
  }
  return out;
}

// Explicit path wins, then SUFFACTS_STOPWORDS, then the built-in list.
inline std::unordered_set<std::string> resolve_stopwords(const std::string& path = {}) {
  if (!path.empty()) return load_stopwords(path);
  if (const char* env = std::getenv("SUFFACTS_STOPWORDS"); env && *env) return load_stopwords(env);
  return default_stopwords();
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) pos = s.size();
    auto piece = trim(s.substr(start, pos - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    start = pos + 1;
  }
  return out;
}

}  // namespace suffacts::text
