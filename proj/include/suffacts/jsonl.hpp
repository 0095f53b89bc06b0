#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "suffacts/error.hpp"

namespace suffacts {

using Json = nlohmann::ordered_json;

// Single-consumer line reader. Blank lines are skipped; line numbers are 1-based.
class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw IoError("cannot open for reading: " + path);
  }

  // Next record, or nullopt at end of file.
  std::optional<Json> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        return Json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path_ + ":" + std::to_string(line_no_) + ": malformed JSON: " + e.what(),
                         line_no_);
      }
    }
    if (in_.bad()) throw IoError("read failure: " + path_);
    return std::nullopt;
  }

  std::size_t line() const noexcept { return line_no_; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + path);
  }

  void write(const Json& record) {
    out_ << record.dump() << '\n';
    if (!out_) throw IoError("write failure: " + path_, count_);
    ++count_;
  }

  std::size_t close() {
    out_.flush();
    if (!out_) throw IoError("flush failure: " + path_, count_);
    out_.close();
    return count_;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

// Writes every record through its `to_json` overload and returns the count.
template <typename Range>
std::size_t write_jsonl(const Range& records, const std::string& path) {
  JsonlWriter w(path);
  for (const auto& r : records) {
    Json j;
    to_json(j, r);
    w.write(j);
  }
  return w.close();
}

// Field accessors with schema-aware error messages.
namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": record is not a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline std::string get_string(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw ValidationError(where + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline long long get_int(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ValidationError(where + ": field \"" + key + "\" must be an integer");
  return v.get<long long>();
}

inline std::string where(const JsonlReader& r) { return r.path() + ":" + std::to_string(r.line()); }

}  // namespace detail

}  // namespace suffacts
