#pragma once

// Data model and JSONL I/O for fact-checking corpora and the derived
// diagnostic sets, plus construction of incorrect-evidence test sets.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "suffacts/error.hpp"
#include "suffacts/jsonl.hpp"
#include "suffacts/text.hpp"

namespace suffacts {

enum class Dataset { Fever, VitaminC, Hover };

// FEVER and VitaminC share the three-way space; HoVer is two-way.
enum class LabelSpace : std::uint8_t { ThreeWay, TwoWay };

inline std::string_view dataset_name(Dataset d) {
  switch (d) {
    case Dataset::Fever: return "fever";
    case Dataset::VitaminC: return "vitaminc";
    case Dataset::Hover: return "hover";
  }
  return "?";
}

inline Dataset parse_dataset(std::string_view s) {
  std::string low;
  for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (low == "fever") return Dataset::Fever;
  if (low == "vitaminc" || low == "vitamin_c") return Dataset::VitaminC;
  if (low == "hover") return Dataset::Hover;
  throw ValidationError("unknown dataset: \"" + std::string(s) + "\"");
}

constexpr LabelSpace label_space(Dataset d) {
  return d == Dataset::Hover ? LabelSpace::TwoWay : LabelSpace::ThreeWay;
}

constexpr int label_count(LabelSpace s) { return s == LabelSpace::TwoWay ? 2 : 3; }

// Index of the not-enough-information class: NEI, or NOT_SUPPORTING for HoVer.
constexpr int nei_index(LabelSpace s) { return s == LabelSpace::TwoWay ? 1 : 2; }

struct VeracityLabel {
  LabelSpace space = LabelSpace::ThreeWay;
  int value = 0;

  static constexpr VeracityLabel nei(LabelSpace s) { return {s, nei_index(s)}; }

  constexpr bool is_nei() const { return value == nei_index(space); }

  std::string_view name() const {
    static constexpr std::array<std::string_view, 3> kThree{"SUPPORTS", "REFUTES", "NEI"};
    static constexpr std::array<std::string_view, 2> kTwo{"SUPPORTING", "NOT_SUPPORTING"};
    return space == LabelSpace::TwoWay ? kTwo.at(value) : kThree.at(value);
  }

  friend constexpr bool operator==(const VeracityLabel&, const VeracityLabel&) = default;
};

inline VeracityLabel make_label(LabelSpace space, int value) {
  if (value < 0 || value >= label_count(space))
    throw ValidationError("label index " + std::to_string(value) + " outside label space");
  return {space, value};
}

// Infers the label space from the name unless one is given. Accepts the
// spellings used by the original dataset releases.
inline VeracityLabel parse_label(std::string_view name, std::optional<LabelSpace> space = std::nullopt) {
  std::string up;
  for (char c : name) up.push_back(c == ' ' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  std::optional<VeracityLabel> found;
  if (up == "SUPPORTS") found = VeracityLabel{LabelSpace::ThreeWay, 0};
  else if (up == "REFUTES") found = VeracityLabel{LabelSpace::ThreeWay, 1};
  else if (up == "NEI" || up == "NOT_ENOUGH_INFO") found = VeracityLabel{LabelSpace::ThreeWay, 2};
  else if (up == "SUPPORTING" || up == "SUPPORTED") found = VeracityLabel{LabelSpace::TwoWay, 0};
  else if (up == "NOT_SUPPORTING" || up == "NOT_SUPPORTED") found = VeracityLabel{LabelSpace::TwoWay, 1};
  if (!found) throw ValidationError("unknown label \"" + std::string(name) + "\"");
  if (space && found->space != *space)
    throw ValidationError("label \"" + std::string(name) + "\" is not in the " +
                          (*space == LabelSpace::TwoWay ? "two-way" : "three-way") + " label space");
  return *found;
}

struct EvidenceSentence {
  std::string doc_title;
  std::string text;
  int sent_index = 0;

  friend bool operator==(const EvidenceSentence&, const EvidenceSentence&) = default;
};

struct Instance {
  std::string id;
  Dataset dataset = Dataset::Fever;
  std::string claim;
  std::vector<EvidenceSentence> evidence;
  VeracityLabel label;

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class OmissionType { Sent, PP, NounM, AdjM, AdvM, NumM, DateM, Sbar };

inline constexpr std::array<OmissionType, 8> kAllOmissionTypes{
    OmissionType::Sent, OmissionType::PP,   OmissionType::NounM, OmissionType::AdjM,
    OmissionType::AdvM, OmissionType::NumM, OmissionType::DateM, OmissionType::Sbar};

inline std::string_view omission_type_name(OmissionType t) {
  switch (t) {
    case OmissionType::Sent: return "SENT";
    case OmissionType::PP: return "PP";
    case OmissionType::NounM: return "NOUNM";
    case OmissionType::AdjM: return "ADJM";
    case OmissionType::AdvM: return "ADVM";
    case OmissionType::NumM: return "NUMM";
    case OmissionType::DateM: return "DATEM";
    case OmissionType::Sbar: return "SBAR";
  }
  return "?";
}

inline OmissionType parse_omission_type(std::string_view s) {
  std::string up;
  for (char c : s) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "S") up = "SENT";
  for (auto t : kAllOmissionTypes)
    if (omission_type_name(t) == up) return t;
  throw ValidationError("unknown omission type \"" + std::string(s) + "\"");
}

enum class Annotation { Nei, EiIrrelevant, EiRepeated };

inline std::string_view annotation_name(Annotation a) {
  switch (a) {
    case Annotation::Nei: return "NEI";
    case Annotation::EiIrrelevant: return "EI_IRRELEVANT";
    case Annotation::EiRepeated: return "EI_REPEATED";
  }
  return "?";
}

inline Annotation parse_annotation(std::string_view s) {
  if (s == "NEI") return Annotation::Nei;
  if (s == "EI_IRRELEVANT" || s == "EI_I") return Annotation::EiIrrelevant;
  if (s == "EI_REPEATED" || s == "EI_R") return Annotation::EiRepeated;
  throw ValidationError("unknown annotation \"" + std::string(s) + "\"");
}

struct DiagnosticInstance {
  std::string base_id;
  std::string claim;
  std::string reduced_evidence;
  VeracityLabel new_label;
  OmissionType omission_type = OmissionType::Sent;
  std::string removed_span;
  std::optional<Annotation> annotation;

  friend bool operator==(const DiagnosticInstance&, const DiagnosticInstance&) = default;
};

// ---------------------------------------------------------------------------
// Evidence rendering. Derived artifacts carry evidence as one flat string in
// which every sentence is prefixed by its bracketed page title.

inline std::string render_evidence(const std::vector<EvidenceSentence>& evidence) {
  std::string out;
  for (const auto& s : evidence) {
    if (!out.empty()) out.push_back(' ');
    if (!s.doc_title.empty()) out += "[" + s.doc_title + "] ";
    out += s.text;
  }
  return out;
}

// Inverse of render_evidence for titles without brackets. Text before the
// first title prefix becomes an untitled sentence.
inline std::vector<EvidenceSentence> parse_rendered_evidence(std::string_view flat) {
  std::vector<EvidenceSentence> out;
  auto title_at = [&](std::size_t pos) -> std::optional<std::pair<std::string, std::size_t>> {
    if (pos >= flat.size() || flat[pos] != '[') return std::nullopt;
    if (pos > 0 && flat[pos - 1] != ' ') return std::nullopt;
    auto close = flat.find_first_of("[]", pos + 1);
    if (close == std::string_view::npos || flat[close] != ']') return std::nullopt;
    if (close + 1 < flat.size() && flat[close + 1] != ' ') return std::nullopt;
    return std::make_pair(std::string(flat.substr(pos + 1, close - pos - 1)),
                          std::min(close + 2, flat.size()));
  };
  std::string title;
  std::size_t text_start = 0;
  auto flush = [&](std::size_t end) {
    auto t = text::trim(flat.substr(text_start, end - text_start));
    if (!t.empty() || !title.empty())
      out.push_back({title, t, static_cast<int>(out.size())});
  };
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (auto t = title_at(i)) {
      if (i > 0) flush(i);
      title = t->first;
      text_start = t->second;
      i = t->second - 1;
    }
  }
  flush(flat.size());
  return out;
}

inline std::string evidence_text(const Instance& inst) {
  std::string out;
  for (const auto& s : inst.evidence) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON conversion.

inline void to_json(Json& j, const Instance& inst) {
  Json ev = Json::array();
  for (const auto& s : inst.evidence)
    ev.push_back(Json{{"title", s.doc_title}, {"text", s.text}, {"sent_index", s.sent_index}});
  j = Json{{"id", inst.id},
           {"dataset", dataset_name(inst.dataset)},
           {"claim", inst.claim},
           {"evidence", std::move(ev)},
           {"label", inst.label.name()}};
}

inline void validate(const Instance& inst, const std::string& where) {
  if (inst.id.empty()) throw ValidationError(where + ": empty instance id");
  if (inst.label.space != label_space(inst.dataset))
    throw ValidationError(where + ": instance " + inst.id + " has label " + std::string(inst.label.name()) +
                          " outside the label space of " + std::string(dataset_name(inst.dataset)));
  if (inst.evidence.empty() && !inst.label.is_nei())
    throw ValidationError(where + ": instance " + inst.id + " has no evidence but is not NEI-class");
  std::unordered_set<std::string> seen;
  for (const auto& s : inst.evidence) {
    if (s.text.empty()) throw ValidationError(where + ": instance " + inst.id + " has an empty evidence sentence");
    if (s.sent_index < 0) throw ValidationError(where + ": instance " + inst.id + " has a negative sent_index");
    if (!seen.insert(s.doc_title + '\n' + std::to_string(s.sent_index)).second)
      throw ValidationError(where + ": instance " + inst.id + " repeats sent_index " +
                            std::to_string(s.sent_index) + " for page \"" + s.doc_title + "\"");
  }
}

inline Instance instance_from_json(const Json& j, const std::string& where,
                                   std::optional<Dataset> expected = std::nullopt) {
  using namespace detail;
  Instance inst;
  inst.id = get_string(j, "id", where);
  const std::string ctx = where + " (id " + inst.id + ")";
  inst.dataset = parse_dataset(get_string(j, "dataset", ctx));
  if (expected && *expected != inst.dataset)
    throw ValidationError(ctx + ": dataset " + std::string(dataset_name(inst.dataset)) + " where " +
                          std::string(dataset_name(*expected)) + " was expected");
  inst.claim = get_string(j, "claim", ctx);
  const Json& ev = field(j, "evidence", ctx);
  if (!ev.is_array()) throw ValidationError(ctx + ": evidence must be an array");
  for (const auto& e : ev) {
    EvidenceSentence s;
    s.doc_title = get_string(e, "title", ctx);
    s.text = get_string(e, "text", ctx);
    s.sent_index = static_cast<int>(get_int(e, "sent_index", ctx));
    inst.evidence.push_back(std::move(s));
  }
  try {
    inst.label = parse_label(get_string(j, "label", ctx), label_space(inst.dataset));
  } catch (const ValidationError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
  validate(inst, where);
  return inst;
}

inline void to_json(Json& j, const DiagnosticInstance& d) {
  j = Json{{"base_id", d.base_id},
           {"claim", d.claim},
           {"evidence_reduced", d.reduced_evidence},
           {"label_new", d.new_label.name()},
           {"omission_type", omission_type_name(d.omission_type)},
           {"removed_span", d.removed_span},
           {"annotation", d.annotation ? Json(annotation_name(*d.annotation)) : Json(nullptr)}};
}

inline DiagnosticInstance diagnostic_from_json(const Json& j, const std::string& where) {
  using namespace detail;
  DiagnosticInstance d;
  d.base_id = get_string(j, "base_id", where);
  const std::string ctx = where + " (base_id " + d.base_id + ")";
  d.claim = get_string(j, "claim", ctx);
  d.reduced_evidence = get_string(j, "evidence_reduced", ctx);
  d.new_label = parse_label(get_string(j, "label_new", ctx));
  d.omission_type = parse_omission_type(get_string(j, "omission_type", ctx));
  d.removed_span = get_string(j, "removed_span", ctx);
  if (auto it = j.find("annotation"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(ctx + ": annotation must be a string or null");
    d.annotation = parse_annotation(it->get<std::string>());
  }
  if (d.annotation && ((*d.annotation == Annotation::Nei) != d.new_label.is_nei()))
    throw ValidationError(ctx + ": label_new " + std::string(d.new_label.name()) +
                          " contradicts annotation " + std::string(annotation_name(*d.annotation)));
  return d;
}

// ---------------------------------------------------------------------------
// Streaming readers.

class InstanceStream {
 public:
  explicit InstanceStream(const std::string& path, std::optional<Dataset> dataset = std::nullopt)
      : reader_(path), dataset_(dataset) {}

  std::optional<Instance> next() {
    auto j = reader_.next();
    if (!j) return std::nullopt;
    auto where = detail::where(reader_);
    Instance inst = instance_from_json(*j, where, dataset_);
    if (!ids_.insert(inst.id).second) throw ValidationError(where + ": duplicate instance id " + inst.id);
    return inst;
  }

 private:
  JsonlReader reader_;
  std::optional<Dataset> dataset_;
  std::unordered_set<std::string> ids_;
};

inline std::vector<Instance> read_instances(const std::string& path,
                                            std::optional<Dataset> dataset = std::nullopt) {
  InstanceStream s(path, dataset);
  std::vector<Instance> out;
  while (auto inst = s.next()) out.push_back(std::move(*inst));
  return out;
}

inline std::vector<DiagnosticInstance> read_diagnostics(const std::string& path) {
  JsonlReader r(path);
  std::vector<DiagnosticInstance> out;
  while (auto j = r.next()) out.push_back(diagnostic_from_json(*j, detail::where(r)));
  return out;
}

// Diagnostic records carry no id of their own. The first record of a base
// instance is keyed by base_id, later ones by base_id#k (k = 1, 2, ...).
inline std::vector<std::string> diagnostic_ids(const std::vector<DiagnosticInstance>& diags) {
  std::unordered_map<std::string, int> seen;
  std::vector<std::string> ids;
  ids.reserve(diags.size());
  for (const auto& d : diags) {
    int k = seen[d.base_id]++;
    ids.push_back(k == 0 ? d.base_id : d.base_id + "#" + std::to_string(k));
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Incorrect-evidence test sets.

struct TokenizerConfig {
  // Removed before counting overlap. Empty: every content token counts.
  std::unordered_set<std::string> stopwords;
};

// For each instance, the index of the other instance whose evidence shares
// the most token types with this instance's claim. Ties go to the smallest
// index. Page titles do not count.
inline std::vector<std::size_t> select_donors(const std::vector<Instance>& instances,
                                              const TokenizerConfig& tok = {}) {
  const std::size_t n = instances.size();
  if (n < 2) throw ValidationError("incorrect-evidence construction needs at least two instances");
  // Inverted index from evidence token to the donors containing it.
  std::unordered_map<std::string, std::vector<std::size_t>> postings;
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& t : text::content_set(evidence_text(instances[j]), tok.stopwords))
      postings[t].push_back(j);

  std::vector<std::size_t> donors(n);
  std::vector<std::size_t> counts(n, 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    for (const auto& t : text::content_set(instances[i].claim, tok.stopwords)) {
      auto it = postings.find(t);
      if (it == postings.end()) continue;
      for (std::size_t j : it->second) {
        if (counts[j]++ == 0) touched.push_back(j);
      }
    }
    std::size_t best = i == 0 ? 1 : 0;
    std::size_t best_count = counts[best];
    for (std::size_t j : touched) {
      if (j == i) continue;
      if (counts[j] > best_count || (counts[j] == best_count && j < best)) {
        best = j;
        best_count = counts[j];
      }
    }
    donors[i] = best;
    for (std::size_t j : touched) counts[j] = 0;
  }
  return donors;
}

// Same-size copy of the input in which every claim is paired with the closest
// evidence of another claim and relabeled to the NEI class.
inline std::vector<Instance> build_incorrect_evidence_set(const std::vector<Instance>& instances,
                                                          const TokenizerConfig& tok = {}) {
  auto donors = select_donors(instances, tok);
  std::vector<Instance> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Instance inst = instances[i];
    inst.evidence = instances[donors[i]].evidence;
    inst.label = VeracityLabel::nei(label_space(inst.dataset));
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace suffacts
