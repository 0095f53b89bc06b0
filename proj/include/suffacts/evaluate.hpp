#pragma once

// Scoring and analysis of model predictions on fact-checking and
// evidence-sufficiency data.

#include <algorithm>
#include <array>
#include <cstddef>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "suffacts/augment.hpp"
#include "suffacts/corpus.hpp"
#include "suffacts/text.hpp"

namespace suffacts::eval {

// ---------------------------------------------------------------------------
// Macro-F1.

struct MacroF1 {
  double value = 0.0;
  std::vector<double> per_class;
  // Classes absent from both gold and predictions; they score F1 = 0.
  std::vector<int> absent_classes;
};

inline MacroF1 macro_f1_detailed(const std::vector<VeracityLabel>& golds, const std::vector<VeracityLabel>& preds, int m) {
  if (golds.size() != preds.size())
    throw ValidationError("macro-F1: " + std::to_string(golds.size()) + " gold labels but " +
                          std::to_string(preds.size()) + " predictions");
  if (golds.empty()) throw ValidationError("macro-F1 of an empty set");
  if (m < 2) throw ValidationError("macro-F1: label space size must be at least 2");
  std::vector<std::size_t> tp(m, 0), fp(m, 0), fn(m, 0);
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const int g = golds[i].value, p = preds[i].value;
    if (g < 0 || g >= m || p < 0 || p >= m) throw ValidationError("macro-F1: label outside the label space");
    if (g == p) ++tp[g];
    else {
      ++fp[p];
      ++fn[g];
    }
  }
  MacroF1 r;
  for (int k = 0; k < m; ++k) {
    const double denom = 2.0 * tp[k] + fp[k] + fn[k];
    if (denom == 0) r.absent_classes.push_back(k);
    r.per_class.push_back(denom == 0 ? 0.0 : 2.0 * tp[k] / denom);
  }
  double sum = 0.0;
  for (double f : r.per_class) sum += f;
  r.value = sum / m;
  return r;
}

inline double macro_f1(const std::vector<VeracityLabel>& golds, const std::vector<VeracityLabel>& preds, int m) {
  return macro_f1_detailed(golds, preds, m).value;
}

// Fraction of predictions in the dataset's NEI class.
inline double nei_accuracy(const std::vector<VeracityLabel>& preds, Dataset dataset) {
  if (preds.empty()) throw ValidationError("NEI accuracy of an empty prediction set");
  const auto nei = VeracityLabel::nei(label_space(dataset));
  std::size_t n = 0;
  for (const auto& p : preds) n += p == nei;
  return static_cast<double>(n) / static_cast<double>(preds.size());
}

// ---------------------------------------------------------------------------
// Model agreement vs. human annotation.

enum class AgreementRow { EiAgree = 0, NeiAgree = 1, Disagree = 2 };

inline constexpr std::array<const char*, 3> kRowNames{"EI Agree", "NEI Agree", "Disagree"};
inline constexpr std::array<const char*, 3> kColumnNames{"EI_I", "EI_R", "NEI"};

inline std::size_t column_of(Annotation a) {
  switch (a) {
    case Annotation::EiIrrelevant: return 0;
    case Annotation::EiRepeated: return 1;
    case Annotation::Nei: return 2;
  }
  return 2;
}

// All three non-NEI, all three NEI, or anything else.
inline AgreementRow agreement_row(const std::vector<PredictionRecord>& preds) {
  if (preds.size() != 3)
    throw ValidationError("agreement needs exactly 3 model predictions, got " + std::to_string(preds.size()));
  std::size_t nei = 0;
  for (const auto& p : preds) nei += p.predicted.is_nei();
  if (nei == 0) return AgreementRow::EiAgree;
  if (nei == 3) return AgreementRow::NeiAgree;
  return AgreementRow::Disagree;
}

struct AgreementRecord {
  std::vector<PredictionRecord> predictions;
  Annotation human = Annotation::Nei;
};

struct AgreementMatrix {
  std::array<std::array<std::size_t, 3>, 3> counts{};

  std::size_t at(AgreementRow r, Annotation a) const { return counts[static_cast<std::size_t>(r)][column_of(a)]; }
  std::size_t column_total(std::size_t c) const { return counts[0][c] + counts[1][c] + counts[2][c]; }
  std::size_t total() const { return column_total(0) + column_total(1) + column_total(2); }

  AgreementMatrix& operator+=(const AgreementMatrix& o) {
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) counts[r][c] += o.counts[r][c];
    return *this;
  }
  friend bool operator==(const AgreementMatrix&, const AgreementMatrix&) = default;
};

inline AgreementMatrix agreement_table(const std::vector<AgreementRecord>& records) {
  AgreementMatrix m;
  for (const auto& rec : records)
    ++m.counts[static_cast<std::size_t>(agreement_row(rec.predictions))][column_of(rec.human)];
  return m;
}

// Human judgement of a diagnostic instance: the annotation when present,
// otherwise NEI vs. enough-information from the new label.
inline Annotation human_label(const DiagnosticInstance& d) {
  if (d.annotation) return *d.annotation;
  return d.new_label.is_nei() ? Annotation::Nei : Annotation::EiIrrelevant;
}

// Pairs every diagnostic instance with its three model predictions.
inline std::vector<AgreementRecord> agreement_records(const std::vector<DiagnosticInstance>& diags,
                                                      const PredictionIndex& preds) {
  const auto ids = diagnostic_ids(diags);
  std::vector<AgreementRecord> out;
  out.reserve(diags.size());
  for (std::size_t i = 0; i < diags.size(); ++i) {
    auto it = preds.find(ids[i]);
    const std::size_t n = it == preds.end() ? 0 : it->second.size();
    if (n != 3)
      throw ValidationError("diagnostic " + ids[i] + ": expected 3 model predictions, found " + std::to_string(n));
    out.push_back({it->second, human_label(diags[i])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Accuracy by omission type.

struct TypeAccuracy {
  std::size_t nei_total = 0;
  std::size_t nei_correct_count = 0;
  std::size_t ei_total = 0;
  std::size_t ei_correct_count = 0;

  // Fraction of human-NEI instances predicted NEI-class; nullopt without any.
  std::optional<double> nei_correct() const {
    if (nei_total == 0) return std::nullopt;
    return static_cast<double>(nei_correct_count) / static_cast<double>(nei_total);
  }
  // Fraction of human-EI instances predicted outside the NEI class.
  std::optional<double> ei_correct() const {
    if (ei_total == 0) return std::nullopt;
    return static_cast<double>(ei_correct_count) / static_cast<double>(ei_total);
  }
};

inline std::map<OmissionType, TypeAccuracy> per_type_accuracy(const std::vector<DiagnosticInstance>& diags,
                                                              const std::unordered_map<std::string, VeracityLabel>& preds) {
  const auto ids = diagnostic_ids(diags);
  std::map<OmissionType, TypeAccuracy> out;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    auto it = preds.find(ids[i]);
    if (it == preds.end()) throw ValidationError("no prediction for diagnostic " + ids[i]);
    auto& acc = out[diags[i].omission_type];
    const bool predicted_nei = it->second.is_nei();
    if (human_label(diags[i]) == Annotation::Nei) {
      ++acc.nei_total;
      acc.nei_correct_count += predicted_nei;
    } else {
      ++acc.ei_total;
      acc.ei_correct_count += !predicted_nei;
    }
  }
  return out;
}

// The same breakdown where an instance counts as correct only when all three
// models predict the correct side (NEI vs. not).
inline std::map<OmissionType, TypeAccuracy> per_type_accuracy_all(const std::vector<DiagnosticInstance>& diags,
                                                                  const PredictionIndex& preds) {
  const auto records = agreement_records(diags, preds);
  std::map<OmissionType, TypeAccuracy> out;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    const auto row = agreement_row(records[i].predictions);
    auto& acc = out[diags[i].omission_type];
    if (records[i].human == Annotation::Nei) {
      ++acc.nei_total;
      acc.nei_correct_count += row == AgreementRow::NeiAgree;
    } else {
      ++acc.ei_total;
      acc.ei_correct_count += row == AgreementRow::EiAgree;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Claim-evidence overlap.

struct OverlapStats {
  double mean_overlap = 0.0;
  std::size_t used = 0;
  // Instances whose claim has no content token after stop-word removal.
  std::size_t skipped = 0;
};

// Mean over instances of |claim ∩ evidence| / |claim| on case-folded
// content-token sets.
inline OverlapStats overlap_stats(const std::vector<std::pair<std::string, std::string>>& claim_evidence,
                                  const std::unordered_set<std::string>& stopwords) {
  OverlapStats s;
  double sum = 0.0;
  for (const auto& [claim, evidence] : claim_evidence) {
    const auto c = text::content_set(claim, stopwords);
    if (c.empty()) {
      ++s.skipped;
      continue;
    }
    const auto e = text::content_set(evidence, stopwords);
    sum += static_cast<double>(text::overlap(c, e)) / static_cast<double>(c.size());
    ++s.used;
  }
  s.mean_overlap = s.used ? sum / static_cast<double>(s.used) : 0.0;
  return s;
}

// Claim and evidence with bracketed page titles dropped.
inline std::string strip_titles(const std::string& rendered) {
  std::string out;
  for (const auto& s : parse_rendered_evidence(rendered)) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text tables.

// Left-aligned first column, right-aligned others, two spaces between.
inline std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      std::ostringstream cell;
      if (c == 0) cell << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      else cell << "  " << std::right << std::setw(static_cast<int>(width[c])) << r[c];
      line += cell.str();
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

inline std::string fixed(double x, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace suffacts::eval
