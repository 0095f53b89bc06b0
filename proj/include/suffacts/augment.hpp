#pragma once

// Contrastive groups and counterfactually augmented data built from
// omission candidates, distractor sentences and tri-training agreement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "suffacts/corpus.hpp"
#include "suffacts/omission.hpp"
#include "suffacts/text.hpp"

namespace suffacts {

// ---------------------------------------------------------------------------
// Predictions.

struct PredictionRecord {
  std::string instance_id;
  std::string model_id;
  std::vector<double> probs;
  VeracityLabel predicted;

  LabelSpace space() const { return predicted.space; }
};

inline LabelSpace space_for_size(std::size_t m) {
  if (m == 3) return LabelSpace::ThreeWay;
  if (m == 2) return LabelSpace::TwoWay;
  throw ValidationError("probability vector of size " + std::to_string(m) + " matches no label space");
}

// Argmax of `probs`; the lowest index wins ties.
inline VeracityLabel argmax_label(const std::vector<double>& probs) {
  const auto space = space_for_size(probs.size());
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  return {space, static_cast<int>(best)};
}

inline void validate(const PredictionRecord& r, const std::string& where) {
  const auto space = space_for_size(r.probs.size());
  double sum = 0.0;
  for (double p : r.probs) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError(where + ": negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ValidationError(where + ": probabilities sum to " + std::to_string(sum));
  if (r.predicted.space != space) throw ValidationError(where + ": predicted label outside the probability label space");
  if (r.predicted != argmax_label(r.probs))
    throw ValidationError(where + ": predicted " + std::string(r.predicted.name()) + " is not the argmax of probs");
}

inline void to_json(Json& j, const PredictionRecord& r) {
  j = Json{{"instance_id", r.instance_id}, {"model_id", r.model_id}, {"probs", r.probs}, {"predicted", r.predicted.name()}};
}

inline PredictionRecord prediction_from_json(const Json& j, const std::string& where) {
  using namespace detail;
  PredictionRecord r;
  r.instance_id = get_string(j, "instance_id", where);
  const std::string ctx = where + " (instance " + r.instance_id + ")";
  r.model_id = get_string(j, "model_id", ctx);
  const Json& probs = field(j, "probs", ctx);
  if (!probs.is_array()) throw ValidationError(ctx + ": probs must be an array");
  for (const auto& p : probs) {
    if (!p.is_number()) throw ValidationError(ctx + ": probs must be numbers");
    r.probs.push_back(p.get<double>());
  }
  r.predicted = parse_label(get_string(j, "predicted", ctx), space_for_size(r.probs.size()));
  validate(r, ctx);
  return r;
}

// Records grouped by instance id, each group sorted by model id.
using PredictionIndex = std::unordered_map<std::string, std::vector<PredictionRecord>>;

inline PredictionIndex index_predictions(std::vector<PredictionRecord> records) {
  PredictionIndex index;
  for (auto& r : records) {
    auto& slot = index[r.instance_id];
    for (const auto& other : slot)
      if (other.model_id == r.model_id)
        throw ValidationError("duplicate prediction of model " + r.model_id + " for " + r.instance_id);
    slot.push_back(std::move(r));
  }
  for (auto& [id, slot] : index)
    std::sort(slot.begin(), slot.end(), [](const auto& a, const auto& b) { return a.model_id < b.model_id; });
  return index;
}

inline std::vector<PredictionRecord> read_predictions(const std::string& path) {
  JsonlReader r(path);
  std::vector<PredictionRecord> out;
  while (auto j = r.next()) out.push_back(prediction_from_json(*j, detail::where(r)));
  return out;
}

// ---------------------------------------------------------------------------
// Distractor mining.

// The non-gold document sentence sharing the most token types with the
// claim; the earliest sentence wins ties.
inline std::string mine_distractor(const Instance& inst, const std::vector<std::string>& document_sentences) {
  std::unordered_set<std::string> gold;
  for (const auto& e : inst.evidence) gold.insert(text::trim(e.text));
  const auto claim = text::token_set(inst.claim);
  std::optional<std::size_t> best;
  std::size_t best_overlap = 0;
  for (std::size_t i = 0; i < document_sentences.size(); ++i) {
    const auto& s = document_sentences[i];
    if (text::trim(s).empty() || gold.count(text::trim(s))) continue;
    std::size_t ov = text::overlap(claim, text::token_set(s));
    if (!best || ov > best_overlap) {
      best = i;
      best_overlap = ov;
    }
  }
  if (!best) throw ValidationError("instance " + inst.id + ": no non-gold sentence to use as distractor");
  return document_sentences[*best];
}

// Document JSONL: {"title": str, "sentences": [str]}.
inline std::unordered_map<std::string, std::vector<std::string>> read_documents(const std::string& path) {
  JsonlReader r(path);
  std::unordered_map<std::string, std::vector<std::string>> docs;
  while (auto j = r.next()) {
    const auto where = detail::where(r);
    auto title = detail::get_string(*j, "title", where);
    const Json& sents = detail::field(*j, "sentences", where);
    if (!sents.is_array()) throw ValidationError(where + ": sentences must be an array");
    std::vector<std::string> v;
    for (const auto& s : sents) {
      if (!s.is_string()) throw ValidationError(where + ": sentences must be strings");
      v.push_back(s.get<std::string>());
    }
    if (!docs.emplace(title, std::move(v)).second) throw ValidationError(where + ": duplicate document " + title);
  }
  return docs;
}

// ---------------------------------------------------------------------------
// Tri-training agreement filter.

// Keeps a candidate iff every prediction record for it (one per model other
// than the one being trained, at least two) is the NEI class.
inline std::vector<OmissionCandidate> filter_negatives(const std::vector<OmissionCandidate>& candidates,
                                                       const PredictionIndex& predictions) {
  std::vector<OmissionCandidate> kept;
  for (const auto& c : candidates) {
    const auto id = candidate_id(c);
    auto it = predictions.find(id);
    if (it == predictions.end() || it->second.size() < 2)
      throw ValidationError("candidate " + id + " needs predictions from two models, found " +
                            std::to_string(it == predictions.end() ? 0 : it->second.size()));
    const auto& recs = it->second;
    if (std::all_of(recs.begin(), recs.end(), [](const PredictionRecord& r) { return r.predicted.is_nei(); }))
      kept.push_back(c);
  }
  return kept;
}

// Drops the records of `model_id` (the model being trained).
inline PredictionIndex without_model(const PredictionIndex& index, const std::string& model_id) {
  PredictionIndex out;
  for (const auto& [id, recs] : index) {
    auto& slot = out[id];
    for (const auto& r : recs)
      if (r.model_id != model_id) slot.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contrastive groups.

struct ClaimEvidence {
  std::string claim;
  std::string evidence;  // rendered, title-prefixed
  friend bool operator==(const ClaimEvidence&, const ClaimEvidence&) = default;
};

struct ContrastiveNegative {
  ClaimEvidence pair;
  std::optional<OmissionType> omission;  // nullopt for the distractor-only negative
  friend bool operator==(const ContrastiveNegative&, const ContrastiveNegative&) = default;
};

struct ContrastiveGroup {
  std::string anchor_id;
  VeracityLabel anchor_label;
  ClaimEvidence anchor;
  ClaimEvidence positive;
  std::vector<ContrastiveNegative> negatives;
  std::string distractor_sentence;

  std::size_t k_negatives() const { return negatives.size(); }
  friend bool operator==(const ContrastiveGroup&, const ContrastiveGroup&) = default;
};

inline constexpr std::size_t kDefaultNegativesCap = 4;

// Anchor, positive (evidence plus distractor) and up to `cap` omission
// negatives followed by the distractor-only negative.
inline ContrastiveGroup assemble_group(const Instance& inst, const std::vector<OmissionCandidate>& negatives,
                                       const std::string& distractor, std::size_t cap = kDefaultNegativesCap) {
  if (inst.label.is_nei())
    throw ValidationError("instance " + inst.id + " is NEI-class and cannot anchor a contrastive group");
  if (text::trim(distractor).empty()) throw ValidationError("instance " + inst.id + ": empty distractor");
  ContrastiveGroup g;
  g.anchor_id = inst.id;
  g.anchor_label = inst.label;
  g.anchor = {inst.claim, render_evidence(inst.evidence)};
  g.positive = {inst.claim, g.anchor.evidence + " " + distractor};
  g.distractor_sentence = distractor;
  for (const auto& c : negatives) {
    if (g.negatives.size() == cap) break;
    if (c.base_id != inst.id)
      throw ValidationError("negative " + candidate_id(c) + " does not belong to instance " + inst.id);
    g.negatives.push_back({{inst.claim, c.reduced_evidence}, c.omission_type});
  }
  g.negatives.push_back({{inst.claim, distractor}, std::nullopt});
  return g;
}

inline void to_json(Json& j, const ContrastiveGroup& g) {
  Json negs = Json::array();
  for (const auto& n : g.negatives)
    negs.push_back(Json{{"claim", n.pair.claim},
                        {"evidence", n.pair.evidence},
                        {"source", n.omission ? std::string(omission_type_name(*n.omission)) : std::string("DISTRACTOR")}});
  j = Json{{"anchor_id", g.anchor_id},
           {"anchor", Json{{"claim", g.anchor.claim}, {"evidence", g.anchor.evidence}, {"label", g.anchor_label.name()}}},
           {"positive", Json{{"claim", g.positive.claim}, {"evidence", g.positive.evidence}}},
           {"negatives", std::move(negs)},
           {"distractor", g.distractor_sentence}};
}

inline ContrastiveGroup group_from_json(const Json& j, const std::string& where) {
  using namespace detail;
  ContrastiveGroup g;
  g.anchor_id = get_string(j, "anchor_id", where);
  const std::string ctx = where + " (anchor " + g.anchor_id + ")";
  const Json& a = field(j, "anchor", ctx);
  g.anchor = {get_string(a, "claim", ctx), get_string(a, "evidence", ctx)};
  g.anchor_label = parse_label(get_string(a, "label", ctx));
  const Json& p = field(j, "positive", ctx);
  g.positive = {get_string(p, "claim", ctx), get_string(p, "evidence", ctx)};
  const Json& negs = field(j, "negatives", ctx);
  if (!negs.is_array()) throw ValidationError(ctx + ": negatives must be an array");
  std::size_t distractors = 0;
  for (const auto& n : negs) {
    ContrastiveNegative neg{{get_string(n, "claim", ctx), get_string(n, "evidence", ctx)}, std::nullopt};
    auto src = get_string(n, "source", ctx);
    if (src == "DISTRACTOR") ++distractors;
    else neg.omission = parse_omission_type(src);
    g.negatives.push_back(std::move(neg));
  }
  g.distractor_sentence = get_string(j, "distractor", ctx);
  if (g.anchor_label.is_nei()) throw ValidationError(ctx + ": NEI-class anchor");
  if (distractors != 1) throw ValidationError(ctx + ": a group needs exactly one distractor-only negative");
  return g;
}

inline std::vector<ContrastiveGroup> read_groups(const std::string& path) {
  JsonlReader r(path);
  std::vector<ContrastiveGroup> out;
  while (auto j = r.next()) out.push_back(group_from_json(*j, detail::where(r)));
  return out;
}

// ---------------------------------------------------------------------------
// Counterfactual data augmentation.

// Per group: the anchor and the positive with the gold label, then every
// negative with the dataset's NEI class.
inline std::vector<Instance> emit_cad(const std::vector<ContrastiveGroup>& groups, Dataset dataset) {
  const auto space = label_space(dataset);
  std::vector<Instance> out;
  for (const auto& g : groups) {
    if (g.anchor_label.space != space)
      throw ValidationError("group " + g.anchor_id + ": anchor label " + std::string(g.anchor_label.name()) +
                            " is not in the label space of " + std::string(dataset_name(dataset)));
    if (g.anchor_label.is_nei()) throw ValidationError("group " + g.anchor_id + ": NEI-class anchor");
    auto make = [&](std::string id, const ClaimEvidence& ce, VeracityLabel label) {
      return Instance{std::move(id), dataset, ce.claim, parse_rendered_evidence(ce.evidence), label};
    };
    out.push_back(make(g.anchor_id, g.anchor, g.anchor_label));
    out.push_back(make(g.anchor_id + "+pos", g.positive, g.anchor_label));
    for (std::size_t k = 0; k < g.negatives.size(); ++k)
      out.push_back(make(g.anchor_id + "-neg" + std::to_string(k + 1), g.negatives[k].pair, VeracityLabel::nei(space)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ensemble.

// Most common prediction of three models; without a majority, the label
// holding the single highest probability across the three (lowest label
// index on equal maxima).
inline VeracityLabel majority_vote(const std::vector<PredictionRecord>& records) {
  if (records.size() != 3)
    throw ValidationError("majority vote needs exactly 3 predictions, got " + std::to_string(records.size()));
  const auto space = records[0].space();
  const std::size_t m = static_cast<std::size_t>(label_count(space));
  for (const auto& r : records)
    if (r.space() != space || r.probs.size() != m)
      throw ValidationError("majority vote over mismatched label spaces for " + records[0].instance_id);
  std::vector<int> votes(m, 0);
  for (const auto& r : records) ++votes[static_cast<std::size_t>(r.predicted.value)];
  for (std::size_t k = 0; k < m; ++k)
    if (votes[k] >= 2) return {space, static_cast<int>(k)};
  std::size_t best = 0;
  double best_p = -1.0;
  for (const auto& r : records)
    for (std::size_t k = 0; k < m; ++k)
      if (r.probs[k] > best_p || (r.probs[k] == best_p && k < best)) {
        best = k;
        best_p = r.probs[k];
      }
  return {space, static_cast<int>(best)};
}

// One-hot record carrying the ensemble's vote, so votes can be scored like
// any other prediction file.
inline PredictionRecord vote_record(const std::vector<PredictionRecord>& records, const std::string& model_id = "ensemble") {
  VeracityLabel label = majority_vote(records);
  std::vector<double> probs(static_cast<std::size_t>(label_count(label.space)), 0.0);
  probs[static_cast<std::size_t>(label.value)] = 1.0;
  return {records[0].instance_id, model_id, std::move(probs), label};
}

}  // namespace suffacts
