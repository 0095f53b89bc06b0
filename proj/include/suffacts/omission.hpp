#pragma once

// Evidence omission: every candidate removes exactly one evidence sentence
// or one optional constituent while keeping the remaining text fluent.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "suffacts/corpus.hpp"
#include "suffacts/dates.hpp"
#include "suffacts/syntax.hpp"

namespace suffacts {

struct OmissionCandidate {
  std::string base_id;
  OmissionType omission_type = OmissionType::Sent;
  std::string removed_span;
  Span removed_char_span;  // within the evidence sentence's text
  int sentence_index = 0;  // position in the instance's evidence list
  std::string reduced_evidence;

  friend bool operator==(const OmissionCandidate&, const OmissionCandidate&) = default;
};

// Key under which prediction files refer to a candidate.
inline std::string candidate_id(const OmissionCandidate& c) {
  return c.base_id + ":" + std::to_string(c.sentence_index) + ":" + std::to_string(c.removed_char_span.start) + "-" +
         std::to_string(c.removed_char_span.end);
}

inline void to_json(Json& j, const OmissionCandidate& c) {
  j = Json{{"base_id", c.base_id},
           {"type", omission_type_name(c.omission_type)},
           {"removed", c.removed_span},
           {"span", Json::array({c.removed_char_span.start, c.removed_char_span.end})},
           {"sent_index", c.sentence_index},
           {"evidence_reduced", c.reduced_evidence}};
}

inline OmissionCandidate candidate_from_json(const Json& j, const std::string& where) {
  using namespace detail;
  OmissionCandidate c;
  c.base_id = get_string(j, "base_id", where);
  c.omission_type = parse_omission_type(get_string(j, "type", where));
  c.removed_span = get_string(j, "removed", where);
  const Json& sp = field(j, "span", where);
  if (!sp.is_array() || sp.size() != 2 || !sp[0].is_number_unsigned() || !sp[1].is_number_unsigned() ||
      sp[0].get<std::size_t>() >= sp[1].get<std::size_t>())
    throw ValidationError(where + ": span must be [start, end) with start < end");
  c.removed_char_span = {sp[0].get<std::size_t>(), sp[1].get<std::size_t>()};
  c.sentence_index = static_cast<int>(get_int(j, "sent_index", where));
  c.reduced_evidence = get_string(j, "evidence_reduced", where);
  if (c.removed_span.empty() || c.reduced_evidence.empty())
    throw ValidationError(where + ": candidate with empty removed span or reduced evidence");
  return c;
}

inline std::vector<OmissionCandidate> read_candidates(const std::string& path) {
  JsonlReader r(path);
  std::vector<OmissionCandidate> out;
  while (auto j = r.next()) out.push_back(candidate_from_json(*j, detail::where(r)));
  return out;
}

namespace omission_detail {

inline bool is_noun(std::string_view t) { return t == "NN" || t == "NNS" || t == "NNP" || t == "NNPS"; }
inline bool is_common_noun(std::string_view t) { return t == "NN" || t == "NNS"; }
inline bool is_adj(std::string_view t) { return t == "JJ" || t == "JJR" || t == "JJS"; }
inline bool is_adv(std::string_view t) { return t == "RB" || t == "RBR" || t == "RBS"; }
inline bool is_num(std::string_view t) { return t == "CD"; }

inline bool is_negation(std::string_view token) {
  std::string low;
  for (char c : token) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return low == "not" || low == "n't" || low == "never" || low == "no" || low == "nt";
}

inline bool has_word(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return text::is_word_byte(static_cast<unsigned char>(c)); });
}

struct Found {
  OmissionType type;
  Span span;
  friend auto operator<=>(const Found&, const Found&) = default;
};

// Maximal runs of adjacent leaf children satisfying `keep`, among children
// [0, limit).
template <typename Keep>
void leaf_runs(const ConstTree& t, const ConstNode& phrase, std::size_t limit, Keep keep, OmissionType type,
               std::vector<Found>& out) {
  std::optional<Span> run;
  for (std::size_t i = 0; i < limit; ++i) {
    const ConstNode& c = t.node(phrase.children[i]);
    if (c.is_leaf() && keep(c)) {
      run = run ? Span{run->start, c.span.end} : c.span;
    } else if (run) {
      out.push_back({type, *run});
      run.reset();
    }
  }
  if (run) out.push_back({type, *run});
}

// Noun, adjective and number modifiers inside noun phrases. The head of an
// NP is its rightmost noun leaf child; modifiers precede it. Noun modifiers
// are common nouns in front of a common-noun head, so proper names are
// never split. Numbers in an NP without a noun head still count.
inline void np_modifiers(const ConstTree& t, std::vector<Found>& out) {
  for (const ConstNode* np : find_nodes(t, pred::label_is("NP") || pred::label_is("NML") || pred::label_is("NX"))) {
    std::optional<std::size_t> head;
    for (std::size_t i = np->children.size(); i-- > 0;) {
      const ConstNode& c = t.node(np->children[i]);
      if (c.is_leaf() && is_noun(c.label)) {
        head = i;
        break;
      }
    }
    if (head) {
      const ConstNode& h = t.node(np->children[*head]);
      if (is_common_noun(h.label))
        leaf_runs(t, *np, *head, [](const ConstNode& c) { return is_common_noun(c.label); }, OmissionType::NounM, out);
      leaf_runs(t, *np, *head, [](const ConstNode& c) { return is_adj(c.label); }, OmissionType::AdjM, out);
      leaf_runs(t, *np, *head, [](const ConstNode& c) { return is_num(c.label); }, OmissionType::NumM, out);
    } else {
      leaf_runs(t, *np, np->children.size(), [](const ConstNode& c) { return is_num(c.label); }, OmissionType::NumM,
                out);
    }
  }
}

// Adverbs modifying verbs, adjectives, adverbs or the clause: pure-adverb
// ADVP phrases and bare adverb leaves under VP/ADJP. Negators are kept,
// since dropping them flips the stance.
inline void adverb_modifiers(const ConstTree& t, std::vector<Found>& out) {
  auto parent_ok = [&](const ConstNode& n, std::initializer_list<std::string_view> labels) {
    const ConstNode* p = t.parent(n);
    if (!p || p->children.size() < 2) return false;
    auto bl = base_label(p->label);
    return std::find(labels.begin(), labels.end(), bl) != labels.end();
  };
  for (const ConstNode* advp : find_nodes(t, pred::label_is("ADVP"))) {
    if (!parent_ok(*advp, {"VP", "ADJP", "ADVP", "S"})) continue;
    auto leaves = t.leaves_of(*advp);
    bool pure = std::all_of(leaves.begin(), leaves.end(),
                            [](const ConstNode* l) { return is_adv(l->label) && !is_negation(l->token); });
    if (pure) out.push_back({OmissionType::AdvM, advp->span});
  }
  for (const ConstNode* phrase : find_nodes(t, pred::label_is("VP") || pred::label_is("ADJP"))) {
    leaf_runs(t, *phrase, phrase->children.size(),
              [](const ConstNode& c) { return is_adv(c.label) && !is_negation(c.token); }, OmissionType::AdvM, out);
  }
}

inline void prepositional_phrases(const ConstTree& t, std::vector<Found>& out) {
  auto pps = find_nodes(t, pred::label_is("PP") && pred::child_of_root() && !pred::dominated_by("VP"));
  for (const ConstNode* pp : pps)
    if (t.leaves_of(*pp).size() >= 2) out.push_back({OmissionType::PP, pp->span});
}

// Subordinate clauses in adjunct position: relative clauses under NP,
// clause-level SBARs, and VP-attached clauses opened by a subordinating
// conjunction other than the complementizers that/whether/if.
inline void subordinate_clauses(const ConstTree& t, std::vector<Found>& out) {
  for (const ConstNode* sbar : find_nodes(t, pred::label_is("SBAR"))) {
    const ConstNode* p = t.parent(*sbar);
    if (!p) continue;
    auto pl = base_label(p->label);
    bool ok = pl == "NP" || pl == "S" || pl == "SINV";
    if (pl == "VP") {
      auto leaves = t.leaves_of(*sbar);
      std::string first = leaves.front()->token;
      for (auto& c : first) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      ok = leaves.front()->label == "IN" && first != "that" && first != "whether" && first != "if";
    }
    if (ok) out.push_back({OmissionType::Sbar, sbar->span});
  }
}

inline std::vector<EvidenceSentence> with_sentence_text(const Instance& inst, std::size_t i, std::string text) {
  auto ev = inst.evidence;
  ev[i].text = std::move(text);
  return ev;
}

}  // namespace omission_detail

// One candidate per evidence sentence, each dropping that sentence. Only
// multi-sentence FEVER and HoVer evidence qualifies.
inline std::vector<OmissionCandidate> omit_sentences(const Instance& inst) {
  std::vector<OmissionCandidate> out;
  if (inst.dataset == Dataset::VitaminC || inst.evidence.size() < 2) return out;
  for (std::size_t i = 0; i < inst.evidence.size(); ++i) {
    std::vector<EvidenceSentence> rest;
    for (std::size_t k = 0; k < inst.evidence.size(); ++k)
      if (k != i) rest.push_back(inst.evidence[k]);
    const auto& s = inst.evidence[i];
    out.push_back({inst.id, OmissionType::Sent, s.text, Span{0, s.text.size()}, static_cast<int>(i),
                   render_evidence(rest)});
  }
  return out;
}

inline const std::set<OmissionType>& constituent_types() {
  static const std::set<OmissionType> k{OmissionType::PP,   OmissionType::NounM, OmissionType::AdjM,
                                        OmissionType::AdvM, OmissionType::NumM,  OmissionType::Sbar};
  return k;
}

// Constituent-level candidates located in the parse of each evidence
// sentence. `parses[i]` must be the parse of `inst.evidence[i]`.
inline std::vector<OmissionCandidate> omit_constituents(const Instance& inst, const std::vector<ConstTree>& parses,
                                                        const std::set<OmissionType>& types = constituent_types()) {
  using namespace omission_detail;
  for (auto t : types)
    if (!constituent_types().count(t))
      throw ValidationError("omission type " + std::string(omission_type_name(t)) + " is not constituent-level");
  if (parses.size() < inst.evidence.size())
    throw ValidationError("instance " + inst.id + ": missing parse for evidence sentence " +
                          std::to_string(parses.size()));

  std::vector<OmissionCandidate> out;
  for (std::size_t i = 0; i < inst.evidence.size(); ++i) {
    const ConstTree& tree = parses[i];
    const std::string& text = inst.evidence[i].text;
    if (tree.surface() != text)
      throw ValidationError("instance " + inst.id + ": parse surface of sentence " + std::to_string(i) +
                            " differs from the evidence text");

    std::vector<Found> found;
    if (types.count(OmissionType::PP)) prepositional_phrases(tree, found);
    if (types.count(OmissionType::Sbar)) subordinate_clauses(tree, found);
    if (types.count(OmissionType::NounM) || types.count(OmissionType::AdjM) || types.count(OmissionType::NumM))
      np_modifiers(tree, found);
    if (types.count(OmissionType::AdvM)) adverb_modifiers(tree, found);

    const auto date_matches = dates::find_dates(text);
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    for (const auto& f : found) {
      if (!types.count(f.type)) continue;
      if (f.span == tree.root().span) continue;
      if (f.type == OmissionType::NumM &&
          std::any_of(date_matches.begin(), date_matches.end(), [&](const dates::DateMatch& d) { return d.whole.intersects(f.span); }))
        continue;
      std::string reduced = excise_span(tree, f.span);
      if (!has_word(reduced)) continue;
      out.push_back({inst.id, f.type, std::string(slice(text, f.span)), f.span, static_cast<int>(i),
                     render_evidence(with_sentence_text(inst, i, std::move(reduced)))});
    }
  }
  return out;
}

// Date-modifier candidates from the two date templates; no parse needed.
inline std::vector<OmissionCandidate> omit_dates(const Instance& inst) {
  std::vector<OmissionCandidate> out;
  for (std::size_t i = 0; i < inst.evidence.size(); ++i) {
    const std::string& text = inst.evidence[i].text;
    for (const auto& d : dates::find_dates(text)) {
      for (const auto& r : dates::removals(d)) {
        std::string reduced = remove_fluently(text, r.excised);
        if (!omission_detail::has_word(reduced)) continue;
        out.push_back({inst.id, OmissionType::DateM, std::string(slice(text, r.removed)), r.removed,
                       static_cast<int>(i), render_evidence(omission_detail::with_sentence_text(inst, i, std::move(reduced)))});
      }
    }
  }
  return out;
}

// Orders by sentence, span start, type, span end, and keeps the first
// candidate for each (sentence, span).
inline void sort_and_dedup(std::vector<OmissionCandidate>& cands) {
  auto key = [](const OmissionCandidate& c) {
    return std::make_tuple(c.sentence_index, c.removed_char_span.start, static_cast<int>(c.omission_type),
                           c.removed_char_span.end);
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::set<std::tuple<int, std::size_t, std::size_t>> seen;
  std::vector<OmissionCandidate> out;
  for (auto& c : cands)
    if (seen.emplace(c.sentence_index, c.removed_char_span.start, c.removed_char_span.end).second)
      out.push_back(std::move(c));
  cands = std::move(out);
}

// Candidates of the requested types. Constituent types need `parses`.
inline std::vector<OmissionCandidate> generate(const Instance& inst, const std::vector<ConstTree>* parses,
                                               const std::set<OmissionType>& types) {
  std::vector<OmissionCandidate> all;
  if (types.count(OmissionType::Sent)) all = omit_sentences(inst);
  std::set<OmissionType> constituent;
  for (auto t : types)
    if (constituent_types().count(t)) constituent.insert(t);
  if (!constituent.empty()) {
    if (!parses) throw ValidationError("instance " + inst.id + ": constituent omissions need parses");
    auto c = omit_constituents(inst, *parses, constituent);
    all.insert(all.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  if (types.count(OmissionType::DateM)) {
    auto d = omit_dates(inst);
    all.insert(all.end(), std::make_move_iterator(d.begin()), std::make_move_iterator(d.end()));
  }
  sort_and_dedup(all);
  return all;
}

inline std::vector<OmissionCandidate> generate_all(const Instance& inst, const std::vector<ConstTree>& parses) {
  const std::set<OmissionType> all(kAllOmissionTypes.begin(), kAllOmissionTypes.end());
  return generate(inst, &parses, all);
}

// Parses of `inst`'s evidence sentences from a parse index, in evidence order.
inline std::vector<ConstTree> parses_for(const Instance& inst, const ParseIndex& index) {
  auto it = index.find(inst.id);
  std::vector<ConstTree> out;
  for (std::size_t i = 0; i < inst.evidence.size(); ++i) {
    const ParseRecord* rec = nullptr;
    if (it != index.end())
      if (auto jt = it->second.find(static_cast<int>(i)); jt != it->second.end()) rec = &jt->second;
    if (!rec)
      throw ValidationError("instance " + inst.id + ": missing parse for evidence sentence " + std::to_string(i));
    try {
      out.push_back(tree_from_record(*rec));
    } catch (const ValidationError& e) {
      throw ValidationError("instance " + inst.id + ", sentence " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

// FNV-1a, used to derive per-instance seeds that do not depend on the
// standard library's hash.
inline std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Keeps at most `n` candidates chosen uniformly with a generator seeded by
// `seed` and the base id; survivors keep their original order.
inline std::vector<OmissionCandidate> sample_candidates(std::vector<OmissionCandidate> cands, std::size_t n,
                                                        std::uint64_t seed) {
  if (cands.size() <= n) return cands;
  std::mt19937_64 rng(seed ^ stable_hash(cands.front().base_id));
  std::vector<std::size_t> idx(cands.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<OmissionCandidate> out;
  for (auto i : idx) out.push_back(std::move(cands[i]));
  return out;
}

}  // namespace suffacts
