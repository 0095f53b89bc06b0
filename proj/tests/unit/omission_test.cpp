#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "suffacts/omission.hpp"
#include "support/invariants.hpp"
#include "support/tempfile.hpp"

using namespace suffacts;

namespace {

struct Fixture {
  std::map<std::string, Instance> instances;
  ParseIndex parses;

  Fixture() {
    const std::string dir = SUFFACTS_FIXTURES;
    for (auto& inst : read_instances(dir + "/examples_instances.jsonl")) instances.emplace(inst.id, inst);
    parses = read_parses(dir + "/examples_parses.jsonl");
  }

  std::vector<OmissionCandidate> all(const std::string& id) const {
    const auto& inst = instances.at(id);
    return generate_all(inst, parses_for(inst, parses));
  }
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

Instance multi(Dataset d, std::vector<std::string> texts) {
  Instance inst{"m", d, "claim", {}, make_label(label_space(d), 0)};
  for (std::size_t i = 0; i < texts.size(); ++i)
    inst.evidence.push_back({"Page " + std::to_string(i), texts[i], static_cast<int>(i)});
  return inst;
}

const OmissionCandidate* find(const std::vector<OmissionCandidate>& v, OmissionType t, const std::string& removed) {
  for (const auto& c : v)
    if (c.omission_type == t && c.removed_span == removed) return &c;
  return nullptr;
}

}  // namespace

TEST(OmitSentences, FourSentenceHoverInstance) {
  auto inst = multi(Dataset::Hover, {"Kasabian are an English rock band.", "They formed in Leicester.",
                                     "Their debut album was released in 2004.", "Serge Pizzorno is a member."});
  auto c = omit_sentences(inst);
  ASSERT_EQ(c.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(c[i].sentence_index, static_cast<int>(i));
    EXPECT_EQ(c[i].removed_span, inst.evidence[i].text);
    EXPECT_EQ(c[i].reduced_evidence.find(inst.evidence[i].text), std::string::npos);
  }
  EXPECT_EQ(c[0].reduced_evidence,
            "[Page 1] They formed in Leicester. [Page 2] Their debut album was released in 2004. "
            "[Page 3] Serge Pizzorno is a member.");
}

TEST(OmitSentences, SingleSentenceAndVitaminCGiveNothing) {
  EXPECT_TRUE(omit_sentences(multi(Dataset::Fever, {"Only one."})).empty());
  EXPECT_TRUE(omit_sentences(multi(Dataset::VitaminC, {"One.", "Two."})).empty());
}

TEST(OmitSentences, TwoSentencesAreComplements) {
  auto inst = multi(Dataset::Fever, {"First one.", "Second one."});
  auto c = omit_sentences(inst);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].reduced_evidence, "[Page 1] Second one.");
  EXPECT_EQ(c[1].reduced_evidence, "[Page 0] First one.");
}

TEST(OmitConstituents, VedamNounModifier) {
  auto c = fx().all("ex-nounm");
  auto* n = find(c, OmissionType::NounM, "drama");
  ASSERT_NE(n, nullptr);
  EXPECT_EQ(n->reduced_evidence,
            "[Vedam (film)] Vedam is a 2010 Indian film written and directed by Radhakrishna Jagarlamudi.");
  EXPECT_NE(find(c, OmissionType::AdjM, "Indian"), nullptr);
  EXPECT_NE(find(c, OmissionType::NumM, "2010"), nullptr);
  EXPECT_EQ(find(c, OmissionType::NounM, "Jagarlamudi"), nullptr) << "proper names are never split";
}

TEST(OmitConstituents, NaturalBornKillersAdverb) {
  auto c = fx().all("ex-advm");
  auto* a = find(c, OmissionType::AdvM, "heavily");
  ASSERT_NE(a, nullptr);
  EXPECT_NE(a->reduced_evidence.find("that was revised by writer"), std::string::npos);
}

TEST(OmitConstituents, NorthVietnamRelativeClause) {
  auto c = fx().all("ex-sbar");
  auto* s = find(c, OmissionType::Sbar, "which existed from 1945 to 1976");
  ASSERT_NE(s, nullptr);
  EXPECT_NE(s->reduced_evidence.find("was a state in Southeast Asia."), std::string::npos);
}

TEST(OmitConstituents, NegatorsAreNotAdverbCandidates) {
  auto inst = multi(Dataset::Fever, {"He did not really win."});
  auto t = parse_bracketed("(S (NP (PRP He)) (VP (VBD did) (RB not) (ADVP (RB really)) (VP (VB win))) (. .))",
                           inst.evidence[0].text);
  auto c = omit_constituents(inst, {t});
  EXPECT_EQ(find(c, OmissionType::AdvM, "not"), nullptr);
  EXPECT_NE(find(c, OmissionType::AdvM, "really"), nullptr);
}

TEST(OmitConstituents, MissingParseNamesSentence) {
  auto inst = multi(Dataset::Fever, {"A b.", "C d."});
  std::vector<ConstTree> one{parse_bracketed("(S (NN A) (NN b) (. .))", "A b.")};
  try {
    omit_constituents(inst, one);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sentence 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(omit_constituents(inst, {one[0], one[0]}), ValidationError) << "surface mismatch";
  EXPECT_THROW(omit_constituents(inst, {}, {OmissionType::DateM}), ValidationError);
}

TEST(OmitDates, ColombianaAndNoMatch) {
  auto c = omit_dates(fx().instances.at("ex-datem"));
  ASSERT_EQ(c.size(), 4u);
  auto* d = find(c, OmissionType::DateM, "1st October");
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->reduced_evidence, "[Colombiana] Colombiana is a French action film from 2011.");
  EXPECT_TRUE(omit_dates(multi(Dataset::Fever, {"A film from 2011."})).empty());
}

TEST(OmitDates, FourDistinctReductions) {
  auto inst = multi(Dataset::Fever, {"It was released on 2 April 1990."});
  std::vector<std::string> got;
  for (const auto& c : omit_dates(inst)) got.push_back(c.reduced_evidence);
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{"[Page 0] It was released on 1990.", "[Page 0] It was released on 2 April.",
                                           "[Page 0] It was released on 2.", "[Page 0] It was released on April 1990."}));
}

TEST(GenerateAll, UraniumPpAndNumberWithoutDate) {
  auto c = fx().all("ex-pp");
  EXPECT_NE(find(c, OmissionType::PP, "by Arthur Jeffrey Dempster"), nullptr);
  EXPECT_NE(find(c, OmissionType::NumM, "1935"), nullptr);
  EXPECT_TRUE(std::none_of(c.begin(), c.end(), [](const auto& x) { return x.omission_type == OmissionType::DateM; }));
  EXPECT_TRUE(std::none_of(c.begin(), c.end(), [](const auto& x) { return x.omission_type == OmissionType::Sent; }));
}

// Brute force over every node: a candidate exists for exactly the PP nodes
// that are root children outside any VP with two or more words.
TEST(GenerateAll, PpCandidatesMatchBruteForce) {
  for (const auto& [id, inst] : fx().instances) {
    auto parses = parses_for(inst, fx().parses);
    auto c = generate_all(inst, parses);
    for (std::size_t i = 0; i < parses.size(); ++i) {
      const auto& t = parses[i];
      std::set<std::pair<std::size_t, std::size_t>> want, got;
      for (const auto& n : t.nodes()) {
        if (n.is_leaf() || base_label(n.label) != "PP" || !n.parent || *n.parent != t.root().id) continue;
        if (t.leaves_of(n).size() >= 2) want.emplace(n.span.start, n.span.end);
      }
      for (const auto& x : c)
        if (x.sentence_index == static_cast<int>(i) && x.omission_type == OmissionType::PP)
          got.emplace(x.removed_char_span.start, x.removed_char_span.end);
      EXPECT_EQ(got, want) << id;
    }
  }
}

TEST(GenerateAll, NothingOptionalGivesNothing) {
  auto inst = multi(Dataset::Fever, {"Paris is huge."});
  auto t = parse_bracketed("(S (NP (NNP Paris)) (VP (VBZ is) (ADJP (JJ huge))) (. .))", inst.evidence[0].text);
  EXPECT_TRUE(generate_all(inst, {t}).empty());
}

TEST(GenerateAll, SameSpanFromTwoRulesKeptOnce) {
  auto inst = multi(Dataset::Fever, {"In Paris he was very tall."});
  auto t = parse_bracketed(
      "(S (PP (IN In) (NP (NNP Paris))) (NP (PRP he)) (VP (VBD was) (ADJP (ADVP (RB very)) (JJ tall))) (. .))",
      inst.evidence[0].text);
  auto c = generate_all(inst, {t});
  EXPECT_NE(find(c, OmissionType::PP, "In Paris"), nullptr);
  EXPECT_NE(find(c, OmissionType::AdvM, "very"), nullptr);
  std::map<std::pair<std::size_t, std::size_t>, int> seen;
  for (const auto& x : c) ++seen[{x.removed_char_span.start, x.removed_char_span.end}];
  for (const auto& [k, n] : seen) EXPECT_EQ(n, 1);

  std::vector<OmissionCandidate> dup{
      {"m", OmissionType::NumM, "2001", {5, 9}, 0, "x"},
      {"m", OmissionType::DateM, "2001", {5, 9}, 0, "x"},
      {"m", OmissionType::PP, "in 2001", {2, 9}, 0, "y"},
  };
  sort_and_dedup(dup);
  ASSERT_EQ(dup.size(), 2u);
  EXPECT_EQ(dup[0].omission_type, OmissionType::PP);
  EXPECT_EQ(dup[1].omission_type, OmissionType::NumM);
}

TEST(GenerateAll, FixtureCandidatesSatisfyInvariants) {
  for (const auto& [id, inst] : fx().instances) {
    auto parses = parses_for(inst, fx().parses);
    for (const auto& c : generate_all(inst, parses)) {
      auto bad = inv::check(inst, &parses, c);
      EXPECT_FALSE(bad) << *bad;
    }
  }
}

TEST(ParsesFor, MissingParseNamesIndex) {
  auto inst = fx().instances.at("ex-sent");
  auto idx = fx().parses;
  idx.at("ex-sent").erase(1);
  try {
    parses_for(inst, idx);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sentence 1"), std::string::npos);
  }
}

TEST(Candidates, IdFormatAndJsonRoundTrip) {
  auto c = fx().all("ex-sbar");
  ASSERT_FALSE(c.empty());
  const auto* s = find(c, OmissionType::Sbar, "which existed from 1945 to 1976");
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(candidate_id(*s), "ex-sbar:0:" + std::to_string(s->removed_char_span.start) + "-" +
                                  std::to_string(s->removed_char_span.end));
  testutil::TempFile f;
  write_jsonl(c, f.path());
  EXPECT_EQ(read_candidates(f.path()), c);
}

TEST(Sampling, DeterministicSubsetInOriginalOrder) {
  auto c = fx().all("ex-advm");
  ASSERT_GT(c.size(), 3u);
  auto a = sample_candidates(c, 3, 42), b = sample_candidates(c, 3, 42);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 3u);
  std::size_t last = 0;
  for (const auto& x : a) {
    auto pos = static_cast<std::size_t>(std::find(c.begin(), c.end(), x) - c.begin());
    ASSERT_LT(pos, c.size());
    EXPECT_GE(pos, last);
    last = pos;
  }
  EXPECT_EQ(sample_candidates(c, 100, 1), c);
}
