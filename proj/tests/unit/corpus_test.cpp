#include <gtest/gtest.h>

#include <random>

#include "suffacts/corpus.hpp"
#include "support/synthetic.hpp"
#include "support/tempfile.hpp"

using namespace suffacts;
using testutil::TempFile;

namespace {

const char* kSindh =
    R"({"id": "sindh", "dataset": "fever", "claim": "Sindh borders Indian states and is in India.", )"
    R"("evidence": [{"title": "Sindh", "text": "Sindh is home to a large portion of Pakistan's industrial sector.", "sent_index": 0}], )"
    R"("label": "REFUTES"})";

Instance make(std::string id, Dataset d, std::string claim, std::vector<std::string> texts, int label = 0) {
  Instance inst{std::move(id), d, std::move(claim), {}, make_label(label_space(d), label)};
  for (std::size_t i = 0; i < texts.size(); ++i)
    inst.evidence.push_back({"Doc", std::move(texts[i]), static_cast<int>(i)});
  return inst;
}

}  // namespace

TEST(Labels, SpacesPerDataset) {
  EXPECT_EQ(label_space(Dataset::Fever), LabelSpace::ThreeWay);
  EXPECT_EQ(label_space(Dataset::VitaminC), LabelSpace::ThreeWay);
  EXPECT_EQ(label_space(Dataset::Hover), LabelSpace::TwoWay);
  EXPECT_EQ(VeracityLabel::nei(LabelSpace::ThreeWay).name(), "NEI");
  EXPECT_EQ(VeracityLabel::nei(LabelSpace::TwoWay).name(), "NOT_SUPPORTING");
  EXPECT_EQ(parse_label("NOT ENOUGH INFO", LabelSpace::ThreeWay), VeracityLabel::nei(LabelSpace::ThreeWay));
  EXPECT_THROW(parse_label("NEI", LabelSpace::TwoWay), ValidationError);
  EXPECT_THROW(parse_label("MAYBE"), ValidationError);
}

TEST(ReadInstances, FeverRecordRoundTrips) {
  TempFile f(std::string(kSindh) + "\n");
  auto v = read_instances(f.path());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].claim, "Sindh borders Indian states and is in India.");
  EXPECT_EQ(v[0].label.name(), "REFUTES");
  EXPECT_EQ(v[0].evidence[0].doc_title, "Sindh");
}

TEST(ReadInstances, HoverRejectsNeiNamingTheInstance) {
  TempFile f(R"({"id": "h1", "dataset": "hover", "claim": "c", "evidence": [], "label": "NEI"})" "\n");
  try {
    read_instances(f.path());
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("h1"), std::string::npos);
  }
}

TEST(ReadInstances, MalformedLineCarriesLineNumber) {
  TempFile f(std::string(kSindh) + "\n\n{not json\n");
  try {
    read_instances(f.path());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST(ReadInstances, DuplicateIdsAndEmptyEvidence) {
  TempFile dup(std::string(kSindh) + "\n" + kSindh + "\n");
  EXPECT_THROW(read_instances(dup.path()), ValidationError);
  TempFile noev(R"({"id": "x", "dataset": "fever", "claim": "c", "evidence": [], "label": "SUPPORTS"})" "\n");
  EXPECT_THROW(read_instances(noev.path()), ValidationError);
  TempFile nei(R"({"id": "x", "dataset": "fever", "claim": "c", "evidence": [], "label": "NEI"})" "\n");
  EXPECT_EQ(read_instances(nei.path()).size(), 1u);
  EXPECT_THROW(read_instances(nei.path(), Dataset::Hover), ValidationError);
}

TEST(WriteJsonl, EmptyStreamWritesNothing) {
  TempFile f;
  EXPECT_EQ(write_jsonl(std::vector<Instance>{}, f.path()), 0u);
  EXPECT_EQ(f.read(), "");
}

TEST(WriteJsonl, ThreeInstancesRoundTripByteIdentical) {
  std::vector<Instance> v{make("a", Dataset::Fever, "c1", {"s1.", "s2."}, 1),
                          make("b", Dataset::Hover, "c2", {"t."}, 0),
                          make("c", Dataset::VitaminC, "c3", {"u \"quoted\" é."}, 2)};
  TempFile f;
  EXPECT_EQ(write_jsonl(v, f.path()), 3u);
  EXPECT_EQ(testutil::line_count(f.read()), 3u);
  auto back = read_instances(f.path());
  EXPECT_EQ(back, v);
  TempFile g;
  write_jsonl(back, g.path());
  EXPECT_EQ(f.read(), g.read());
}

TEST(WriteJsonl, UnwritablePathIsIoError) {
  EXPECT_THROW(write_jsonl(std::vector<Instance>{}, "/nonexistent/dir/out.jsonl"), IoError);
}

TEST(Diagnostics, NeiAnnotationField) {
  DiagnosticInstance d{"b1", "claim", "[T] reduced", VeracityLabel::nei(LabelSpace::ThreeWay), OmissionType::PP,
                       "by X", Annotation::Nei};
  TempFile f;
  write_jsonl(std::vector<DiagnosticInstance>{d}, f.path());
  EXPECT_NE(f.read().find(R"("annotation":"NEI")"), std::string::npos);
  auto back = read_diagnostics(f.path());
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].annotation, Annotation::Nei);
  EXPECT_EQ(back[0].reduced_evidence, "[T] reduced");
}

TEST(Diagnostics, AnnotationMustAgreeWithLabel) {
  TempFile f(R"({"base_id": "b", "claim": "c", "evidence_reduced": "e", "label_new": "SUPPORTS", )"
             R"("omission_type": "PP", "removed_span": "x", "annotation": "NEI"})" "\n");
  EXPECT_THROW(read_diagnostics(f.path()), ValidationError);
}

TEST(Diagnostics, RepeatedBaseIdsGetSuffixes) {
  std::vector<DiagnosticInstance> d(4);
  d[0].base_id = d[1].base_id = d[3].base_id = "a";
  d[2].base_id = "b";
  EXPECT_EQ(diagnostic_ids(d), (std::vector<std::string>{"a", "a#1", "b", "a#2"}));
}

TEST(RenderedEvidence, RoundTripsTitles) {
  std::vector<EvidenceSentence> ev{{"Pink Floyd", "Pink Floyd were founded.", 0}, {"The Wall (album)", "It sold.", 1}};
  const auto flat = render_evidence(ev);
  EXPECT_EQ(flat, "[Pink Floyd] Pink Floyd were founded. [The Wall (album)] It sold.");
  EXPECT_EQ(parse_rendered_evidence(flat), ev);
  auto loose = parse_rendered_evidence("just text [not a title]x");
  ASSERT_EQ(loose.size(), 1u);
  EXPECT_EQ(loose[0].doc_title, "");
}

TEST(IncorrectEvidence, TwoInstancesSwapEvidence) {
  std::vector<Instance> v{make("a", Dataset::Fever, "x", {"ea."}), make("b", Dataset::Hover, "y", {"eb."})};
  auto out = build_incorrect_evidence_set(v);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].evidence, v[1].evidence);
  EXPECT_EQ(out[1].evidence, v[0].evidence);
  EXPECT_EQ(out[0].label.name(), "NEI");
  EXPECT_EQ(out[1].label.name(), "NOT_SUPPORTING");
}

TEST(IncorrectEvidence, HigherOverlapDonorWins) {
  std::vector<Instance> v{make("q", Dataset::Fever, "a b c", {"zzz."}), make("d1", Dataset::Fever, "q", {"a x y."}),
                          make("d2", Dataset::Fever, "r", {"a b y."})};
  EXPECT_EQ(select_donors(v)[0], 2u);
  // Titles are metadata, not overlap material.
  v[1].evidence[0].doc_title = "a b c";
  EXPECT_EQ(select_donors(v)[0], 2u);
}

TEST(IncorrectEvidence, TiesGoToSmallestIndexAndSingleInputFails) {
  std::vector<Instance> v{make("a", Dataset::Fever, "nothing shared", {"x."}), make("b", Dataset::Fever, "q", {"y."}),
                          make("c", Dataset::Fever, "r", {"z."})};
  EXPECT_EQ(select_donors(v), (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_THROW(build_incorrect_evidence_set({v[0]}), ValidationError);
}

TEST(IncorrectEvidence, SameSizeOnHundredInstances) {
  auto v = synth::plain_instances(100, 3);
  auto out = build_incorrect_evidence_set(v);
  ASSERT_EQ(out.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_TRUE(out[i].label.is_nei());
    EXPECT_EQ(out[i].claim, v[i].claim);
    // Every output evidence exists verbatim in the input, and never the instance's own.
    bool found = false;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j != i && v[j].evidence == out[i].evidence) found = true;
    EXPECT_TRUE(found) << i;
  }
}

// Donor selection against exhaustive pairwise counting, with stop words.
TEST(IncorrectEvidence, MatchesBruteForceWithStopwords) {
  auto v = synth::plain_instances(120, 17);
  TokenizerConfig tok{{"film", "band", "the"}};
  auto donors = select_donors(v, tok);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t best = 0, best_o = 0;
    bool first = true;
    const auto claim = text::content_set(v[i].claim, tok.stopwords);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      const auto o = text::overlap(claim, text::content_set(evidence_text(v[j]), tok.stopwords));
      if (first || o > best_o) best = j, best_o = o, first = false;
    }
    EXPECT_EQ(donors[i], best) << i;
  }
}
