#include "griff/griff.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "griff/aligner.hpp"
#include "test_support.hpp"

namespace griff {
namespace {

using testutil::makeScore;
using testutil::randomGriff;
using testutil::randomPlan;
using testutil::randomScore;

std::vector<PerformanceNote> notesAt(const std::vector<std::pair<double, int>>& entries) {
  std::vector<PerformanceNote> notes;
  int i = 0;
  for (const auto& [onset, pitch] : entries) {
    PerformanceNote n;
    n.id = "p" + std::to_string(i++);
    n.onset_s = onset;
    n.offset_s = onset + 0.1;
    n.pitch = pitch;
    n.velocity = 64;
    notes.push_back(n);
  }
  return notes;
}

// ---------------------------------------------------------------------------
// Onset grouping
// ---------------------------------------------------------------------------

TEST(GroupOnsetsTest, JoinsNotesInsideAnchoredWindow) {
  // 0.03 joins the vector anchored at 0.00; 0.06 starts a new one because
  // the second anchor is 0.06 itself.
  std::vector<OnsetPitch> notes = {{0.00, 60}, {0.03, 64}, {0.06, 67}};
  auto vectors = groupOnsets(notes, 0.035);
  ASSERT_EQ(vectors.size(), 2u);
  EXPECT_EQ(vectors[0], (std::vector<int>{60, 64}));
  EXPECT_EQ(vectors[1], (std::vector<int>{67}));
}

TEST(GroupOnsetsTest, WindowBoundaryIsExclusive) {
  std::vector<OnsetPitch> notes = {{0.0, 60}, {0.035, 64}};
  auto vectors = groupOnsets(notes, 0.035);
  ASSERT_EQ(vectors.size(), 2u);
}

TEST(GroupOnsetsTest, LargeWindowProducesSingleVector) {
  std::vector<OnsetPitch> notes = {{0.0, 60}, {1.0, 64}, {2.0, 55}};
  auto vectors = groupOnsets(notes, 10.0);
  ASSERT_EQ(vectors.size(), 1u);
  EXPECT_EQ(vectors[0], (std::vector<int>{55, 60, 64}));
}

TEST(GroupOnsetsTest, ZeroWindowGroupsExactTiesOnly) {
  std::vector<OnsetPitch> notes = {{0.0, 60}, {0.0, 52}, {0.001, 64}, {0.002, 67}};
  auto vectors = groupOnsets(notes, 0.0);
  ASSERT_EQ(vectors.size(), 3u);
  EXPECT_EQ(vectors[0], (std::vector<int>{52, 60}));
  EXPECT_EQ(vectors[1], (std::vector<int>{64}));
  EXPECT_EQ(vectors[2], (std::vector<int>{67}));
}

TEST(GroupOnsetsTest, DeduplicatesPitchesWithinVector) {
  std::vector<OnsetPitch> notes = {{0.0, 60}, {0.01, 60}, {0.02, 55}};
  auto vectors = groupOnsets(notes, 0.035);
  ASSERT_EQ(vectors.size(), 1u);
  EXPECT_EQ(vectors[0], (std::vector<int>{55, 60}));
}

TEST(GroupOnsetsTest, EmptyInputGivesNoVectors) {
  EXPECT_TRUE(groupOnsets({}, 0.035).empty());
}

TEST(GroupOnsetsTest, RejectsNegativeWindow) {
  EXPECT_THROW(groupOnsets({}, -0.001), std::invalid_argument);
  EXPECT_THROW(QuantizationThreshold{-1.0}, std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

TEST(ExtractTest, OrderedSeparatesBassFromChord) {
  ScoreNote bass{"s0", 0, 48, 0.0};
  auto notes = notesAt({{0.00, 48}, {0.50, 52}, {0.51, 55}, {0.52, 60}});
  OrderedGriff griff = extractOrdered(bass, notes, 0.035);
  EXPECT_EQ(encode(griff), "0|4_7_12");
}

TEST(ExtractTest, OrderedOfNothingIsEmpty) {
  ScoreNote bass{"s0", 0, 48, 0.0};
  EXPECT_EQ(encode(extractOrdered(bass, {}, 0.035)), "");
  EXPECT_EQ(encode(extractPooled(bass, {})), "");
}

TEST(ExtractTest, SingleBassNoteEncodesAsZero) {
  ScoreNote bass{"s0", 0, 48, 0.0};
  auto notes = notesAt({{0.0, 48}});
  EXPECT_EQ(encode(extractOrdered(bass, notes, 0.035)), "0");
  EXPECT_EQ(encode(extractPooled(bass, notes)), "0");
}

TEST(ExtractTest, PooledDeduplicatesAcrossTime) {
  ScoreNote bass{"s0", 0, 48, 0.0};
  // Intervals over time: 0, 4, 7, 12, 4, 0.
  auto notes = notesAt(
      {{0.0, 48}, {0.2, 52}, {0.4, 55}, {0.6, 60}, {0.8, 52}, {1.0, 48}});
  EXPECT_EQ(encode(extractPooled(bass, notes)), "0_4_7_12");
}

TEST(ExtractTest, PooledMatchesFlattenedOrdered) {
  ScoreNote bass{"s0", 0, 48, 0.0};
  // Ordered griff is "0|4_7|0"; pooling the same notes gives "0_4_7".
  auto notes = notesAt({{0.0, 48}, {0.5, 52}, {0.5, 55}, {1.0, 48}});
  EXPECT_EQ(encode(extractOrdered(bass, notes, 0.035)), "0|4_7|0");
  EXPECT_EQ(encode(extractPooled(bass, notes)), "0_4_7");
}

TEST(ExtractTest, NegativeIntervalsAllowed) {
  ScoreNote bass{"s0", 0, 48, 0.0};
  auto notes = notesAt({{0.0, 36}, {0.0, 48}});
  EXPECT_EQ(encode(extractOrdered(bass, notes, 0.035)), "-12_0");
}

// ---------------------------------------------------------------------------
// Encoding, decoding, classification
// ---------------------------------------------------------------------------

TEST(EncodeDecodeTest, EncodesKnownShapes) {
  EXPECT_EQ(encode(OrderedGriff{{{0}, {4, 7, 12}}}), "0|4_7_12");
  EXPECT_EQ(encode(OrderedGriff{{{-12, 0}}}), "-12_0");
  EXPECT_EQ(encode(OrderedGriff{}), "");
  EXPECT_EQ(encode(PooledGriff{{0, 4, 7}}), "0_4_7");
}

TEST(EncodeDecodeTest, DecodeInvertsEncode) {
  OrderedGriff griff{{{0}, {-3, 4, 7}, {12}}};
  EXPECT_EQ(decode(encode(griff)), griff);
  EXPECT_EQ(decode(""), OrderedGriff{});
}

TEST(EncodeDecodeTest, RandomRoundTrips) {
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    OrderedGriff griff = randomGriff(rng);
    OrderedGriff back = decode(encode(griff));
    EXPECT_EQ(back, griff);
  }
}

TEST(EncodeDecodeTest, EncodeRejectsNonCanonicalGriffs) {
  EXPECT_THROW(encode(OrderedGriff{{{}}}), std::invalid_argument);
  EXPECT_THROW(encode(OrderedGriff{{{7, 4}}}), std::invalid_argument);
  EXPECT_THROW(encode(OrderedGriff{{{4, 4}}}), std::invalid_argument);
  EXPECT_THROW(encode(PooledGriff{{3, 2}}), std::invalid_argument);
  EXPECT_FALSE(isCanonical(OrderedGriff{{{1, 1}}}));
  EXPECT_TRUE(isCanonical(OrderedGriff{{{-1, 1}}}));
}

TEST(EncodeDecodeTest, DecodeRejectsMalformedText) {
  for (const char* bad : {"0|", "|0", "_", "4__5", "a", "1|2_", "-", "0 4", "4|_"}) {
    EXPECT_THROW(decode(bad), ParseError) << bad;
  }
}

TEST(EncodeDecodeTest, DecodeRejectsNonCanonicalTokens) {
  for (const char* bad : {"-0", "01", "1_01", "7_4", "4_4", "00"}) {
    EXPECT_THROW(decode(bad), ParseError) << bad;
  }
}

TEST(ClassifyTest, ThreeClasses) {
  EXPECT_EQ(classify(""), GriffClass::kEmpty);
  EXPECT_EQ(classify("0"), GriffClass::kBassOnly);
  EXPECT_EQ(classify("0_12"), GriffClass::kHarmonic);
  EXPECT_EQ(classify("0|0"), GriffClass::kHarmonic);
  EXPECT_EQ(classify("4"), GriffClass::kHarmonic);
  EXPECT_STREQ(toString(GriffClass::kBassOnly), "bass_only");
  EXPECT_STREQ(toString(GriffClass::kEmpty), "empty");
  EXPECT_STREQ(toString(GriffClass::kHarmonic), "harmonic");
}

// ---------------------------------------------------------------------------
// Whole-performance extraction
// ---------------------------------------------------------------------------

TEST(ExtractAllTest, RecoversSynthesizedPlan) {
  Score score = makeScore("x", {43, 45, 47});
  std::vector<OrderedGriff> plan = {decode("0|4_7"), decode("0"), decode("-12_0|3")};
  SynthesisResult synth = synthesize(score, plan, {1.0, 0.1});
  std::vector<GriffRow> rows = extractAll(score, synth.performance, synth.alignment,
                                          0.035, Representation::kOrdered);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].griff, "0|4_7");
  EXPECT_EQ(rows[1].griff, "0");
  EXPECT_EQ(rows[2].griff, "-12_0|3");
  EXPECT_EQ(rows[0].score_note_id, "s0");
}

TEST(ExtractAllTest, UnalignedScoreNotesGetEmptyGriff) {
  Score score = makeScore("x", {43, 45});
  Performance perf;
  PerformanceNote n;
  n.id = "p0";
  n.onset_s = 0.0;
  n.offset_s = 0.1;
  n.pitch = 43;
  n.velocity = 64;
  perf.notes.push_back(n);
  Alignment alignment;
  alignment.score_id = "x";
  alignment.pairs = {{"s0", "p0"}};
  std::vector<GriffRow> rows =
      extractAll(score, perf, alignment, 0.035, Representation::kOrdered);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].griff, "0");
  EXPECT_EQ(rows[1].griff, "");
}

TEST(ExtractAllTest, ThrowsValidationErrorOnBadTriple) {
  Score score = makeScore("x", {43});
  Performance perf;
  Alignment alignment;
  alignment.score_id = "x";
  alignment.pairs = {{"s0", "ghost"}};
  EXPECT_THROW(extractAll(score, perf, alignment, 0.035, Representation::kOrdered),
               ValidationError);
}

TEST(ExtractAllTest, HugeWindowMakesOrderedMatchPooled) {
  std::mt19937 rng(31);
  for (int round = 0; round < 20; ++round) {
    Score score = randomScore(rng, "x", 3, 8);
    std::vector<OrderedGriff> plan = randomPlan(rng, score.notes.size());
    SynthesisResult synth = synthesize(score, plan, {2.0, 0.1});
    std::vector<GriffRow> ordered = extractAll(score, synth.performance,
                                               synth.alignment, 1e9,
                                               Representation::kOrdered);
    std::vector<GriffRow> pooled = extractAll(score, synth.performance,
                                              synth.alignment, 0.035,
                                              Representation::kPooled);
    for (size_t i = 0; i < ordered.size(); ++i) {
      EXPECT_EQ(ordered[i].griff, pooled[i].griff);
    }
  }
}

// ---------------------------------------------------------------------------
// Representation properties (small editions; the acceptance suite scales up)
// ---------------------------------------------------------------------------

TEST(GriffPropertyTest, TranspositionInvariance) {
  std::mt19937 rng(37);
  for (int round = 0; round < 100; ++round) {
    ScoreNote bass{"s0", 0, 60, 0.0};
    OrderedGriff plan = randomGriff(rng, {1, 3, 1, 4, -12, 12});
    Score score = makeScore("x", {60});
    SynthesisResult synth = synthesize(score, {plan}, {1.0, 0.05});

    int shift = std::uniform_int_distribution<int>(-10, 10)(rng);
    ScoreNote shifted_bass{"s0", 0, 60 + shift, 0.0};
    std::vector<PerformanceNote> shifted_notes = synth.performance.notes;
    for (PerformanceNote& n : shifted_notes) n.pitch += shift;

    EXPECT_EQ(encode(extractOrdered(bass, synth.performance.notes, 0.035)),
              encode(extractOrdered(shifted_bass, shifted_notes, 0.035)));
    EXPECT_EQ(encode(extractPooled(bass, synth.performance.notes)),
              encode(extractPooled(shifted_bass, shifted_notes)));
  }
}

TEST(GriffPropertyTest, PooledEqualsSortedDedupedFlattenOfOrdered) {
  std::mt19937 rng(41);
  for (int round = 0; round < 100; ++round) {
    ScoreNote bass{"s0", 0, 60, 0.0};
    Score score = makeScore("x", {60});
    OrderedGriff plan = randomGriff(rng);
    SynthesisResult synth = synthesize(score, {plan}, {4.0, 0.2});

    OrderedGriff ordered = extractOrdered(bass, synth.performance.notes, 0.035);
    std::set<int> flattened;
    for (const auto& vec : ordered.vectors) flattened.insert(vec.begin(), vec.end());
    PooledGriff pooled = extractPooled(bass, synth.performance.notes);
    EXPECT_EQ(pooled.intervals, std::vector<int>(flattened.begin(), flattened.end()));
  }
}

TEST(GriffPropertyTest, VectorCountDoesNotIncreaseWithWindow) {
  std::mt19937 rng(43);
  for (int round = 0; round < 100; ++round) {
    std::vector<OnsetPitch> notes;
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int i = 0; i < n; ++i) {
      notes.push_back({std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                       std::uniform_int_distribution<int>(40, 80)(rng)});
    }
    double w1 = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    double w2 = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    if (w1 > w2) std::swap(w1, w2);
    EXPECT_GE(groupOnsets(notes, w1).size(), groupOnsets(notes, w2).size());
  }
}

}  // namespace
}  // namespace griff
