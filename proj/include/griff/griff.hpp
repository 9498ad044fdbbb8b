#pragma once

#include <string>
#include <vector>

#include "griff/common.hpp"
#include "griff/midi.hpp"
#include "griff/score.hpp"

namespace griff {

/// Default onset window: notes within 35 ms of a vector's anchor sound
/// "together" for figure-realization purposes.
constexpr double kDefaultWindowS = 0.035;

/// Validated onset window in seconds. Converts implicitly from double so
/// call sites can pass plain numbers; negative or non-finite values throw.
struct QuantizationThreshold {
  double window_s = kDefaultWindowS;

  QuantizationThreshold() = default;
  QuantizationThreshold(double w);  // NOLINT(google-explicit-constructor)
};

/// Time-ordered onset vectors of chromatic intervals from the score note.
/// Every vector is nonempty, strictly ascending, and duplicate-free.
struct OrderedGriff {
  std::vector<std::vector<int>> vectors;

  friend bool operator==(const OrderedGriff&, const OrderedGriff&) = default;
};

/// The set of intervals sounded anywhere over the score note, ascending.
struct PooledGriff {
  std::vector<int> intervals;

  friend bool operator==(const PooledGriff&, const PooledGriff&) = default;
};

/// Canonical string form. Grammar:
///   griff  := "" | vector ("|" vector)*
///   vector := int ("_" int)*
///   int    := "-"? digit+        (no leading zeros, no "-0")
/// Ints within a vector are strictly ascending.
using GriffString = std::string;

enum class GriffClass { kEmpty, kBassOnly, kHarmonic };

const char* toString(GriffClass c);

enum class Representation { kOrdered, kPooled };

/// An onset/pitch pair, the only inputs onset grouping looks at.
struct OnsetPitch {
  double onset_s = 0.0;
  int pitch = 0;
};

/// Groups notes into onset vectors. A vector is anchored at its earliest
/// onset; a note joins while its onset lies inside [anchor, anchor + window)
/// or coincides exactly with the anchor (so window 0 groups simultaneous
/// notes). Pitches within a vector are sorted and deduplicated.
std::vector<std::vector<int>> groupOnsets(std::vector<OnsetPitch> notes,
                                          QuantizationThreshold window);

/// Ordered griff of the performance notes aligned to one score note.
OrderedGriff extractOrdered(const ScoreNote& score_note,
                            const std::vector<PerformanceNote>& notes,
                            QuantizationThreshold window);

/// Pooled griff: all distinct intervals over the score note, ascending.
PooledGriff extractPooled(const ScoreNote& score_note,
                          const std::vector<PerformanceNote>& notes);

/// True when every vector is nonempty, strictly ascending, duplicate-free.
bool isCanonical(const OrderedGriff& griff);

/// Encodes to the canonical string. Throws std::invalid_argument when the
/// griff is not canonical.
GriffString encode(const OrderedGriff& griff);
GriffString encode(const PooledGriff& griff);

/// Inverse of encode. Rejects non-canonical text (bad tokens, leading
/// zeros, "-0", empty vectors, unsorted or duplicate intervals).
OrderedGriff decode(const GriffString& text);

/// "" is empty, exactly "0" is bass-only, anything else is harmonic.
GriffClass classify(const GriffString& griff);

/// One extracted griff per score note, in score order.
struct GriffRow {
  std::string score_note_id;
  GriffString griff;

  friend bool operator==(const GriffRow&, const GriffRow&) = default;
};

/// Extracts a griff for every score note from an aligned performance.
/// Validates the triple first and throws ValidationError on any violation.
std::vector<GriffRow> extractAll(const Score& score, const Performance& performance,
                                 const Alignment& alignment,
                                 QuantizationThreshold window, Representation rep);

}  // namespace griff
