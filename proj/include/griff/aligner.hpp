#pragma once

#include <vector>

#include "griff/common.hpp"
#include "griff/griff.hpp"
#include "griff/midi.hpp"
#include "griff/score.hpp"

namespace griff {

/// Knobs for the greedy baseline aligner.
///   anchor_pitch_match: anchors must sound the score pitch exactly.
///   max_anchor_skew_s: longest onset gap allowed between consecutive
///     anchors; candidates further out are not considered. Must be > 0.
struct AlignParams {
  bool anchor_pitch_match = true;
  double max_anchor_skew_s = 60.0;
};

/// Greedy anchor-then-segment alignment. Each score note anchors to the
/// earliest unused matching performance note at or after the previous
/// anchor; every performance note is then assigned to the score note whose
/// anchor segment (split at midpoints between consecutive anchor onsets)
/// contains its onset. Leaves unmatched_performance empty and throws
/// UnalignableError when no score note can be anchored at all.
Alignment greedyAlign(const Score& score, const Performance& performance,
                      const AlignParams& params = {});

/// Spacing for synthesized performances: score note i starts at i * beat_s,
/// and the j-th onset vector of its griff sounds at i * beat_s + j * spread_s.
struct SynthesisTiming {
  double beat_s = 0.5;
  double spread_s = 0.1;
};

struct SynthesisResult {
  Performance performance;
  Alignment alignment;
};

/// Renders one griff per score note into a deterministic performance plus
/// the exact alignment that produced it. The plan must contain one canonical
/// griff per score note and every sounded pitch must stay within 0..127.
SynthesisResult synthesize(const Score& score, const std::vector<OrderedGriff>& plan,
                           const SynthesisTiming& timing = {});

}  // namespace griff
