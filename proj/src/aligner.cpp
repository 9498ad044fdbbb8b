#include "griff/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace griff {

Alignment greedyAlign(const Score& score, const Performance& performance,
                      const AlignParams& params) {
  if (score.notes.empty()) {
    throw std::invalid_argument("score has no notes");
  }
  if (performance.notes.empty()) {
    throw std::invalid_argument("performance has no notes");
  }
  if (!(params.max_anchor_skew_s > 0.0)) {
    throw std::invalid_argument("max_anchor_skew_s must be positive");
  }

  const std::vector<PerformanceNote>& notes = performance.notes;
  std::vector<bool> used(notes.size(), false);

  // Anchor selection. Performance notes are already sorted by onset, so the
  // first admissible unused note is the earliest one.
  struct AnchorRef {
    int score_index;
    double onset_s;
  };
  std::vector<AnchorRef> anchors;
  bool have_prev = false;
  double prev_onset = 0.0;
  for (const ScoreNote& sn : score.notes) {
    for (size_t k = 0; k < notes.size(); ++k) {
      if (used[k]) continue;
      const PerformanceNote& n = notes[k];
      if (have_prev) {
        if (n.onset_s < prev_onset) continue;
        if (n.onset_s > prev_onset + params.max_anchor_skew_s) break;
      }
      if (params.anchor_pitch_match && n.pitch != sn.pitch) continue;
      used[k] = true;
      anchors.push_back({sn.index, n.onset_s});
      have_prev = true;
      prev_onset = n.onset_s;
      break;
    }
  }

  if (anchors.empty()) {
    throw UnalignableError("unalignable: no anchors found for score '" +
                           score.score_id + "'");
  }

  // Segment boundaries at midpoints between consecutive anchor onsets; the
  // first segment extends to -inf and the last to +inf. Segment k owns
  // onsets in [boundary[k], boundary[k+1]).
  std::vector<double> boundaries;
  boundaries.reserve(anchors.size() + 1);
  boundaries.push_back(-std::numeric_limits<double>::infinity());
  for (size_t k = 1; k < anchors.size(); ++k) {
    boundaries.push_back((anchors[k - 1].onset_s + anchors[k].onset_s) / 2.0);
  }
  boundaries.push_back(std::numeric_limits<double>::infinity());

  Alignment out;
  out.score_id = score.score_id;
  out.performance_id = performance.performanceId();
  for (const PerformanceNote& n : notes) {
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), n.onset_s);
    size_t segment = static_cast<size_t>(it - boundaries.begin()) - 1;
    if (segment >= anchors.size()) segment = anchors.size() - 1;
    const ScoreNote& owner = score.notes[anchors[segment].score_index];
    out.pairs.emplace(owner.id, n.id);
  }
  return out;
}

SynthesisResult synthesize(const Score& score, const std::vector<OrderedGriff>& plan,
                           const SynthesisTiming& timing) {
  if (plan.size() != score.notes.size()) {
    throw std::invalid_argument("plan must contain one griff per score note");
  }
  if (!(timing.beat_s > 0.0)) {
    throw std::invalid_argument("beat_s must be positive");
  }
  if (timing.spread_s < 0.0) {
    throw std::invalid_argument("spread_s must be non-negative");
  }

  // Durations only have to keep offsets past onsets; griff extraction never
  // reads them.
  double duration = std::max(timing.beat_s / 2.0, 1e-3);

  struct Staged {
    PerformanceNote note;
    int score_index;
  };
  std::vector<Staged> staged;
  for (size_t i = 0; i < score.notes.size(); ++i) {
    const ScoreNote& sn = score.notes[i];
    const OrderedGriff& griff = plan[i];
    if (!isCanonical(griff)) {
      throw std::invalid_argument("plan griff for score note '" + sn.id +
                                  "' is not canonical");
    }
    for (size_t j = 0; j < griff.vectors.size(); ++j) {
      double onset = static_cast<double>(i) * timing.beat_s +
                     static_cast<double>(j) * timing.spread_s;
      for (int interval : griff.vectors[j]) {
        int pitch = sn.pitch + interval;
        if (pitch < 0 || pitch > 127) {
          throw std::invalid_argument("synthesized pitch " + std::to_string(pitch) +
                                      " outside 0..127 for score note '" + sn.id + "'");
        }
        PerformanceNote note;
        note.onset_s = onset;
        note.offset_s = onset + duration;
        note.pitch = pitch;
        note.velocity = 64;
        staged.push_back({std::move(note), static_cast<int>(i)});
      }
    }
  }

  std::stable_sort(staged.begin(), staged.end(), [](const Staged& a, const Staged& b) {
    if (a.note.onset_s != b.note.onset_s) return a.note.onset_s < b.note.onset_s;
    return a.note.pitch < b.note.pitch;
  });

  SynthesisResult result;
  result.performance.meta = {"synth", score.score_id, 0};
  result.alignment.score_id = score.score_id;
  result.alignment.performance_id = result.performance.performanceId();
  for (size_t k = 0; k < staged.size(); ++k) {
    staged[k].note.id = "p" + std::to_string(k);
    result.alignment.pairs.emplace(score.notes[staged[k].score_index].id,
                                   staged[k].note.id);
    result.performance.notes.push_back(std::move(staged[k].note));
  }
  return result;
}

}  // namespace griff
