#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "griff/common.hpp"
#include "griff/midi.hpp"

namespace griff {

/// One bass note of a monophonic score. index is the 0-based ordinal in the
/// bass line; onset_beats is strictly increasing with index.
struct ScoreNote {
  std::string id;
  int index = 0;
  int pitch = 0;
  double onset_beats = 0.0;

  friend bool operator==(const ScoreNote&, const ScoreNote&) = default;
};

struct Score {
  std::string score_id;
  std::vector<ScoreNote> notes;

  friend bool operator==(const Score&, const Score&) = default;
};

/// A many-to-one mapping from performance notes to score notes, plus the
/// performance notes left deliberately unassigned. Each performance note id
/// appears in at most one pair and never both in pairs and unmatched.
struct Alignment {
  std::string score_id;
  std::string performance_id;
  std::set<std::pair<std::string, std::string>> pairs;  // (score id, perf id)
  std::set<std::string> unmatched_performance;

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

/// Loads a score from its JSON form. Notes are sorted by onset; two notes
/// sharing an onset make the score polyphonic and are rejected.
Score loadScoreJson(const std::string& text, Warnings* warnings = nullptr);

/// Loads a score from a monophonic SMF; onsets convert to beats as
/// tick / division. Note ids are "s<index>".
Score loadScoreSmf(std::span<const unsigned char> bytes, const std::string& score_id);

/// Loads a score from a file, detecting SMF by the MThd magic and falling
/// back to JSON. For SMF input the score_id is the file stem.
Score loadScoreFile(const std::string& path, Warnings* warnings = nullptr);

Alignment loadAlignment(const std::string& text, Warnings* warnings = nullptr);
Alignment loadAlignmentFile(const std::string& path, Warnings* warnings = nullptr);

/// Deterministic JSON form: matches sorted by score note id, ids within a
/// match sorted, unmatched sorted. loadAlignment(serializeAlignment(a)) == a.
std::string serializeAlignment(const Alignment& alignment);

/// Checks an alignment against a score and performance. Returns one message
/// per violation; empty means the triple is consistent. The performance_id
/// is only checked when both sides are non-empty.
std::vector<std::string> validateAlignment(const Alignment& alignment,
                                           const Score& score,
                                           const Performance& performance);

}  // namespace griff
