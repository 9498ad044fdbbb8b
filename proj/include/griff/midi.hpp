#pragma once

#include <span>
#include <string>
#include <vector>

#include "griff/common.hpp"

namespace griff {

/// One performed note in wall-clock seconds. offset_s is always > onset_s.
struct PerformanceNote {
  std::string id;
  double onset_s = 0.0;
  double offset_s = 0.0;
  int pitch = 0;
  int velocity = 0;
  int track = 0;
  int channel = 0;

  friend bool operator==(const PerformanceNote&, const PerformanceNote&) = default;
};

struct PerformanceMeta {
  std::string player_id;
  std::string score_id;
  int take = 0;

  friend bool operator==(const PerformanceMeta&, const PerformanceMeta&) = default;
};

/// A parsed performance. Notes are sorted by (onset_s, pitch) and carry
/// unique ids of the form "p<n>" assigned after sorting.
struct Performance {
  PerformanceMeta meta;
  std::vector<PerformanceNote> notes;

  /// "<player>_<score>_<take>", or "" when the meta is unset.
  std::string performanceId() const;

  friend bool operator==(const Performance&, const Performance&) = default;
};

struct TempoChange {
  long tick = 0;
  long microseconds_per_quarter = 500000;

  friend bool operator==(const TempoChange&, const TempoChange&) = default;
};

/// Piecewise-constant tempo over absolute ticks. A change at tick 0 with the
/// SMF default tempo (500000 us per quarter) is implied when none is given.
class TempoMap {
 public:
  TempoMap() : TempoMap(480, {}) {}
  TempoMap(int division, std::vector<TempoChange> changes);

  int division() const { return division_; }
  const std::vector<TempoChange>& changes() const { return changes_; }

  /// Integrates the tempo segments up to `tick`. Monotone in tick.
  double ticksToSeconds(long tick) const;

 private:
  int division_ = 480;
  std::vector<TempoChange> changes_;
  std::vector<double> seconds_at_change_;
};

/// A note-on/note-off pair still in tick time, before tempo integration.
struct RawNote {
  long onset_tick = 0;
  long offset_tick = 0;
  int pitch = 0;
  int velocity = 0;
  int track = 0;
  int channel = 0;

  friend bool operator==(const RawNote&, const RawNote&) = default;
};

/// Parse result of a Standard MIDI File before tempo integration.
struct RawSmf {
  int format = 0;
  int division = 480;
  int track_count = 0;
  std::vector<RawNote> notes;          // in pairing order, per track
  std::vector<TempoChange> tempo_changes;  // merged across tracks, sorted
};

/// Parses an SMF (format 0 or 1). Non-fatal oddities (orphan note-offs,
/// unknown chunks, unclosed notes) go to `warnings`; structural problems
/// throw ParseError. SMPTE division and format 2 are rejected.
RawSmf parseSmfRaw(std::span<const unsigned char> bytes, Warnings* warnings = nullptr);

/// Parses an SMF and integrates the tempo map into seconds. The returned
/// performance has empty meta; callers fill it from the filename or manifest.
Performance parseSmf(std::span<const unsigned char> bytes, Warnings* warnings = nullptr);

/// Derives meta from a "<player>_<score>_<take>" file stem. Returns an empty
/// meta when the stem does not match the convention.
PerformanceMeta metaFromFilename(const std::string& path);

}  // namespace griff
