#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "griff/aligner.hpp"
#include "griff/griff.hpp"
#include "griff/midi.hpp"
#include "griff/score.hpp"

namespace griff::testutil {

// ---------------------------------------------------------------------------
// SMF fixture builder
// ---------------------------------------------------------------------------

/// One raw track event at an absolute tick; bytes start with the status
/// byte (or 0xFF for meta events).
struct SmfEvent {
  long tick = 0;
  std::vector<unsigned char> bytes;
};

SmfEvent noteOnEvent(long tick, int channel, int pitch, int velocity);
SmfEvent noteOffEvent(long tick, int channel, int pitch);
SmfEvent tempoEvent(long tick, long microseconds_per_quarter);

struct SmfBuildOptions {
  bool use_running_status = false;
  bool omit_end_of_track = false;
};

/// Serializes tracks of absolute-tick events into a complete SMF. Events in
/// each track must be ordered by tick.
std::vector<unsigned char> buildSmf(int format, int division,
                                    const std::vector<std::vector<SmfEvent>>& tracks,
                                    const SmfBuildOptions& options = {});

/// Renders a performance back to a format-0 SMF at the default tempo.
/// Onsets must be non-negative; they are rounded to the nearest tick.
std::vector<unsigned char> performanceToSmf(const Performance& performance,
                                            int division = 480);

// ---------------------------------------------------------------------------
// Independent reference reader (cross-check oracle)
// ---------------------------------------------------------------------------

struct RefNoteOn {
  long tick = 0;
  double seconds = 0.0;
  int pitch = 0;
  int velocity = 0;
  int track = 0;
  int channel = 0;
};

/// Minimal second SMF reader, written separately from the library parser:
/// collects note-on events (velocity > 0) and integrates tempo on its own.
std::vector<RefNoteOn> referenceReadNoteOns(const std::vector<unsigned char>& bytes);

// ---------------------------------------------------------------------------
// Filesystem helpers
// ---------------------------------------------------------------------------

/// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void writeFile(const std::string& path, const std::string& content);
void writeFile(const std::string& path, const std::vector<unsigned char>& bytes);

/// Redirects std::cerr into a buffer for the lifetime of the object.
class CerrCapture {
 public:
  CerrCapture();
  ~CerrCapture();
  std::string text() const;

 private:
  std::ostringstream buffer_;
  std::streambuf* saved_;
};

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

struct GriffGenOptions {
  int min_vectors = 1;
  int max_vectors = 4;
  int min_intervals = 1;
  int max_intervals = 5;
  int interval_lo = -24;
  int interval_hi = 24;
};

OrderedGriff randomGriff(std::mt19937& rng, const GriffGenOptions& options = {});

std::vector<OrderedGriff> randomPlan(std::mt19937& rng, size_t size,
                                     const GriffGenOptions& options = {});

/// Score with the given pitches at onsets 0, 1, 2, ... beats.
Score makeScore(const std::string& score_id, const std::vector<int>& pitches);

Score randomScore(std::mt19937& rng, const std::string& score_id, int min_notes,
                  int max_notes, int pitch_lo = 30, int pitch_hi = 90);

}  // namespace griff::testutil
