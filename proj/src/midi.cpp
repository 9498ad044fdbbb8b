#include "griff/midi.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace griff {

namespace {

constexpr long kDefaultUsPerQuarter = 500000;

std::string hexByte(int value) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%02x", value & 0xFF);
  return buf;
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> data) : data_(data) {}

  bool atEnd() const { return pos_ >= data_.size(); }
  size_t remaining() const { return data_.size() - pos_; }

  unsigned char u8() {
    require(1);
    return data_[pos_++];
  }

  unsigned char peek() const {
    if (atEnd()) throw ParseError("unexpected end of data");
    return data_[pos_];
  }

  uint16_t u16() {
    require(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  uint32_t u32() {
    require(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 4;
    return v;
  }

  // Variable-length quantity, standard MIDI files allow at most four bytes.
  uint32_t vlq() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned char b = u8();
      v = v << 7 | (b & 0x7F);
      if ((b & 0x80) == 0) return v;
    }
    throw ParseError("variable-length quantity longer than four bytes");
  }

  // A data byte must have its high bit clear.
  int dataByte() {
    int b = u8();
    if (b & 0x80) {
      throw ParseError("malformed event data: expected data byte, got " + hexByte(b));
    }
    return b;
  }

  std::string fourCc() {
    require(4);
    std::string id(reinterpret_cast<const char*>(data_.data() + pos_), 4);
    pos_ += 4;
    return id;
  }

  std::span<const unsigned char> take(size_t n) {
    require(n);
    auto part = data_.subspan(pos_, n);
    pos_ += n;
    return part;
  }

  void skip(size_t n) {
    require(n);
    pos_ += n;
  }

 private:
  void require(size_t n) const {
    if (remaining() < n) throw ParseError("unexpected end of data");
  }

  std::span<const unsigned char> data_;
  size_t pos_ = 0;
};

struct ActiveNote {
  bool on = false;
  long onset_tick = 0;
  int velocity = 0;
};

// Zero-length pairs would break the offset_s > onset_s invariant downstream,
// so they are stretched by one tick.
long floorOffset(long onset_tick, long offset_tick) {
  return offset_tick > onset_tick ? offset_tick : onset_tick + 1;
}

void parseTrack(std::span<const unsigned char> data, int track,
                std::vector<RawNote>* notes, std::vector<TempoChange>* tempo,
                Warnings* warnings) {
  ByteReader r(data);
  long tick = 0;
  int running_status = 0;
  std::vector<ActiveNote> active(16 * 128);
  auto slot = [&active](int channel, int pitch) -> ActiveNote& {
    return active[channel * 128 + pitch];
  };

  bool saw_end = false;
  while (!r.atEnd()) {
    tick += r.vlq();
    int status = r.peek();
    if (status < 0x80) {
      if (running_status == 0) {
        throw ParseError("data byte " + hexByte(status) + " without running status");
      }
      status = running_status;
    } else {
      r.u8();
    }

    if (status == 0xFF) {
      running_status = 0;
      int type = r.u8();
      uint32_t length = r.vlq();
      std::span<const unsigned char> payload = r.take(length);
      if (type == 0x2F) {
        saw_end = true;
        if (!r.atEnd()) {
          warn(warnings, "track " + std::to_string(track) +
                             ": bytes after end-of-track ignored");
        }
        break;
      }
      if (type == 0x51) {
        if (length != 3) {
          warn(warnings, "track " + std::to_string(track) +
                             ": tempo event with length " + std::to_string(length) +
                             " skipped");
        } else {
          long us = static_cast<long>(payload[0]) << 16 |
                    static_cast<long>(payload[1]) << 8 | payload[2];
          if (us <= 0) {
            warn(warnings, "track " + std::to_string(track) +
                               ": non-positive tempo skipped");
          } else {
            tempo->push_back({tick, us});
          }
        }
      }
      // All other meta events carry no timing information we use.
    } else if (status == 0xF0 || status == 0xF7) {
      running_status = 0;
      r.skip(r.vlq());
    } else if (status >= 0x80 && status <= 0xEF) {
      running_status = status;
      int kind = status >> 4;
      int channel = status & 0x0F;
      switch (kind) {
        case 0x8: {
          int pitch = r.dataByte();
          r.dataByte();  // release velocity
          ActiveNote& a = slot(channel, pitch);
          if (!a.on) {
            warn(warnings, "track " + std::to_string(track) + ": note-off for pitch " +
                               std::to_string(pitch) + " with no matching note-on skipped");
            break;
          }
          notes->push_back({a.onset_tick, floorOffset(a.onset_tick, tick), pitch,
                            a.velocity, track, channel});
          a.on = false;
          break;
        }
        case 0x9: {
          int pitch = r.dataByte();
          int velocity = r.dataByte();
          ActiveNote& a = slot(channel, pitch);
          if (velocity == 0) {
            if (!a.on) {
              warn(warnings, "track " + std::to_string(track) + ": note-off for pitch " +
                                 std::to_string(pitch) + " with no matching note-on skipped");
              break;
            }
            notes->push_back({a.onset_tick, floorOffset(a.onset_tick, tick), pitch,
                              a.velocity, track, channel});
            a.on = false;
            break;
          }
          if (a.on) {
            // Overlapping note-on for the same key: the later event wins and
            // the earlier note is closed here.
            notes->push_back({a.onset_tick, floorOffset(a.onset_tick, tick), pitch,
                              a.velocity, track, channel});
            warn(warnings, "track " + std::to_string(track) +
                               ": overlapping note-on for pitch " + std::to_string(pitch) +
                               " closed the earlier note");
          }
          a = {true, tick, velocity};
          break;
        }
        case 0xA:
        case 0xB:
        case 0xE:
          r.dataByte();
          r.dataByte();
          break;
        case 0xC:
        case 0xD:
          r.dataByte();
          break;
        default:
          break;
      }
    } else {
      throw ParseError("unexpected status byte " + hexByte(status));
    }
  }

  if (!saw_end) {
    warn(warnings, "track " + std::to_string(track) + ": missing end-of-track event");
  }

  for (int channel = 0; channel < 16; ++channel) {
    for (int pitch = 0; pitch < 128; ++pitch) {
      const ActiveNote& a = slot(channel, pitch);
      if (!a.on) continue;
      warn(warnings, "track " + std::to_string(track) + ": note-on for pitch " +
                         std::to_string(pitch) + " never closed; ended at track end");
      notes->push_back({a.onset_tick, floorOffset(a.onset_tick, tick), pitch,
                        a.velocity, track, channel});
    }
  }
}

}  // namespace

TempoMap::TempoMap(int division, std::vector<TempoChange> changes)
    : division_(division), changes_(std::move(changes)) {
  if (division_ <= 0) {
    throw std::invalid_argument("ticks per quarter must be positive");
  }
  if (changes_.empty() || changes_.front().tick > 0) {
    changes_.insert(changes_.begin(), {0, kDefaultUsPerQuarter});
  }
  long prev_tick = -1;
  for (const TempoChange& c : changes_) {
    if (c.tick < 0) throw std::invalid_argument("tempo change at negative tick");
    if (c.tick <= prev_tick) {
      throw std::invalid_argument("tempo changes must be strictly ascending in tick");
    }
    if (c.microseconds_per_quarter <= 0) {
      throw std::invalid_argument("tempo must be positive");
    }
    prev_tick = c.tick;
  }
  seconds_at_change_.resize(changes_.size());
  seconds_at_change_[0] = 0.0;
  for (size_t i = 1; i < changes_.size(); ++i) {
    const TempoChange& prev = changes_[i - 1];
    double span_s = static_cast<double>(changes_[i].tick - prev.tick) *
                    static_cast<double>(prev.microseconds_per_quarter) /
                    (static_cast<double>(division_) * 1e6);
    seconds_at_change_[i] = seconds_at_change_[i - 1] + span_s;
  }
}

double TempoMap::ticksToSeconds(long tick) const {
  if (tick < 0) throw std::invalid_argument("tick must be non-negative");
  auto it = std::upper_bound(
      changes_.begin(), changes_.end(), tick,
      [](long t, const TempoChange& c) { return t < c.tick; });
  size_t idx = static_cast<size_t>(it - changes_.begin()) - 1;
  const TempoChange& c = changes_[idx];
  return seconds_at_change_[idx] +
         static_cast<double>(tick - c.tick) *
             static_cast<double>(c.microseconds_per_quarter) /
             (static_cast<double>(division_) * 1e6);
}

std::string Performance::performanceId() const {
  if (meta.player_id.empty() && meta.score_id.empty()) return "";
  return meta.player_id + "_" + meta.score_id + "_" + std::to_string(meta.take);
}

RawSmf parseSmfRaw(std::span<const unsigned char> bytes, Warnings* warnings) {
  ByteReader r(bytes);

  std::string id;
  try {
    id = r.fourCc();
  } catch (const ParseError&) {
    throw ParseError("malformed header chunk: file shorter than a chunk header");
  }
  if (id != "MThd") {
    throw ParseError("malformed header chunk: expected MThd, got '" + id + "'");
  }
  uint32_t header_len = r.u32();
  if (header_len < 6) {
    throw ParseError("malformed header chunk: length " + std::to_string(header_len));
  }
  RawSmf out;
  out.format = r.u16();
  int declared_tracks = r.u16();
  uint16_t division_raw = r.u16();
  if (header_len > 6) {
    if (r.remaining() < header_len - 6) {
      throw ParseError("malformed header chunk: declared length exceeds file size");
    }
    r.skip(header_len - 6);
    warn(warnings, "header chunk longer than six bytes; extra bytes skipped");
  }
  if (out.format != 0 && out.format != 1) {
    throw ParseError("unsupported SMF format " + std::to_string(out.format));
  }
  if (division_raw & 0x8000) {
    throw ParseError("SMPTE division is not supported");
  }
  if (division_raw == 0) {
    throw ParseError("ticks per quarter must be positive");
  }
  out.division = division_raw;

  int track_index = 0;
  while (!r.atEnd()) {
    if (r.remaining() < 8) {
      warn(warnings, "trailing bytes after last chunk ignored");
      break;
    }
    std::string chunk_id = r.fourCc();
    uint32_t length = r.u32();
    if (length > r.remaining()) {
      if (chunk_id == "MTrk") throw ParseError("truncated track chunk");
      throw ParseError("truncated chunk '" + chunk_id + "'");
    }
    std::span<const unsigned char> chunk = r.take(length);
    if (chunk_id != "MTrk") {
      warn(warnings, "unknown chunk '" + chunk_id + "' skipped");
      continue;
    }
    if (out.format == 0 && track_index == 1) {
      warn(warnings, "format 0 file contains more than one track");
    }
    parseTrack(chunk, track_index, &out.notes, &out.tempo_changes, warnings);
    ++track_index;
  }
  if (track_index != declared_tracks) {
    warn(warnings, "header declares " + std::to_string(declared_tracks) +
                       " tracks, found " + std::to_string(track_index));
  }
  out.track_count = track_index;

  // Tempo events merged across tracks; on a tick collision the event that
  // appears last (track order, then position) wins.
  std::stable_sort(out.tempo_changes.begin(), out.tempo_changes.end(),
                   [](const TempoChange& a, const TempoChange& b) {
                     return a.tick < b.tick;
                   });
  std::vector<TempoChange> merged;
  for (const TempoChange& c : out.tempo_changes) {
    if (!merged.empty() && merged.back().tick == c.tick) {
      merged.back() = c;
    } else {
      merged.push_back(c);
    }
  }
  out.tempo_changes = std::move(merged);
  return out;
}

Performance parseSmf(std::span<const unsigned char> bytes, Warnings* warnings) {
  RawSmf raw = parseSmfRaw(bytes, warnings);
  TempoMap map(raw.division, raw.tempo_changes);

  Performance perf;
  perf.notes.reserve(raw.notes.size());
  for (const RawNote& n : raw.notes) {
    PerformanceNote note;
    note.onset_s = map.ticksToSeconds(n.onset_tick);
    note.offset_s = map.ticksToSeconds(n.offset_tick);
    note.pitch = n.pitch;
    note.velocity = n.velocity;
    note.track = n.track;
    note.channel = n.channel;
    perf.notes.push_back(std::move(note));
  }
  std::stable_sort(perf.notes.begin(), perf.notes.end(),
                   [](const PerformanceNote& a, const PerformanceNote& b) {
                     if (a.onset_s != b.onset_s) return a.onset_s < b.onset_s;
                     return a.pitch < b.pitch;
                   });
  for (size_t i = 0; i < perf.notes.size(); ++i) {
    perf.notes[i].id = "p" + std::to_string(i);
  }
  return perf;
}

PerformanceMeta metaFromFilename(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(stem);
  while (std::getline(in, part, '_')) parts.push_back(part);
  if (parts.size() != 3 || parts[0].empty() || parts[1].empty() || parts[2].empty()) {
    return {};
  }
  for (char c : parts[2]) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return {};
  }
  try {
    return {parts[0], parts[1], std::stoi(parts[2])};
  } catch (const std::exception&) {
    return {};
  }
}

}  // namespace griff
