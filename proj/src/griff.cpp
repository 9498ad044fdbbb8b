#include "griff/griff.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace griff {

namespace {

void appendInterval(std::string& out, int interval) {
  out += std::to_string(interval);
}

int parseIntervalToken(const std::string& token) {
  if (token.empty()) {
    throw ParseError("malformed griff string: empty interval token");
  }
  size_t start = token[0] == '-' ? 1 : 0;
  if (start == token.size()) {
    throw ParseError("malformed griff string: bare sign");
  }
  for (size_t i = start; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') {
      throw ParseError("malformed griff string: invalid character in '" + token + "'");
    }
  }
  if (token[start] == '0' && token.size() - start > 1) {
    throw ParseError("malformed griff string: leading zero in '" + token + "'");
  }
  if (start == 1 && token == "-0") {
    throw ParseError("malformed griff string: negative zero");
  }
  errno = 0;
  long value = std::strtol(token.c_str(), nullptr, 10);
  if (errno != 0 || value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max()) {
    throw ParseError("malformed griff string: interval '" + token + "' out of range");
  }
  return static_cast<int>(value);
}

std::vector<std::string> splitOn(const std::string& text, char sep) {
  std::vector<std::string> parts;
  size_t begin = 0;
  while (true) {
    size_t end = text.find(sep, begin);
    if (end == std::string::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
}

bool isCanonicalVector(const std::vector<int>& vec) {
  if (vec.empty()) return false;
  for (size_t i = 1; i < vec.size(); ++i) {
    if (vec[i] <= vec[i - 1]) return false;
  }
  return true;
}

}  // namespace

QuantizationThreshold::QuantizationThreshold(double w) : window_s(w) {
  if (std::isnan(w) || w < 0.0) {
    throw std::invalid_argument("onset window must be non-negative");
  }
}

const char* toString(GriffClass c) {
  switch (c) {
    case GriffClass::kEmpty:
      return "empty";
    case GriffClass::kBassOnly:
      return "bass_only";
    case GriffClass::kHarmonic:
      return "harmonic";
  }
  return "harmonic";
}

std::vector<std::vector<int>> groupOnsets(std::vector<OnsetPitch> notes,
                                          QuantizationThreshold window) {
  std::sort(notes.begin(), notes.end(), [](const OnsetPitch& a, const OnsetPitch& b) {
    if (a.onset_s != b.onset_s) return a.onset_s < b.onset_s;
    return a.pitch < b.pitch;
  });

  std::vector<std::vector<int>> vectors;
  size_t i = 0;
  while (i < notes.size()) {
    double anchor = notes[i].onset_s;
    std::vector<int> pitches;
    size_t j = i;
    while (j < notes.size() &&
           (notes[j].onset_s == anchor || notes[j].onset_s < anchor + window.window_s)) {
      pitches.push_back(notes[j].pitch);
      ++j;
    }
    std::sort(pitches.begin(), pitches.end());
    pitches.erase(std::unique(pitches.begin(), pitches.end()), pitches.end());
    vectors.push_back(std::move(pitches));
    i = j;
  }
  return vectors;
}

OrderedGriff extractOrdered(const ScoreNote& score_note,
                            const std::vector<PerformanceNote>& notes,
                            QuantizationThreshold window) {
  std::vector<OnsetPitch> onsets;
  onsets.reserve(notes.size());
  for (const PerformanceNote& n : notes) {
    onsets.push_back({n.onset_s, n.pitch});
  }
  OrderedGriff griff;
  griff.vectors = groupOnsets(std::move(onsets), window);
  for (std::vector<int>& vec : griff.vectors) {
    for (int& pitch : vec) {
      pitch -= score_note.pitch;
    }
    // Subtracting a constant keeps the vector sorted and duplicate-free.
  }
  return griff;
}

PooledGriff extractPooled(const ScoreNote& score_note,
                          const std::vector<PerformanceNote>& notes) {
  std::set<int> intervals;
  for (const PerformanceNote& n : notes) {
    intervals.insert(n.pitch - score_note.pitch);
  }
  return {std::vector<int>(intervals.begin(), intervals.end())};
}

bool isCanonical(const OrderedGriff& griff) {
  for (const std::vector<int>& vec : griff.vectors) {
    if (!isCanonicalVector(vec)) return false;
  }
  return true;
}

GriffString encode(const OrderedGriff& griff) {
  if (!isCanonical(griff)) {
    throw std::invalid_argument(
        "griff is not canonical: vectors must be nonempty and strictly ascending");
  }
  std::string out;
  for (size_t v = 0; v < griff.vectors.size(); ++v) {
    if (v > 0) out += '|';
    const std::vector<int>& vec = griff.vectors[v];
    for (size_t i = 0; i < vec.size(); ++i) {
      if (i > 0) out += '_';
      appendInterval(out, vec[i]);
    }
  }
  return out;
}

GriffString encode(const PooledGriff& griff) {
  if (griff.intervals.empty()) return "";
  if (!isCanonicalVector(griff.intervals)) {
    throw std::invalid_argument(
        "pooled griff is not canonical: intervals must be strictly ascending");
  }
  std::string out;
  for (size_t i = 0; i < griff.intervals.size(); ++i) {
    if (i > 0) out += '_';
    appendInterval(out, griff.intervals[i]);
  }
  return out;
}

OrderedGriff decode(const GriffString& text) {
  OrderedGriff griff;
  if (text.empty()) return griff;
  for (const std::string& vector_text : splitOn(text, '|')) {
    if (vector_text.empty()) {
      throw ParseError("malformed griff string: empty onset vector");
    }
    std::vector<int> vec;
    for (const std::string& token : splitOn(vector_text, '_')) {
      vec.push_back(parseIntervalToken(token));
    }
    if (!isCanonicalVector(vec)) {
      throw ParseError("malformed griff string: intervals in '" + vector_text +
                       "' are not strictly ascending");
    }
    griff.vectors.push_back(std::move(vec));
  }
  return griff;
}

GriffClass classify(const GriffString& griff) {
  if (griff.empty()) return GriffClass::kEmpty;
  if (griff == "0") return GriffClass::kBassOnly;
  return GriffClass::kHarmonic;
}

std::vector<GriffRow> extractAll(const Score& score, const Performance& performance,
                                 const Alignment& alignment,
                                 QuantizationThreshold window, Representation rep) {
  std::vector<std::string> violations = validateAlignment(alignment, score, performance);
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }

  std::unordered_map<std::string, const PerformanceNote*> by_id;
  by_id.reserve(performance.notes.size());
  for (const PerformanceNote& n : performance.notes) {
    by_id.emplace(n.id, &n);
  }

  std::unordered_map<std::string, std::vector<PerformanceNote>> per_score_note;
  for (const auto& [sid, pid] : alignment.pairs) {
    per_score_note[sid].push_back(*by_id.at(pid));
  }

  std::vector<GriffRow> rows;
  rows.reserve(score.notes.size());
  static const std::vector<PerformanceNote> kNone;
  for (const ScoreNote& sn : score.notes) {
    auto it = per_score_note.find(sn.id);
    const std::vector<PerformanceNote>& notes = it == per_score_note.end() ? kNone : it->second;
    GriffString text = rep == Representation::kOrdered
                           ? encode(extractOrdered(sn, notes, window))
                           : encode(extractPooled(sn, notes));
    rows.push_back({sn.id, std::move(text)});
  }
  return rows;
}

}  // namespace griff
