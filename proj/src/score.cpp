#include "griff/score.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace griff {

namespace {

using nlohmann::json;

json parseJsonText(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

void warnUnknownKeys(const json& object, std::initializer_list<const char*> known,
                     const char* where, Warnings* warnings) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    bool is_known = false;
    for (const char* k : known) {
      if (key == k) {
        is_known = true;
        break;
      }
    }
    if (!is_known) {
      warn(warnings, std::string("unknown field '") + key + "' in " + where + " ignored");
    }
  }
}

Score finalizeScore(std::string score_id, std::vector<std::pair<double, ScoreNote>> notes) {
  std::stable_sort(notes.begin(), notes.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Score score;
  score.score_id = std::move(score_id);
  std::unordered_set<std::string> seen_ids;
  for (size_t i = 0; i < notes.size(); ++i) {
    if (i > 0 && notes[i].first == notes[i - 1].first) {
      throw ParseError("polyphonic score: two notes share onset " +
                       formatFixed(notes[i].first, 6) + " beats");
    }
    ScoreNote note = std::move(notes[i].second);
    note.index = static_cast<int>(i);
    note.onset_beats = notes[i].first;
    if (!seen_ids.insert(note.id).second) {
      throw ParseError("duplicate score note id '" + note.id + "'");
    }
    score.notes.push_back(std::move(note));
  }
  return score;
}

}  // namespace

Score loadScoreJson(const std::string& text, Warnings* warnings) {
  json doc = parseJsonText(text, "score");
  if (!doc.is_object()) throw ParseError("score JSON must be an object");
  warnUnknownKeys(doc, {"score_id", "notes"}, "score", warnings);
  if (!doc.contains("score_id") || !doc["score_id"].is_string()) {
    throw ParseError("score JSON requires a string 'score_id'");
  }
  if (!doc.contains("notes") || !doc["notes"].is_array()) {
    throw ParseError("score JSON requires an array 'notes'");
  }

  std::vector<std::pair<double, ScoreNote>> staged;
  for (const json& item : doc["notes"]) {
    if (!item.is_object()) throw ParseError("score note must be an object");
    warnUnknownKeys(item, {"id", "pitch", "onset_beats"}, "score note", warnings);
    if (!item.contains("id") || !item["id"].is_string()) {
      throw ParseError("score note requires a string 'id'");
    }
    if (!item.contains("pitch") || !item["pitch"].is_number_integer()) {
      throw ParseError("score note requires an integer 'pitch'");
    }
    if (!item.contains("onset_beats") || !item["onset_beats"].is_number()) {
      throw ParseError("score note requires a numeric 'onset_beats'");
    }
    ScoreNote note;
    note.id = item["id"].get<std::string>();
    note.pitch = item["pitch"].get<int>();
    double onset = item["onset_beats"].get<double>();
    if (note.pitch < 0 || note.pitch > 127) {
      throw ParseError("score note '" + note.id + "' has pitch " +
                       std::to_string(note.pitch) + " outside 0..127");
    }
    if (!(onset >= 0.0)) {
      throw ParseError("score note '" + note.id + "' has negative onset");
    }
    staged.emplace_back(onset, std::move(note));
  }
  return finalizeScore(doc["score_id"].get<std::string>(), std::move(staged));
}

Score loadScoreSmf(std::span<const unsigned char> bytes, const std::string& score_id) {
  RawSmf raw = parseSmfRaw(bytes);
  std::vector<std::pair<double, ScoreNote>> staged;
  std::vector<RawNote> notes = raw.notes;
  std::stable_sort(notes.begin(), notes.end(),
                   [](const RawNote& a, const RawNote& b) {
                     return a.onset_tick < b.onset_tick;
                   });
  for (size_t i = 0; i < notes.size(); ++i) {
    if (i > 0 && notes[i].onset_tick == notes[i - 1].onset_tick) {
      throw ParseError("polyphonic score: two notes share onset " +
                       formatFixed(static_cast<double>(notes[i].onset_tick) / raw.division, 6) +
                       " beats");
    }
    ScoreNote note;
    note.id = "s" + std::to_string(i);
    note.pitch = notes[i].pitch;
    staged.emplace_back(static_cast<double>(notes[i].onset_tick) / raw.division,
                        std::move(note));
  }
  return finalizeScore(score_id, std::move(staged));
}

Score loadScoreFile(const std::string& path, Warnings* warnings) {
  std::vector<unsigned char> bytes = readBinaryFile(path);
  if (bytes.size() >= 4 && bytes[0] == 'M' && bytes[1] == 'T' && bytes[2] == 'h' &&
      bytes[3] == 'd') {
    return loadScoreSmf(bytes, std::filesystem::path(path).stem().string());
  }
  return loadScoreJson(std::string(bytes.begin(), bytes.end()), warnings);
}

Alignment loadAlignment(const std::string& text, Warnings* warnings) {
  json doc = parseJsonText(text, "alignment");
  if (!doc.is_object()) throw ParseError("alignment JSON must be an object");
  warnUnknownKeys(doc, {"score_id", "performance_id", "matches", "unmatched_performance"},
                  "alignment", warnings);
  if (!doc.contains("score_id") || !doc["score_id"].is_string()) {
    throw ParseError("alignment JSON requires a string 'score_id'");
  }
  if (!doc.contains("performance_id") || !doc["performance_id"].is_string()) {
    throw ParseError("alignment JSON requires a string 'performance_id'");
  }
  if (!doc.contains("matches") || !doc["matches"].is_array()) {
    throw ParseError("alignment JSON requires an array 'matches'");
  }

  Alignment out;
  out.score_id = doc["score_id"].get<std::string>();
  out.performance_id = doc["performance_id"].get<std::string>();

  std::unordered_set<std::string> assigned;
  for (const json& item : doc["matches"]) {
    if (!item.is_object()) throw ParseError("alignment match must be an object");
    warnUnknownKeys(item, {"score_note_id", "performance_note_ids"}, "alignment match",
                    warnings);
    if (!item.contains("score_note_id") || !item["score_note_id"].is_string()) {
      throw ParseError("alignment match requires a string 'score_note_id'");
    }
    if (!item.contains("performance_note_ids") ||
        !item["performance_note_ids"].is_array()) {
      throw ParseError("alignment match requires an array 'performance_note_ids'");
    }
    std::string sid = item["score_note_id"].get<std::string>();
    for (const json& pid_json : item["performance_note_ids"]) {
      if (!pid_json.is_string()) {
        throw ParseError("performance_note_ids must contain strings");
      }
      std::string pid = pid_json.get<std::string>();
      if (!assigned.insert(pid).second) {
        throw ParseError("duplicate assignment: performance note '" + pid +
                         "' appears in more than one match");
      }
      out.pairs.emplace(sid, pid);
    }
  }

  if (doc.contains("unmatched_performance")) {
    if (!doc["unmatched_performance"].is_array()) {
      throw ParseError("'unmatched_performance' must be an array");
    }
    for (const json& pid_json : doc["unmatched_performance"]) {
      if (!pid_json.is_string()) {
        throw ParseError("'unmatched_performance' must contain strings");
      }
      std::string pid = pid_json.get<std::string>();
      if (assigned.count(pid)) {
        throw ParseError("performance note '" + pid + "' is both matched and unmatched");
      }
      if (!out.unmatched_performance.insert(pid).second) {
        throw ParseError("performance note '" + pid + "' listed as unmatched twice");
      }
    }
  }
  return out;
}

Alignment loadAlignmentFile(const std::string& path, Warnings* warnings) {
  return loadAlignment(readTextFile(path), warnings);
}

std::string serializeAlignment(const Alignment& alignment) {
  // std::set iteration already yields (score id, perf id) in sorted order,
  // which keeps groups and ids within groups deterministic.
  std::map<std::string, std::vector<std::string>> matches;
  for (const auto& [sid, pid] : alignment.pairs) {
    matches[sid].push_back(pid);
  }

  std::ostringstream out;
  out << "{\n";
  out << "  \"score_id\": \"" << jsonEscape(alignment.score_id) << "\",\n";
  out << "  \"performance_id\": \"" << jsonEscape(alignment.performance_id) << "\",\n";
  out << "  \"matches\": [";
  bool first = true;
  for (const auto& [sid, pids] : matches) {
    out << (first ? "\n" : ",\n");
    first = false;
    out << "    {\"score_note_id\": \"" << jsonEscape(sid)
        << "\", \"performance_note_ids\": [";
    for (size_t i = 0; i < pids.size(); ++i) {
      if (i > 0) out << ", ";
      out << '"' << jsonEscape(pids[i]) << '"';
    }
    out << "]}";
  }
  out << (matches.empty() ? "]" : "\n  ]") << ",\n";
  out << "  \"unmatched_performance\": [";
  first = true;
  for (const std::string& pid : alignment.unmatched_performance) {
    if (!first) out << ", ";
    first = false;
    out << '"' << jsonEscape(pid) << '"';
  }
  out << "]\n";
  out << "}\n";
  return out.str();
}

std::vector<std::string> validateAlignment(const Alignment& alignment,
                                           const Score& score,
                                           const Performance& performance) {
  std::vector<std::string> violations;

  if (alignment.score_id != score.score_id) {
    violations.push_back("alignment score_id '" + alignment.score_id +
                         "' does not match score '" + score.score_id + "'");
  }
  std::string perf_id = performance.performanceId();
  if (!alignment.performance_id.empty() && !perf_id.empty() &&
      alignment.performance_id != perf_id) {
    violations.push_back("alignment performance_id '" + alignment.performance_id +
                         "' does not match performance '" + perf_id + "'");
  }

  std::unordered_set<std::string> score_ids;
  for (const ScoreNote& n : score.notes) score_ids.insert(n.id);
  std::unordered_set<std::string> perf_ids;
  for (const PerformanceNote& n : performance.notes) perf_ids.insert(n.id);

  std::unordered_map<std::string, int> use_count;
  for (const auto& [sid, pid] : alignment.pairs) {
    if (!score_ids.count(sid)) {
      violations.push_back("pair references unknown score note id '" + sid +
                           "' (performance note '" + pid + "')");
    }
    if (!perf_ids.count(pid)) {
      violations.push_back("pair references unknown performance note id '" + pid +
                           "' (score note '" + sid + "')");
    }
    ++use_count[pid];
  }
  for (const auto& [pid, count] : use_count) {
    if (count > 1) {
      violations.push_back("performance note '" + pid + "' assigned to " +
                           std::to_string(count) + " score notes");
    }
  }
  for (const std::string& pid : alignment.unmatched_performance) {
    if (!perf_ids.count(pid)) {
      violations.push_back("unmatched references unknown performance note id '" + pid +
                           "'");
    }
    if (use_count.count(pid)) {
      violations.push_back("performance note '" + pid + "' is both matched and unmatched");
    }
  }

  std::sort(violations.begin(), violations.end());
  return violations;
}

}  // namespace griff
