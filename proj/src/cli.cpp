#include "griff/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "griff/aligner.hpp"
#include "griff/common.hpp"
#include "griff/griff.hpp"
#include "griff/manifest.hpp"
#include "griff/midi.hpp"
#include "griff/score.hpp"
#include "griff/stats.hpp"
#include "griff/svg.hpp"

namespace griff {

namespace {

struct RunConfig {
  double window_ms = 35.0;
  std::string representation = "ordered";
  double alpha = 1.0;
  bool filter = true;
  std::string format = "json";
  std::string manifest_path;
  std::string out_path;
  bool svg = false;

  double windowSeconds() const { return window_ms / 1000.0; }
};

// ---------------------------------------------------------------------------
// Deterministic output writers
// ---------------------------------------------------------------------------

/// Streams pretty-printed JSON with fixed key order and fixed-precision
/// reals, so identical inputs produce byte-identical output.
class JsonWriter {
 public:
  std::string str() const { return out_.str() + "\n"; }

  JsonWriter& key(const std::string& k) {
    separate();
    out_ << '"' << jsonEscape(k) << "\": ";
    pending_ = true;
    return *this;
  }

  void value(const std::string& v) { emit('"' + jsonEscape(v) + '"'); }
  void value(const char* v) { value(std::string(v)); }
  void value(long long v) { emit(std::to_string(v)); }
  void value(int v) { value(static_cast<long long>(v)); }
  void value(bool v) { emit(v ? "true" : "false"); }
  void value(double v, int decimals = 6) {
    emit(std::isnan(v) ? "null" : formatFixed(v, decimals));
  }
  void null() { emit("null"); }

  /// Emits pre-rendered JSON as one value; used to keep small tuples on
  /// a single line.
  void rawValue(const std::string& text) { emit(text); }

  void beginObject() { open('{'); }
  void endObject() { close('}'); }
  void beginArray() { open('['); }
  void endArray() { close(']'); }

 private:
  struct Frame {
    int items = 0;
  };

  void separate() {
    if (!frames_.empty()) {
      if (frames_.back().items > 0) out_ << ',';
      out_ << '\n' << std::string(frames_.size() * 2, ' ');
    }
  }

  void emit(const std::string& text) {
    if (!pending_) separate();
    pending_ = false;
    out_ << text;
    if (!frames_.empty()) ++frames_.back().items;
  }

  void open(char c) {
    if (!pending_) separate();
    pending_ = false;
    out_ << c;
    frames_.push_back({});
  }

  void close(char c) {
    Frame frame = frames_.back();
    frames_.pop_back();
    if (frame.items > 0) out_ << '\n' << std::string(frames_.size() * 2, ' ');
    out_ << c;
    if (!frames_.empty()) ++frames_.back().items;
  }

  std::ostringstream out_;
  std::vector<Frame> frames_;
  bool pending_ = false;
};

std::string csvField(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void writeOutput(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    writeTextFile(out_path, content);
  }
}

void flushWarnings(const Warnings& warnings) {
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

std::string doubleCell(double v) { return std::isnan(v) ? "" : formatFixed(v, 6); }

// ---------------------------------------------------------------------------
// Shared loading
// ---------------------------------------------------------------------------

Representation parseRepresentation(const std::string& text) {
  return text == "pooled" ? Representation::kPooled : Representation::kOrdered;
}

struct TripleData {
  std::string performance_path;
  std::shared_ptr<const Score> score;
  Performance performance;
  Alignment alignment;
  std::string player_id;
  std::string score_id;
  int take = 0;
};

/// Loads every manifest entry, skipping (with a warning) the ones that fail
/// to parse or validate. Scores are cached by path.
std::vector<TripleData> loadTriples(const std::string& manifest_path,
                                    size_t* failed_count) {
  Warnings warnings;
  std::vector<ManifestEntry> entries = loadManifestFile(manifest_path, &warnings);
  flushWarnings(warnings);
  if (entries.empty()) {
    throw ParseError("manifest contains no entries: " + manifest_path);
  }

  std::map<std::string, std::shared_ptr<const Score>> score_cache;
  std::vector<TripleData> out;
  for (const ManifestEntry& entry : entries) {
    try {
      if (entry.score_path.empty()) {
        throw ParseError("manifest entry is missing score_path");
      }
      if (entry.alignment_path.empty()) {
        throw ParseError("manifest entry is missing alignment_path");
      }

      std::shared_ptr<const Score> score;
      auto it = score_cache.find(entry.score_path);
      if (it != score_cache.end()) {
        score = it->second;
      } else {
        Warnings w;
        score = std::make_shared<Score>(loadScoreFile(entry.score_path, &w));
        flushWarnings(w);
        score_cache.emplace(entry.score_path, score);
      }

      TripleData data;
      data.performance_path = entry.performance_path;
      data.score = score;

      Warnings w;
      std::vector<unsigned char> bytes = readBinaryFile(entry.performance_path);
      data.performance = parseSmf(bytes, &w);
      PerformanceMeta meta = metaFromFilename(entry.performance_path);
      if (!entry.player_id.empty()) meta.player_id = entry.player_id;
      if (!entry.score_id.empty()) meta.score_id = entry.score_id;
      if (entry.has_take) meta.take = entry.take;
      data.performance.meta = meta;

      data.alignment = loadAlignmentFile(entry.alignment_path, &w);
      flushWarnings(w);

      std::vector<std::string> violations =
          validateAlignment(data.alignment, *score, data.performance);
      if (!violations.empty()) {
        throw ValidationError(std::move(violations));
      }

      data.player_id = meta.player_id;
      data.score_id = meta.score_id.empty() ? score->score_id : meta.score_id;
      data.take = meta.take;
      out.push_back(std::move(data));
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping '" << entry.performance_path << "': " << e.what()
                << "\n";
      if (failed_count != nullptr) ++*failed_count;
    }
  }
  return out;
}

std::vector<GriffString> griffStrings(const TripleData& t, const RunConfig& config) {
  std::vector<GriffRow> rows =
      extractAll(*t.score, t.performance, t.alignment, config.windowSeconds(),
                 parseRepresentation(config.representation));
  std::vector<GriffString> strings;
  strings.reserve(rows.size());
  for (GriffRow& row : rows) strings.push_back(std::move(row.griff));
  return strings;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmdExtract(const RunConfig& config, const std::string& score_path,
               const std::string& performance_path, const std::string& alignment_path) {
  Warnings warnings;
  Score score = loadScoreFile(score_path, &warnings);
  std::vector<unsigned char> bytes = readBinaryFile(performance_path);
  Performance performance = parseSmf(bytes, &warnings);
  performance.meta = metaFromFilename(performance_path);
  Alignment alignment = loadAlignmentFile(alignment_path, &warnings);
  flushWarnings(warnings);

  std::vector<GriffRow> rows =
      extractAll(score, performance, alignment, config.windowSeconds(),
                 parseRepresentation(config.representation));

  if (config.format == "csv") {
    std::ostringstream out;
    out << "score_note_id,griff,class\n";
    for (const GriffRow& row : rows) {
      out << csvField(row.score_note_id) << ',' << csvField(row.griff) << ','
          << toString(classify(row.griff)) << "\n";
    }
    writeOutput(config.out_path, out.str());
    return kExitOk;
  }

  JsonWriter json;
  json.beginObject();
  json.key("score_id").value(score.score_id);
  json.key("performance_id").value(performance.performanceId());
  json.key("representation").value(config.representation);
  json.key("window_ms").value(config.window_ms);
  json.key("rows").beginArray();
  for (const GriffRow& row : rows) {
    json.rawValue("{\"score_note_id\": \"" + jsonEscape(row.score_note_id) +
                  "\", \"griff\": \"" + jsonEscape(row.griff) + "\", \"class\": \"" +
                  toString(classify(row.griff)) + "\"}");
  }
  json.endArray();
  json.endObject();
  writeOutput(config.out_path, json.str());
  return kExitOk;
}

int cmdAlign(const RunConfig& config, const std::string& score_path,
             const std::string& performance_path) {
  Warnings warnings;
  Score score = loadScoreFile(score_path, &warnings);
  std::vector<unsigned char> bytes = readBinaryFile(performance_path);
  Performance performance = parseSmf(bytes, &warnings);
  performance.meta = metaFromFilename(performance_path);
  flushWarnings(warnings);

  Alignment alignment = greedyAlign(score, performance);
  writeOutput(config.out_path, serializeAlignment(alignment));
  return kExitOk;
}

int cmdStats(const RunConfig& config) {
  size_t failed = 0;
  std::vector<TripleData> triples = loadTriples(config.manifest_path, &failed);
  if (triples.empty()) {
    std::cerr << "error: no usable manifest entries\n";
    return kExitError;
  }

  std::vector<GriffProfile> profiles;
  for (const TripleData& t : triples) {
    profiles.push_back(buildProfile(griffStrings(t, config), false));
  }
  DatasetStats stats = datasetStats(profiles, config.filter);

  if (config.format == "csv") {
    std::ostringstream out;
    out << "key,value\n";
    out << "representation," << config.representation << "\n";
    out << "window_ms," << formatFixed(config.window_ms, 6) << "\n";
    out << "filter," << (config.filter ? "true" : "false") << "\n";
    out << "performances," << triples.size() << "\n";
    out << "griff_types," << stats.types << "\n";
    out << "griff_total," << stats.total << "\n";
    out << "avg_occurrence,"
        << (stats.hasAvg() ? formatFixed(stats.avgOccurrence(), 6) : "") << "\n";
    out << "filtered_bass_only," << stats.filtered_bass_only << "\n";
    out << "filtered_empty," << stats.filtered_empty << "\n";
    out << "pct_bass_only," << formatFixed(stats.pctBassOnly(), 6) << "\n";
    out << "pct_empty," << formatFixed(stats.pctEmpty(), 6) << "\n";
    out << "grand_total," << stats.grandTotal() << "\n";
    writeOutput(config.out_path, out.str());
    return kExitOk;
  }

  JsonWriter json;
  json.beginObject();
  json.key("representation").value(config.representation);
  json.key("window_ms").value(config.window_ms);
  json.key("filter").value(config.filter);
  json.key("performances").value(static_cast<long long>(triples.size()));
  json.key("griff_types").value(stats.types);
  json.key("griff_total").value(stats.total);
  if (stats.hasAvg()) {
    json.key("avg_occurrence").value(stats.avgOccurrence());
  } else {
    json.key("avg_occurrence").null();
  }
  json.key("filtered_bass_only").value(stats.filtered_bass_only);
  json.key("filtered_empty").value(stats.filtered_empty);
  json.key("pct_bass_only").value(stats.pctBassOnly());
  json.key("pct_empty").value(stats.pctEmpty());
  json.key("grand_total").value(stats.grandTotal());
  json.endObject();
  writeOutput(config.out_path, json.str());
  return kExitOk;
}

int cmdCoverage(const RunConfig& config) {
  if (config.svg && config.out_path.empty()) {
    std::cerr << "error: --svg requires --out\n";
    return kExitError;
  }

  size_t failed = 0;
  std::vector<TripleData> triples = loadTriples(config.manifest_path, &failed);
  if (triples.empty()) {
    std::cerr << "error: no usable manifest entries\n";
    return kExitError;
  }

  // Profiles are summed per player (and per player/score) before ranking.
  std::map<std::string, GriffProfile> overall;
  std::map<std::string, std::map<std::string, GriffProfile>> per_score;
  for (const TripleData& t : triples) {
    if (t.player_id.empty()) {
      std::cerr << "warning: skipping '" << t.performance_path
                << "': no player_id from manifest or filename\n";
      continue;
    }
    GriffProfile profile = buildProfile(griffStrings(t, config), config.filter);
    if (profile.empty()) {
      std::cerr << "warning: '" << t.performance_path
                << "' contributed no griffs after filtering\n";
      continue;
    }
    overall[t.player_id].merge(profile);
    per_score[t.player_id][t.score_id].merge(profile);
  }
  if (overall.empty()) {
    std::cerr << "error: no coverage data\n";
    return kExitError;
  }

  // "(all)" labels a player's merged curve; parentheses keep it from
  // colliding with a real score id.
  struct NamedCurve {
    std::string score_id;
    CoverageCurve curve;
  };
  std::map<std::string, std::vector<NamedCurve>> curves;
  for (const auto& [player, profile] : overall) {
    curves[player].push_back({"(all)", cumulativeCoverage(profile)});
    for (const auto& [score_id, score_profile] : per_score[player]) {
      curves[player].push_back({score_id, cumulativeCoverage(score_profile)});
    }
  }

  if (config.svg) {
    std::vector<SvgSeries> series;
    for (const auto& [player, named] : curves) {
      SvgSeries s;
      s.label = player;
      for (const CoveragePoint& p : named.front().curve.points) {
        s.points.emplace_back(static_cast<double>(p.k), p.fraction);
      }
      series.push_back(std::move(s));
    }
    std::string svg = lineChartSvg(series, "top k griff types", "coverage");
    std::filesystem::path svg_path(config.out_path);
    svg_path.replace_extension(".svg");
    writeTextFile(svg_path.string(), svg);
  }

  if (config.format == "csv") {
    std::ostringstream out;
    out << "player_id,score_id,k,fraction\n";
    for (const auto& [player, named] : curves) {
      for (const NamedCurve& nc : named) {
        for (const CoveragePoint& p : nc.curve.points) {
          out << csvField(player) << ',' << csvField(nc.score_id) << ',' << p.k << ','
              << formatFixed(p.fraction, 6) << "\n";
        }
      }
    }
    writeOutput(config.out_path, out.str());
    return kExitOk;
  }

  JsonWriter json;
  json.beginObject();
  json.key("representation").value(config.representation);
  json.key("window_ms").value(config.window_ms);
  json.key("filter").value(config.filter);
  json.key("players").beginArray();
  for (const auto& [player, named] : curves) {
    json.beginObject();
    json.key("player_id").value(player);
    json.key("curves").beginArray();
    for (const NamedCurve& nc : named) {
      json.beginObject();
      json.key("score_id").value(nc.score_id);
      json.key("points").beginArray();
      for (const CoveragePoint& p : nc.curve.points) {
        json.rawValue("[" + std::to_string(p.k) + ", " + formatFixed(p.fraction, 6) +
                      "]");
      }
      json.endArray();
      json.endObject();
    }
    json.endArray();
    json.endObject();
  }
  json.endArray();
  json.endObject();
  writeOutput(config.out_path, json.str());
  return kExitOk;
}

int cmdSimilarity(const RunConfig& config) {
  size_t failed = 0;
  std::vector<TripleData> triples = loadTriples(config.manifest_path, &failed);
  if (triples.empty()) {
    std::cerr << "error: no usable manifest entries\n";
    return kExitError;
  }

  struct ScoreMatrix {
    std::string score_id;
    SimilarityMatrix matrix;
  };
  std::vector<ScoreMatrix> matrices;
  Warnings reports;

  if (config.representation == "interval") {
    std::map<std::string, std::map<std::string, std::vector<IntervalProfile>>> grouped;
    for (const TripleData& t : triples) {
      if (t.player_id.empty()) {
        std::cerr << "warning: skipping '" << t.performance_path
                  << "': no player_id from manifest or filename\n";
        continue;
      }
      grouped[t.score_id][t.player_id].push_back(
          intervalProfile(*t.score, t.performance, t.alignment));
    }
    for (const auto& [score_id, players] : grouped) {
      std::vector<PlayerProfiles<int>> list;
      for (const auto& [player, profiles] : players) {
        list.push_back({player, profiles});
      }
      matrices.push_back({score_id, similarityMatrix(list, config.alpha, &reports)});
    }
  } else {
    std::map<std::string, std::map<std::string, std::vector<GriffProfile>>> grouped;
    for (const TripleData& t : triples) {
      if (t.player_id.empty()) {
        std::cerr << "warning: skipping '" << t.performance_path
                  << "': no player_id from manifest or filename\n";
        continue;
      }
      grouped[t.score_id][t.player_id].push_back(
          buildProfile(griffStrings(t, config), config.filter));
    }
    for (const auto& [score_id, players] : grouped) {
      std::vector<PlayerProfiles<GriffString>> list;
      for (const auto& [player, profiles] : players) {
        list.push_back({player, profiles});
      }
      matrices.push_back({score_id, similarityMatrix(list, config.alpha, &reports)});
    }
  }
  for (const std::string& r : reports) std::cerr << "note: " << r << "\n";
  if (matrices.empty()) {
    std::cerr << "error: no similarity data\n";
    return kExitError;
  }

  if (config.format == "csv") {
    std::ostringstream out;
    out << "score_id,player_id";
    // All matrices share the column header only when player sets agree, so
    // columns are emitted per row instead.
    out << ",to_player_id,cross_entropy\n";
    for (const ScoreMatrix& sm : matrices) {
      for (size_t i = 0; i < sm.matrix.labels.size(); ++i) {
        for (size_t j = 0; j < sm.matrix.labels.size(); ++j) {
          out << csvField(sm.score_id) << ',' << csvField(sm.matrix.labels[i]) << ','
              << csvField(sm.matrix.labels[j]) << ','
              << doubleCell(sm.matrix.values[i][j]) << "\n";
        }
      }
    }
    writeOutput(config.out_path, out.str());
    return kExitOk;
  }

  JsonWriter json;
  json.beginObject();
  json.key("representation").value(config.representation);
  json.key("alpha").value(config.alpha);
  json.key("window_ms").value(config.window_ms);
  json.key("filter").value(config.filter);
  json.key("scores").beginArray();
  for (const ScoreMatrix& sm : matrices) {
    json.beginObject();
    json.key("score_id").value(sm.score_id);
    json.key("players").beginArray();
    for (const std::string& label : sm.matrix.labels) json.value(label);
    json.endArray();
    json.key("matrix").beginArray();
    for (const std::vector<double>& row : sm.matrix.values) {
      std::string line = "[";
      for (size_t j = 0; j < row.size(); ++j) {
        if (j > 0) line += ", ";
        line += std::isnan(row[j]) ? "null" : formatFixed(row[j], 6);
      }
      line += "]";
      json.rawValue(line);
    }
    json.endArray();
    json.endObject();
  }
  json.endArray();
  json.endObject();
  writeOutput(config.out_path, json.str());
  return kExitOk;
}

}  // namespace

int runCli(int argc, const char* const* argv) {
  CLI::App app{"Griff extraction and analysis for aligned continuo performances"};
  app.require_subcommand(1);

  RunConfig config;
  bool no_filter = false;
  std::string score_path, performance_path, alignment_path;

  auto add_window = [&config](CLI::App* cmd) {
    cmd->add_option("--window-ms", config.window_ms,
                    "Onset window in milliseconds (default 35)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_format_out = [&config](CLI::App* cmd) {
    cmd->add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", config.out_path, "Write output to this file");
  };
  auto add_no_filter = [&no_filter](CLI::App* cmd) {
    cmd->add_flag("--no-filter", no_filter, "Keep empty and bass-only griffs");
  };
  auto add_manifest = [&config](CLI::App* cmd) {
    cmd->add_option("--manifest", config.manifest_path, "Dataset manifest JSON")
        ->required();
  };

  CLI::App* extract =
      app.add_subcommand("extract", "Extract one griff per score note from an aligned performance");
  extract->add_option("score", score_path, "Score file (JSON or SMF)")->required();
  extract->add_option("performance", performance_path, "Performance SMF")->required();
  extract->add_option("alignment", alignment_path, "Alignment JSON")->required();
  add_window(extract);
  extract
      ->add_option("--representation", config.representation,
                   "Griff representation (ordered|pooled)")
      ->check(CLI::IsMember({"ordered", "pooled"}));
  add_format_out(extract);

  CLI::App* align =
      app.add_subcommand("align", "Greedy baseline alignment of a performance to a score");
  align->add_option("score", score_path, "Score file (JSON or SMF)")->required();
  align->add_option("performance", performance_path, "Performance SMF")->required();
  align->add_option("--out", config.out_path, "Write alignment JSON to this file");

  CLI::App* stats = app.add_subcommand("stats", "Corpus-wide griff vocabulary statistics");
  add_manifest(stats);
  add_window(stats);
  stats
      ->add_option("--representation", config.representation,
                   "Griff representation (ordered|pooled)")
      ->check(CLI::IsMember({"ordered", "pooled"}));
  add_no_filter(stats);
  add_format_out(stats);

  CLI::App* coverage =
      app.add_subcommand("coverage", "Cumulative coverage curves per player");
  add_manifest(coverage);
  add_window(coverage);
  coverage
      ->add_option("--representation", config.representation,
                   "Griff representation (ordered|pooled)")
      ->check(CLI::IsMember({"ordered", "pooled"}));
  add_no_filter(coverage);
  add_format_out(coverage);
  coverage->add_flag("--svg", config.svg,
                     "Also write an SVG chart next to the --out file");

  CLI::App* similarity =
      app.add_subcommand("similarity", "Cross-entropy similarity matrices per score");
  add_manifest(similarity);
  add_window(similarity);
  similarity
      ->add_option("--representation", config.representation,
                   "Profile representation (ordered|pooled|interval)")
      ->check(CLI::IsMember({"ordered", "pooled", "interval"}));
  similarity
      ->add_option("--alpha", config.alpha, "Additive smoothing weight (default 1)")
      ->check(CLI::PositiveNumber);
  add_no_filter(similarity);
  add_format_out(similarity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  config.filter = !no_filter;

  try {
    if (extract->parsed()) {
      return cmdExtract(config, score_path, performance_path, alignment_path);
    }
    if (align->parsed()) {
      return cmdAlign(config, score_path, performance_path);
    }
    if (stats->parsed()) return cmdStats(config);
    if (coverage->parsed()) return cmdCoverage(config);
    if (similarity->parsed()) return cmdSimilarity(config);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UnalignableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnalignable;
  } catch (const ValidationError& e) {
    for (const std::string& v : e.violations()) {
      std::cerr << "error: " << v << "\n";
    }
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace griff
