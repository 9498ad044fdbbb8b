#include "griff/stats.hpp"

#include <algorithm>
#include <unordered_map>

namespace griff {

GriffProfile buildProfile(const std::vector<GriffString>& griffs, bool filter,
                          const GriffClassifier& classifier) {
  GriffProfile profile;
  for (const GriffString& g : griffs) {
    if (filter) {
      GriffClass c = classifier ? classifier(g) : classify(g);
      if (c != GriffClass::kHarmonic) continue;
    }
    profile.add(g);
  }
  return profile;
}

double DatasetStats::pctBassOnly() const {
  long long grand = grandTotal();
  return grand > 0 ? 100.0 * static_cast<double>(filtered_bass_only) /
                         static_cast<double>(grand)
                   : 0.0;
}

double DatasetStats::pctEmpty() const {
  long long grand = grandTotal();
  return grand > 0
             ? 100.0 * static_cast<double>(filtered_empty) / static_cast<double>(grand)
             : 0.0;
}

DatasetStats datasetStats(const std::vector<GriffProfile>& profiles, bool filter) {
  DatasetStats stats;
  stats.filter_applied = filter;
  std::map<GriffString, long long> merged;
  for (const GriffProfile& p : profiles) {
    for (const auto& [g, count] : p.counts) {
      GriffClass c = classify(g);
      if (c == GriffClass::kEmpty) stats.filtered_empty += count;
      if (c == GriffClass::kBassOnly) stats.filtered_bass_only += count;
      if (filter && c != GriffClass::kHarmonic) continue;
      merged[g] += count;
    }
  }
  stats.types = static_cast<long long>(merged.size());
  for (const auto& [g, count] : merged) {
    (void)g;
    stats.total += count;
  }
  return stats;
}

std::vector<std::pair<GriffString, long long>> rankedCounts(const GriffProfile& profile) {
  // Map iteration yields symbols ascending, so a stable sort by count
  // descending leaves ties in lexicographic order.
  std::vector<std::pair<GriffString, long long>> ranked(profile.counts.begin(),
                                                        profile.counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

CoverageCurve cumulativeCoverage(const GriffProfile& profile) {
  if (profile.total <= 0) {
    throw std::invalid_argument("coverage needs a nonempty profile");
  }
  CoverageCurve curve;
  long long cumulative = 0;
  long long k = 0;
  for (const auto& [g, count] : rankedCounts(profile)) {
    (void)g;
    cumulative += count;
    ++k;
    curve.points.push_back(
        {k, static_cast<double>(cumulative) / static_cast<double>(profile.total)});
  }
  // The last point is exactly total/total.
  curve.points.back().fraction = 1.0;
  return curve;
}

IntervalProfile intervalProfile(const Score& score, const Performance& performance,
                                const Alignment& alignment) {
  std::vector<std::string> violations = validateAlignment(alignment, score, performance);
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  std::unordered_map<std::string, int> score_pitch;
  for (const ScoreNote& n : score.notes) score_pitch.emplace(n.id, n.pitch);
  std::unordered_map<std::string, int> perf_pitch;
  for (const PerformanceNote& n : performance.notes) perf_pitch.emplace(n.id, n.pitch);

  IntervalProfile profile;
  for (const auto& [sid, pid] : alignment.pairs) {
    profile.add(perf_pitch.at(pid) - score_pitch.at(sid));
  }
  return profile;
}

}  // namespace griff
