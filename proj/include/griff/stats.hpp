#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "griff/common.hpp"
#include "griff/griff.hpp"
#include "griff/midi.hpp"
#include "griff/score.hpp"

namespace griff {

/// Multiset of symbols with cached size. counts never stores zero entries,
/// so total is always the sum of the stored counts.
template <typename Symbol>
struct CountProfile {
  std::map<Symbol, long long> counts;
  long long total = 0;

  void add(const Symbol& symbol, long long n = 1) {
    if (n <= 0) throw std::invalid_argument("count increments must be positive");
    counts[symbol] += n;
    total += n;
  }

  void merge(const CountProfile& other) {
    for (const auto& [symbol, count] : other.counts) add(symbol, count);
  }

  bool empty() const { return total == 0; }

  friend bool operator==(const CountProfile&, const CountProfile&) = default;
};

using GriffProfile = CountProfile<GriffString>;
using IntervalProfile = CountProfile<int>;

/// Override point for what counts as bass-only or empty when filtering.
using GriffClassifier = std::function<GriffClass(const GriffString&)>;

/// Counts griff strings into a profile. With filter set, strings classified
/// empty or bass_only are dropped before counting. A null classifier means
/// the default classify().
GriffProfile buildProfile(const std::vector<GriffString>& griffs, bool filter,
                          const GriffClassifier& classifier = nullptr);

/// Vocabulary-level statistics over a corpus. Profiles are merged first;
/// filtered_* counts are tallied from the unfiltered merge, so percentages
/// are shares of the grand total including what filtering removed.
struct DatasetStats {
  long long types = 0;
  long long total = 0;
  long long filtered_bass_only = 0;
  long long filtered_empty = 0;
  bool filter_applied = true;

  bool hasAvg() const { return types > 0; }
  double avgOccurrence() const { return static_cast<double>(total) / static_cast<double>(types); }
  long long grandTotal() const {
    return total + (filter_applied ? filtered_bass_only + filtered_empty : 0);
  }
  double pctBassOnly() const;
  double pctEmpty() const;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

/// `profiles` must be unfiltered; filtering happens here so the removed
/// counts can be reported.
DatasetStats datasetStats(const std::vector<GriffProfile>& profiles, bool filter = true);

/// Types ranked by count descending, ties broken by symbol ascending.
std::vector<std::pair<GriffString, long long>> rankedCounts(const GriffProfile& profile);

struct CoveragePoint {
  long long k = 0;        // number of top-ranked types
  double fraction = 0.0;  // share of tokens covered

  friend bool operator==(const CoveragePoint&, const CoveragePoint&) = default;
};

struct CoverageCurve {
  std::vector<CoveragePoint> points;

  friend bool operator==(const CoverageCurve&, const CoverageCurve&) = default;
};

/// Cumulative token coverage of the ranked vocabulary. Nondecreasing and
/// ends at exactly 1.0. Throws std::invalid_argument on an empty profile.
CoverageCurve cumulativeCoverage(const GriffProfile& profile);

/// Distribution of single chromatic intervals over all aligned note pairs,
/// ignoring onset grouping. Validates the triple like extractAll.
IntervalProfile intervalProfile(const Score& score, const Performance& performance,
                                const Alignment& alignment);

/// Cross-entropy H(p, q) in nats with add-alpha smoothing over the union
/// vocabulary of both profiles. Requires alpha > 0 and nonempty profiles.
template <typename Symbol>
double crossEntropy(const CountProfile<Symbol>& p, const CountProfile<Symbol>& q,
                    double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("smoothing alpha must be positive");
  }
  if (p.total <= 0 || q.total <= 0) {
    throw std::invalid_argument("cross-entropy requires nonempty profiles");
  }
  std::map<Symbol, std::pair<long long, long long>> merged;
  for (const auto& [symbol, count] : p.counts) merged[symbol].first = count;
  for (const auto& [symbol, count] : q.counts) merged[symbol].second = count;

  double vocab = static_cast<double>(merged.size());
  double p_denom = static_cast<double>(p.total) + alpha * vocab;
  double q_denom = static_cast<double>(q.total) + alpha * vocab;
  double h = 0.0;
  for (const auto& [symbol, counts] : merged) {
    (void)symbol;
    double p_hat = (static_cast<double>(counts.first) + alpha) / p_denom;
    double q_hat = (static_cast<double>(counts.second) + alpha) / q_denom;
    h -= p_hat * std::log(q_hat);
  }
  return h;
}

/// Mean H(p, q) over ordered pairs drawn from two profile lists. With
/// exclude_same_index set (both lists being the same player's takes),
/// pairs (i, i) are skipped. Throws when no pair remains.
template <typename Symbol>
double meanPairwiseCrossEntropy(const std::vector<CountProfile<Symbol>>& from,
                                const std::vector<CountProfile<Symbol>>& to,
                                double alpha, bool exclude_same_index) {
  double sum = 0.0;
  long long pairs = 0;
  for (size_t i = 0; i < from.size(); ++i) {
    for (size_t j = 0; j < to.size(); ++j) {
      if (exclude_same_index && i == j) continue;
      sum += crossEntropy(from[i], to[j], alpha);
      ++pairs;
    }
  }
  if (pairs == 0) {
    throw std::invalid_argument("no profile pairs to average");
  }
  return sum / static_cast<double>(pairs);
}

template <typename Symbol>
struct PlayerProfiles {
  std::string player_id;
  std::vector<CountProfile<Symbol>> profiles;  // one per performance
};

/// Square matrix of mean pairwise cross-entropies; values[i][j] averages
/// H(profile of players[i], profile of players[j]). Cells that cannot be
/// computed hold NaN.
struct SimilarityMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

/// Builds the player-by-player matrix for one score. Empty profiles are
/// dropped first; a diagonal cell needs at least two takes. Every dropped
/// profile or missing cell is described in `reports`.
template <typename Symbol>
SimilarityMatrix similarityMatrix(const std::vector<PlayerProfiles<Symbol>>& players,
                                  double alpha, Warnings* reports = nullptr) {
  SimilarityMatrix m;
  std::vector<std::vector<CountProfile<Symbol>>> usable(players.size());
  for (size_t i = 0; i < players.size(); ++i) {
    m.labels.push_back(players[i].player_id);
    int dropped = 0;
    for (const CountProfile<Symbol>& p : players[i].profiles) {
      if (p.empty()) {
        ++dropped;
      } else {
        usable[i].push_back(p);
      }
    }
    if (dropped > 0) {
      warn(reports, "player '" + players[i].player_id + "': " + std::to_string(dropped) +
                        " empty profile(s) ignored");
    }
  }

  double nan = std::numeric_limits<double>::quiet_NaN();
  m.values.assign(players.size(), std::vector<double>(players.size(), nan));
  for (size_t i = 0; i < players.size(); ++i) {
    for (size_t j = 0; j < players.size(); ++j) {
      bool same = i == j;
      if (usable[i].empty() || usable[j].empty()) {
        warn(reports, "cell (" + m.labels[i] + ", " + m.labels[j] +
                          "): no usable profiles");
        continue;
      }
      if (same && usable[i].size() < 2) {
        warn(reports, "cell (" + m.labels[i] + ", " + m.labels[j] +
                          "): needs at least two takes");
        continue;
      }
      m.values[i][j] = meanPairwiseCrossEntropy(usable[i], usable[j], alpha, same);
    }
  }
  return m;
}

}  // namespace griff
