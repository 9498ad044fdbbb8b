#pragma once

#include <string>
#include <vector>

#include "griff/common.hpp"

namespace griff {

/// One (score, performance, alignment) triple of a dataset manifest.
/// player_id / score_id / take override whatever the performance filename
/// encodes; empty strings mean "not given".
struct ManifestEntry {
  std::string score_path;
  std::string performance_path;
  std::string alignment_path;
  std::string player_id;
  std::string score_id;
  int take = 0;
  bool has_take = false;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Parses a manifest: a JSON array of entry objects. "path" is accepted as
/// an alias for "performance_path". Unknown fields warn, missing
/// performance paths throw.
std::vector<ManifestEntry> loadManifest(const std::string& text,
                                        Warnings* warnings = nullptr);

/// Like loadManifest, but resolves relative paths against the manifest
/// file's directory.
std::vector<ManifestEntry> loadManifestFile(const std::string& path,
                                            Warnings* warnings = nullptr);

}  // namespace griff
