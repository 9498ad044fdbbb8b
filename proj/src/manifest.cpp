#include "griff/manifest.hpp"

#include <filesystem>

#include <json.hpp>

namespace griff {

namespace {

using nlohmann::json;

std::string optionalString(const json& object, const char* key, size_t entry_index) {
  if (!object.contains(key)) return "";
  if (!object[key].is_string()) {
    throw ParseError("manifest entry " + std::to_string(entry_index) + ": '" + key +
                     "' must be a string");
  }
  return object[key].get<std::string>();
}

}  // namespace

std::vector<ManifestEntry> loadManifest(const std::string& text, Warnings* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed manifest JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError("manifest must be a JSON array of entries");
  }

  std::vector<ManifestEntry> entries;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    if (!item.is_object()) {
      throw ParseError("manifest entry " + std::to_string(i) + " must be an object");
    }
    for (const auto& [key, value] : item.items()) {
      (void)value;
      static const char* known[] = {"score_path", "performance_path", "path",
                                    "alignment_path", "player_id", "score_id", "take"};
      bool ok = false;
      for (const char* k : known) {
        if (key == k) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        warn(warnings, "manifest entry " + std::to_string(i) + ": unknown field '" +
                           key + "' ignored");
      }
    }

    ManifestEntry entry;
    entry.score_path = optionalString(item, "score_path", i);
    entry.performance_path = optionalString(item, "performance_path", i);
    if (entry.performance_path.empty()) {
      entry.performance_path = optionalString(item, "path", i);
    }
    if (entry.performance_path.empty()) {
      throw ParseError("manifest entry " + std::to_string(i) +
                       " is missing performance_path");
    }
    entry.alignment_path = optionalString(item, "alignment_path", i);
    entry.player_id = optionalString(item, "player_id", i);
    entry.score_id = optionalString(item, "score_id", i);
    if (item.contains("take")) {
      if (!item["take"].is_number_integer()) {
        throw ParseError("manifest entry " + std::to_string(i) +
                         ": 'take' must be an integer");
      }
      entry.take = item["take"].get<int>();
      entry.has_take = true;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> loadManifestFile(const std::string& path, Warnings* warnings) {
  std::vector<ManifestEntry> entries = loadManifest(readTextFile(path), warnings);
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](std::string& p) {
    if (p.empty()) return;
    std::filesystem::path fp(p);
    if (fp.is_relative()) p = (base / fp).string();
  };
  for (ManifestEntry& e : entries) {
    resolve(e.score_path);
    resolve(e.performance_path);
    resolve(e.alignment_path);
  }
  return entries;
}

}  // namespace griff
