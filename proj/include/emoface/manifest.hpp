#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emoface/common.hpp"

namespace emoface {

enum class Split { kTrain, kVal, kTest };
std::string to_string(Split s);
Split parse_split(const std::string& s);

struct ManifestEntry {
  std::string clip_path;  // relative to the manifest's directory
  std::string actor_id;
  std::string sentence_id;
  Emotion emotion = Emotion::kNeutral;
  Split split = Split::kTrain;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  uint64_t split_seed = 0;

  std::vector<ManifestEntry> split_entries(Split s) const;
};

struct ManifestOptions {
  std::array<double, 3> ratios = {0.70, 0.15, 0.15};
  uint64_t seed = 0;
  // Clips with fewer frames are rejected (logged), not padded.
  int64_t min_frames = kWindowFrames;
  // When set, split assignment is copied from this file instead of being
  // drawn from the seed; used to replicate externally published splits.
  std::optional<std::filesystem::path> external_split;
};

// Scans `root` for aligned-clip directories and assigns splits. Deterministic
// in (root contents, ratios, seed). Rejected clip ids are returned through
// `rejected` when non-null.
Manifest build_manifest(const std::filesystem::path& root, const ManifestOptions& opts,
                        std::vector<std::string>* rejected = nullptr);

// CSV with header clip_path,actor_id,sentence_id,emotion,split.
void save_manifest_csv(const std::filesystem::path& path, const Manifest& m);
Manifest load_manifest_csv(const std::filesystem::path& path);

}  // namespace emoface
