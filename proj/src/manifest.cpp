#include "emoface/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "emoface/clips.hpp"
#include "emoface/tensor_file.hpp"

namespace emoface {

std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  if (s == "test") return Split::kTest;
  throw DataError("unknown split: " + s);
}

std::vector<ManifestEntry> Manifest::split_entries(Split s) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries)
    if (e.split == s) out.push_back(e);
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::map<std::string, Split> load_external_split(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open split file: " + path.string());
  std::map<std::string, Split> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (first && (f[0] == "clip_path" || f[0] == "path")) {
      first = false;
      continue;
    }
    first = false;
    if (f.size() < 2) throw DataError("bad split file row: " + line);
    out[f[0]] = parse_split(f.back());
  }
  return out;
}

}  // namespace

Manifest build_manifest(const std::filesystem::path& root, const ManifestOptions& opts,
                        std::vector<std::string>* rejected) {
  if (!std::filesystem::is_directory(root))
    throw DataError("manifest root is not a directory: " + root.string());

  std::vector<std::filesystem::path> clip_dirs;
  for (const auto& it : std::filesystem::directory_iterator(root)) {
    if (it.is_directory() && is_aligned_clip_dir(it.path())) clip_dirs.push_back(it.path());
  }
  std::sort(clip_dirs.begin(), clip_dirs.end());
  if (clip_dirs.empty()) throw DataError("no aligned clips under: " + root.string());

  Manifest m;
  m.split_seed = opts.seed;
  for (const auto& dir : clip_dirs) {
    auto frames = load_tensor(dir / "frames.ten");
    auto clip = read_aligned_clip(dir);
    ManifestEntry e;
    e.clip_path = dir.filename().string();
    e.actor_id = clip.actor_id;
    e.sentence_id = clip.sentence_id;
    e.emotion = clip.emotion;
    if (frames.size(0) < opts.min_frames) {
      if (rejected) rejected->push_back(e.clip_path);
      continue;
    }
    m.entries.push_back(e);
  }
  if (m.entries.empty()) throw DataError("all clips rejected under: " + root.string());

  if (opts.external_split) {
    auto table = load_external_split(*opts.external_split);
    for (auto& e : m.entries) {
      auto it = table.find(e.clip_path);
      if (it == table.end()) throw DataError("clip missing from split file: " + e.clip_path);
      e.split = it->second;
    }
    return m;
  }

  const size_t n = m.entries.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opts.seed);
  std::shuffle(order.begin(), order.end(), rng);

  // floor + largest-remainder so counts always sum to n within +-1 of ratios
  size_t n_train = static_cast<size_t>(std::floor(opts.ratios[0] * n));
  size_t n_val = static_cast<size_t>(std::floor(opts.ratios[1] * n));
  size_t n_test = static_cast<size_t>(std::floor(opts.ratios[2] * n));
  while (n_train + n_val + n_test < n) {
    double r_train = opts.ratios[0] * n - n_train;
    double r_val = opts.ratios[1] * n - n_val;
    double r_test = opts.ratios[2] * n - n_test;
    if (r_train >= r_val && r_train >= r_test) ++n_train;
    else if (r_val >= r_test) ++n_val;
    else ++n_test;
  }
  for (size_t i = 0; i < n; ++i) {
    auto& e = m.entries[order[i]];
    e.split = i < n_train ? Split::kTrain : (i < n_train + n_val ? Split::kVal : Split::kTest);
  }
  return m;
}

void save_manifest_csv(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path.string());
  os << "clip_path,actor_id,sentence_id,emotion,split\n";
  for (const auto& e : m.entries) {
    os << e.clip_path << "," << e.actor_id << "," << e.sentence_id << ","
       << to_string(e.emotion) << "," << to_string(e.split) << "\n";
  }
}

Manifest load_manifest_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open manifest: " + path.string());
  Manifest m;
  std::string line;
  if (!std::getline(is, line) || !line.starts_with("clip_path,"))
    throw DataError("bad manifest header: " + path.string());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 5) throw DataError("bad manifest row: " + line);
    ManifestEntry e;
    e.clip_path = f[0];
    e.actor_id = f[1];
    e.sentence_id = f[2];
    e.emotion = parse_emotion_or_throw(f[3]);
    e.split = parse_split(f[4]);
    m.entries.push_back(e);
  }
  return m;
}

}  // namespace emoface
