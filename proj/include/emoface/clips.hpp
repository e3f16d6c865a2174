#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <string>

#include "emoface/common.hpp"

namespace emoface {

// Material as ingested: arbitrary resolution / rates, unaligned.
struct RawClip {
  torch::Tensor frames;     // u8 [T,H,W,3] RGB
  double fps = 0.0;
  torch::Tensor audio;      // f32 [N] in [-1,1]
  int sample_rate = 0;
  torch::Tensor landmarks;  // f32 [T,68,2] in raw pixel coords; may be empty
  std::string actor_id;
  std::string sentence_id;
  Emotion emotion = Emotion::kNeutral;

  std::string id() const { return actor_id + "_" + sentence_id + "_" + to_string(emotion); }
};

// Canonical training material: 128x128 @ 25 FPS, 8 kHz, audio trimmed to
// exactly 320 samples per frame.
struct AlignedClip {
  torch::Tensor frames;     // u8 [T,128,128,3] RGB
  torch::Tensor audio;      // f32 [320*T]
  torch::Tensor landmarks;  // f32 [T,68,2] in aligned coords
  std::string actor_id;
  std::string sentence_id;
  Emotion emotion = Emotion::kNeutral;
  double src_fps = kFps;
  int src_sample_rate = kSampleRate;

  int64_t num_frames() const { return frames.size(0); }
  std::string id() const { return actor_id + "_" + sentence_id + "_" + to_string(emotion); }
  void validate() const;  // enforces the rate/shape/range invariants
};

// Directory container: frames.ten + audio.wav + landmarks.ten + meta.json.
void write_aligned_clip(const std::filesystem::path& dir, const AlignedClip& clip);
AlignedClip read_aligned_clip(const std::filesystem::path& dir);
bool is_aligned_clip_dir(const std::filesystem::path& dir);

// Raw clip directory: same layout but arbitrary geometry/rates, with fps and
// identity fields carried in meta.json.
void write_raw_clip(const std::filesystem::path& dir, const RawClip& clip);
RawClip read_raw_clip(const std::filesystem::path& dir);

// Video-file ingestion (OpenCV decode). Expects a sibling "<stem>.wav" for the
// audio track and parses CREMA-D style names: <actor>_<sentence>_<EMO>[_lvl].
RawClip read_raw_clip_video(const std::filesystem::path& video_path);

}  // namespace emoface
