#pragma once

#include <torch/torch.h>

#include <deque>
#include <filesystem>
#include <map>

#include "emoface/augment.hpp"
#include "emoface/clips.hpp"
#include "emoface/manifest.hpp"
#include "emoface/mrm.hpp"

namespace emoface {

struct TrainingWindow {
  torch::Tensor frames;       // f32 [32,3,128,128] in [-1,1]
  torch::Tensor audio;        // f32 [10240]
  torch::Tensor condition;    // f32 [3,128,128]; frame 0 of the whole clip
  Emotion emotion = Emotion::kNeutral;
  torch::Tensor mrm_weights;  // f32 [128,128]; includes the base floor
  int64_t start = 0;
};

struct WindowOptions {
  AugmentConfig augment = AugmentConfig::disabled();
  MrmOptions mrm;
};

// Uniform random start; audio samples [start*320, (start+32)*320) pair with
// the frames. Throws for clips shorter than 32 frames.
TrainingWindow sample_window(const AlignedClip& clip, uint64_t seed,
                             const WindowOptions& opts = {});

struct Batch {
  torch::Tensor frames;     // [B,32,3,128,128]
  torch::Tensor audio;      // [B,10240]
  torch::Tensor condition;  // [B,3,128,128]
  torch::Tensor emotion;    // i64 [B]
  torch::Tensor mrm;        // [B,128,128]
};

// Deterministic, stateless batch source: batch(i) depends only on
// (base_seed, i, entries), so interrupted and straight-through runs sample
// identically. Single-threaded; clips are cached FIFO.
class WindowLoader {
 public:
  WindowLoader(std::filesystem::path root, std::vector<ManifestEntry> entries,
               WindowOptions opts, uint64_t base_seed, size_t cache_clips = 64);

  Batch batch(uint64_t iteration, int batch_size);
  // Fixed deterministic window of entry k (start drawn from seed 0, no
  // augmentation); used for validation.
  TrainingWindow fixed_window(size_t k);
  size_t size() const { return entries_.size(); }
  const AlignedClip& clip(size_t k);

 private:
  std::filesystem::path root_;
  std::vector<ManifestEntry> entries_;
  WindowOptions opts_;
  uint64_t base_seed_;
  size_t cache_capacity_;
  std::map<size_t, AlignedClip> cache_;
  std::deque<size_t> cache_order_;
};

Batch stack_windows(const std::vector<TrainingWindow>& windows);

}  // namespace emoface
