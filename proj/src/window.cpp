#include "emoface/window.hpp"

#include "emoface/image_io.hpp"
#include "emoface/landmarks.hpp"

namespace emoface {

TrainingWindow sample_window(const AlignedClip& clip, uint64_t seed, const WindowOptions& opts) {
  const int64_t t = clip.num_frames();
  if (t < kWindowFrames)
    throw DataError("clip " + clip.id() + " shorter than " + std::to_string(kWindowFrames) +
                    " frames");
  Rng rng(hash_seed(seed, 0x71d0));
  const int64_t start = rng.randint(t - kWindowFrames + 1);

  TrainingWindow w;
  w.start = start;
  w.emotion = clip.emotion;
  auto frames_u8 = clip.frames.narrow(0, start, kWindowFrames);
  auto gt = normalize_frames(frames_u8);                     // [32,3,H,W]
  auto cond = normalize_frames(clip.frames[0]).unsqueeze(0); // [1,3,H,W]

  // Condition image rides through the same photometric transform as the
  // window so identity cues stay consistent.
  auto stacked = torch::cat({cond, gt}, 0);
  stacked = augment_window(stacked, opts.augment, hash_seed(seed, 0xa27));
  w.condition = stacked[0];
  w.frames = stacked.narrow(0, 1, kWindowFrames).contiguous();

  w.audio = clip.audio.narrow(0, start * kSamplesPerFrame, kWindowSamples).contiguous();
  auto mouth = mouth_points(clip.landmarks.narrow(0, start, kWindowFrames));
  w.mrm_weights =
      compute_mrm(mouth, opts.mrm).weight_map(opts.mrm.base_weight).to(torch::kFloat32);
  return w;
}

WindowLoader::WindowLoader(std::filesystem::path root, std::vector<ManifestEntry> entries,
                           WindowOptions opts, uint64_t base_seed, size_t cache_clips)
    : root_(std::move(root)),
      entries_(std::move(entries)),
      opts_(opts),
      base_seed_(base_seed),
      cache_capacity_(cache_clips) {
  if (entries_.empty()) throw DataError("WindowLoader: empty entry list");
}

const AlignedClip& WindowLoader::clip(size_t k) {
  auto it = cache_.find(k);
  if (it != cache_.end()) return it->second;
  auto loaded = read_aligned_clip(root_ / entries_.at(k).clip_path);
  if (cache_.size() >= cache_capacity_ && !cache_order_.empty()) {
    cache_.erase(cache_order_.front());
    cache_order_.pop_front();
  }
  cache_order_.push_back(k);
  return cache_.emplace(k, std::move(loaded)).first->second;
}

Batch WindowLoader::batch(uint64_t iteration, int batch_size) {
  std::vector<TrainingWindow> ws;
  ws.reserve(static_cast<size_t>(batch_size));
  for (int b = 0; b < batch_size; ++b) {
    Rng pick(hash_seed(base_seed_, iteration, static_cast<uint64_t>(b)));
    size_t k = static_cast<size_t>(pick.randint(static_cast<int64_t>(entries_.size())));
    ws.push_back(sample_window(clip(k), hash_seed(base_seed_, iteration, 1000 + b), opts_));
  }
  return stack_windows(ws);
}

TrainingWindow WindowLoader::fixed_window(size_t k) {
  WindowOptions no_aug = opts_;
  no_aug.augment = AugmentConfig::disabled();
  return sample_window(clip(k), 0, no_aug);
}

Batch stack_windows(const std::vector<TrainingWindow>& windows) {
  TORCH_CHECK(!windows.empty(), "empty batch");
  std::vector<torch::Tensor> f, a, c, m;
  std::vector<int64_t> e;
  for (const auto& w : windows) {
    f.push_back(w.frames);
    a.push_back(w.audio);
    c.push_back(w.condition);
    m.push_back(w.mrm_weights);
    e.push_back(static_cast<int64_t>(w.emotion));
  }
  return Batch{torch::stack(f), torch::stack(a), torch::stack(c),
               torch::tensor(e, torch::kInt64), torch::stack(m)};
}

}  // namespace emoface
