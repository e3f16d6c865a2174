#pragma once

#include "emoface/align.hpp"
#include "emoface/clips.hpp"
#include "emoface/manifest.hpp"

namespace emoface::testsupport {

struct SyntheticSpec {
  int frames = 75;
  double fps = 25.0;
  int sample_rate = 8000;
  int height = 128, width = 128;
  Emotion emotion = Emotion::kNeutral;
  std::string actor_id = "a01";
  std::string sentence_id = "s01";
  uint64_t seed = 7;
  double face_scale = 1.0;
  double cx_frac = 0.5, cy_frac = 0.5;
};

// Parametric cartoon face: the mouth opening tracks the audio envelope and
// brow/mouth geometry plus a tint encode the emotion, so clips are
// audio-synced, emotion-separable, and come with exact 68-point landmarks.
RawClip make_synthetic_raw_clip(const SyntheticSpec& spec);

// Exact landmarks for one drawn frame (used to cross-check warps).
torch::Tensor synthetic_landmarks(const SyntheticSpec& spec, int frame);

// Pushes a raw synthetic clip through the real alignment path, templated on
// its own first frame.
AlignedClip make_synthetic_aligned_clip(const SyntheticSpec& spec);

// Writes `per_emotion` aligned clips for each of the six emotions under
// `root` and returns a seeded manifest.
Manifest build_synthetic_dataset(const std::filesystem::path& root, int per_emotion,
                                 int frames, uint64_t seed);

}  // namespace emoface::testsupport
