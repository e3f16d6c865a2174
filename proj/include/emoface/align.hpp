#pragma once

#include <torch/torch.h>

#include "emoface/clips.hpp"
#include "emoface/similarity.hpp"

namespace emoface {

struct AlignOptions {
  // Maximum |audio - video| duration disagreement, in seconds, before a clip
  // is rejected. One frame period by default.
  double av_tolerance_sec = 1.0 / kFps;
};

// Builds per-actor template landmarks: the reference frame's landmarks mapped
// so its eye/nose anchor means land on canonical_anchors() in the 128x128
// output space. `frame_landmarks` is [68,2] in raw coords.
torch::Tensor make_template_landmarks(const torch::Tensor& frame_landmarks);

// One transform estimated from the first frame's anchors against the
// template's, applied to every frame (head motion after frame 0 survives).
// Video resampled to 25 FPS by nearest-in-time frame selection, audio to
// 8 kHz, peak-normalized, trimmed to 320*T samples.
AlignedClip align_clip(const RawClip& raw, const torch::Tensor& template_landmarks,
                       const AlignOptions& opts = {});

// Warps u8 [H,W,3] frames by a similarity transform into a WxH canvas
// (bilinear, black border).
torch::Tensor warp_frame(const torch::Tensor& u8_hwc, const SimilarityTransform& t,
                         int out_h, int out_w);

// Nearest-in-time source index for each of the `t_out` output frames.
std::vector<int64_t> resample_frame_indices(int64_t t_in, double fps_in, int64_t t_out,
                                            double fps_out);

}  // namespace emoface
