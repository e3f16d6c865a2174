#pragma once

#include <torch/torch.h>

namespace emoface {

struct MrmOptions {
  // Sigma = half the temporal-mean mouth bounding box extent, floored here.
  double min_sigma_px = 8.0;
  // Loss weight floor so non-mouth pixels keep reconstruction signal.
  double base_weight = 0.1;
  int size = 128;
};

struct MouthRegionMask {
  torch::Tensor weights;  // f32 [H,W], peak-normalized to max == 1
  double cx = 0, cy = 0;
  double sigma_x = 0, sigma_y = 0;

  // base + (1-base) * weights; what the reconstruction loss actually uses.
  torch::Tensor weight_map(double base) const;
};

// mouth_landmarks: [T,20,2] (or [20,2]) pixel coordinates.
MouthRegionMask compute_mrm(const torch::Tensor& mouth_landmarks, const MrmOptions& opts = {});

}  // namespace emoface
