#pragma once

#include <torch/torch.h>

#include <cstdint>

namespace emoface {

// Photometric-only augmentation. Parameters are drawn once per window and the
// same transform is applied to every frame; geometry, frame count and any
// paired labels/audio are untouched. Probabilities of 0 give a bit-exact
// identity.
struct AugmentConfig {
  double p_brightness_contrast = 0.5;
  double brightness_limit = 0.2;   // additive, on [0,1] scale
  double contrast_limit = 0.2;     // multiplicative around 0.5

  double p_gamma = 0.3;
  double gamma_lo = 0.8, gamma_hi = 1.2;

  double p_hsv = 0.3;
  double hue_shift_deg = 20.0;
  double sat_shift = 0.15;
  double val_shift = 0.15;

  double p_clahe = 0.2;
  double clahe_clip = 3.0;  // multiple of the uniform bin height
  int clahe_tiles = 8;

  double p_gauss_noise = 0.2;
  double noise_sigma_lo = 0.01, noise_sigma_hi = 0.05;  // on [0,1] scale

  double p_channel_shuffle = 0.1;

  double p_rgb_shift = 0.3;
  double rgb_shift_limit = 0.08;  // per-channel additive, on [0,1]

  static AugmentConfig disabled();
};

// frames: f32 [T,3,H,W] in [-1,1]; returns the same shape, clamped to [-1,1].
torch::Tensor augment_window(const torch::Tensor& frames, const AugmentConfig& cfg,
                             uint64_t seed);

}  // namespace emoface
