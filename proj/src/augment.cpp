#include "emoface/augment.hpp"

#include <array>
#include <cmath>

#include "emoface/common.hpp"

namespace emoface {

AugmentConfig AugmentConfig::disabled() {
  AugmentConfig c;
  c.p_brightness_contrast = c.p_gamma = c.p_hsv = c.p_clahe = 0.0;
  c.p_gauss_noise = c.p_channel_shuffle = c.p_rgb_shift = 0.0;
  return c;
}

namespace {

// All steps below operate in-place on [0,1] RGB planes of one frame,
// x laid out as [3,H,W] contiguous floats.

void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v) {
  float maxc = std::max({r, g, b});
  float minc = std::min({r, g, b});
  v = maxc;
  float d = maxc - minc;
  s = maxc <= 0.f ? 0.f : d / maxc;
  if (d <= 0.f) {
    h = 0.f;
    return;
  }
  if (maxc == r) h = std::fmod((g - b) / d, 6.f);
  else if (maxc == g) h = (b - r) / d + 2.f;
  else h = (r - g) / d + 4.f;
  h *= 60.f;
  if (h < 0.f) h += 360.f;
}

void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b) {
  float c = v * s;
  float hp = h / 60.f;
  float x = c * (1.f - std::fabs(std::fmod(hp, 2.f) - 1.f));
  float r1 = 0, g1 = 0, b1 = 0;
  if (hp < 1) { r1 = c; g1 = x; }
  else if (hp < 2) { r1 = x; g1 = c; }
  else if (hp < 3) { g1 = c; b1 = x; }
  else if (hp < 4) { g1 = x; b1 = c; }
  else if (hp < 5) { r1 = x; b1 = c; }
  else { r1 = c; b1 = x; }
  float m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

void apply_hsv_shift(float* px, int64_t hw, float dh, float ds, float dv) {
  for (int64_t i = 0; i < hw; ++i) {
    float h, s, v;
    rgb_to_hsv(px[i], px[hw + i], px[2 * hw + i], h, s, v);
    h = std::fmod(h + dh + 360.f, 360.f);
    s = std::clamp(s + ds, 0.f, 1.f);
    v = std::clamp(v + dv, 0.f, 1.f);
    hsv_to_rgb(h, s, v, px[i], px[hw + i], px[2 * hw + i]);
  }
}

// Contrast-limited adaptive histogram equalization on one channel plane,
// 256 bins, bilinear blending between tile mappings.
void clahe_channel(float* plane, int h, int w, int tiles, double clip_mult) {
  const int th = h / tiles, tw = w / tiles;
  std::vector<std::array<float, 256>> luts(static_cast<size_t>(tiles * tiles));
  for (int ty = 0; ty < tiles; ++ty) {
    for (int tx = 0; tx < tiles; ++tx) {
      std::array<int, 256> hist{};
      for (int y = ty * th; y < (ty + 1) * th; ++y)
        for (int x = tx * tw; x < (tx + 1) * tw; ++x) {
          int v = std::clamp(static_cast<int>(plane[y * w + x] * 255.f + 0.5f), 0, 255);
          hist[v]++;
        }
      const int area = th * tw;
      const int limit = std::max(1, static_cast<int>(clip_mult * area / 256.0));
      int excess = 0;
      for (auto& c : hist)
        if (c > limit) {
          excess += c - limit;
          c = limit;
        }
      const int bonus = excess / 256;
      for (auto& c : hist) c += bonus;
      auto& lut = luts[static_cast<size_t>(ty * tiles + tx)];
      int cdf = 0;
      for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        lut[v] = static_cast<float>(cdf) / area;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    const float gy = (y + 0.5f) / th - 0.5f;
    const int ty0 = std::clamp(static_cast<int>(std::floor(gy)), 0, tiles - 1);
    const int ty1 = std::min(ty0 + 1, tiles - 1);
    const float fy = std::clamp(gy - ty0, 0.f, 1.f);
    for (int x = 0; x < w; ++x) {
      const float gx = (x + 0.5f) / tw - 0.5f;
      const int tx0 = std::clamp(static_cast<int>(std::floor(gx)), 0, tiles - 1);
      const int tx1 = std::min(tx0 + 1, tiles - 1);
      const float fx = std::clamp(gx - tx0, 0.f, 1.f);
      int v = std::clamp(static_cast<int>(plane[y * w + x] * 255.f + 0.5f), 0, 255);
      float m00 = luts[static_cast<size_t>(ty0 * tiles + tx0)][v];
      float m01 = luts[static_cast<size_t>(ty0 * tiles + tx1)][v];
      float m10 = luts[static_cast<size_t>(ty1 * tiles + tx0)][v];
      float m11 = luts[static_cast<size_t>(ty1 * tiles + tx1)][v];
      plane[y * w + x] = (1 - fy) * ((1 - fx) * m00 + fx * m01) + fy * ((1 - fx) * m10 + fx * m11);
    }
  }
}

struct Plan {
  bool bc = false; float brightness = 0, contrast = 0;
  bool gamma = false; float g = 1;
  bool hsv = false; float dh = 0, ds = 0, dv = 0;
  bool clahe = false;
  bool noise = false; float sigma = 0;
  bool shuffle = false; std::array<int, 3> perm = {0, 1, 2};
  bool rgb = false; std::array<float, 3> shift = {0, 0, 0};
};

Plan draw_plan(const AugmentConfig& c, Rng& rng) {
  Plan p;
  p.bc = rng.uniform() < c.p_brightness_contrast;
  p.brightness = static_cast<float>(rng.uniform(-c.brightness_limit, c.brightness_limit));
  p.contrast = static_cast<float>(rng.uniform(-c.contrast_limit, c.contrast_limit));
  p.gamma = rng.uniform() < c.p_gamma;
  p.g = static_cast<float>(rng.uniform(c.gamma_lo, c.gamma_hi));
  p.hsv = rng.uniform() < c.p_hsv;
  p.dh = static_cast<float>(rng.uniform(-c.hue_shift_deg, c.hue_shift_deg));
  p.ds = static_cast<float>(rng.uniform(-c.sat_shift, c.sat_shift));
  p.dv = static_cast<float>(rng.uniform(-c.val_shift, c.val_shift));
  p.clahe = rng.uniform() < c.p_clahe;
  p.noise = rng.uniform() < c.p_gauss_noise;
  p.sigma = static_cast<float>(rng.uniform(c.noise_sigma_lo, c.noise_sigma_hi));
  p.shuffle = rng.uniform() < c.p_channel_shuffle;
  {
    // Fisher-Yates on {0,1,2}
    for (int i = 2; i > 0; --i) {
      int j = static_cast<int>(rng.randint(i + 1));
      std::swap(p.perm[static_cast<size_t>(i)], p.perm[static_cast<size_t>(j)]);
    }
  }
  p.rgb = rng.uniform() < c.p_rgb_shift;
  for (auto& s : p.shift) s = static_cast<float>(rng.uniform(-c.rgb_shift_limit, c.rgb_shift_limit));
  return p;
}

bool plan_is_identity(const Plan& p) {
  return !p.bc && !p.gamma && !p.hsv && !p.clahe && !p.noise && !p.shuffle && !p.rgb;
}

}  // namespace

torch::Tensor augment_window(const torch::Tensor& frames, const AugmentConfig& cfg,
                             uint64_t seed) {
  TORCH_CHECK(frames.dim() == 4 && frames.size(1) == 3, "expected f32 [T,3,H,W]");
  Rng rng(hash_seed(seed, 0xa06));
  Plan plan = draw_plan(cfg, rng);
  if (plan_is_identity(plan)) return frames;

  const int64_t t = frames.size(0);
  const int h = static_cast<int>(frames.size(2));
  const int w = static_cast<int>(frames.size(3));
  const int64_t hw = static_cast<int64_t>(h) * w;

  // One shared noise field: identical across frames, like the rest of the
  // window-level parameters.
  std::vector<float> noise;
  if (plan.noise) {
    noise.resize(static_cast<size_t>(3 * hw));
    for (auto& v : noise) v = static_cast<float>(rng.normal()) * plan.sigma;
  }

  auto out = frames.detach().to(torch::kFloat32).clone().contiguous();
  auto work = out.add(1.0f).mul(0.5f);  // [0,1]
  float* base = work.data_ptr<float>();

  for (int64_t f = 0; f < t; ++f) {
    float* px = base + f * 3 * hw;
    if (plan.bc) {
      const float scale = 1.f + plan.contrast;
      for (int64_t i = 0; i < 3 * hw; ++i)
        px[i] = std::clamp((px[i] - 0.5f) * scale + 0.5f + plan.brightness, 0.f, 1.f);
    }
    if (plan.gamma) {
      for (int64_t i = 0; i < 3 * hw; ++i) px[i] = std::pow(std::max(px[i], 0.f), plan.g);
    }
    if (plan.hsv) apply_hsv_shift(px, hw, plan.dh, plan.ds, plan.dv);
    if (plan.clahe) {
      for (int c = 0; c < 3; ++c) clahe_channel(px + c * hw, h, w, cfg.clahe_tiles, cfg.clahe_clip);
    }
    if (plan.noise) {
      for (int64_t i = 0; i < 3 * hw; ++i)
        px[i] = std::clamp(px[i] + noise[static_cast<size_t>(i)], 0.f, 1.f);
    }
    if (plan.shuffle) {
      std::vector<float> tmp(static_cast<size_t>(3 * hw));
      std::copy(px, px + 3 * hw, tmp.begin());
      for (int c = 0; c < 3; ++c)
        std::copy(tmp.begin() + plan.perm[static_cast<size_t>(c)] * hw,
                  tmp.begin() + (plan.perm[static_cast<size_t>(c)] + 1) * hw, px + c * hw);
    }
    if (plan.rgb) {
      for (int c = 0; c < 3; ++c)
        for (int64_t i = 0; i < hw; ++i)
          px[c * hw + i] = std::clamp(px[c * hw + i] + plan.shift[static_cast<size_t>(c)], 0.f, 1.f);
    }
  }
  return work.mul(2.0f).sub(1.0f).clamp(-1.0f, 1.0f);
}

}  // namespace emoface
