#include "emoface/mrm.hpp"

#include "emoface/common.hpp"

namespace emoface {

torch::Tensor MouthRegionMask::weight_map(double base) const {
  return base + (1.0 - base) * weights;
}

MouthRegionMask compute_mrm(const torch::Tensor& mouth_landmarks, const MrmOptions& opts) {
  auto lms = mouth_landmarks.to(torch::kFloat64);
  if (lms.dim() == 2) lms = lms.unsqueeze(0);
  TORCH_CHECK(lms.dim() == 3 && lms.size(2) == 2, "expected [T,K,2] mouth landmarks");
  if (lms.numel() == 0) throw DataError("compute_mrm: empty landmark set");

  // Temporal mean position per point; centroid of those gives the peak.
  auto mean_pts = lms.mean(0);  // [K,2]
  auto centroid = mean_pts.mean(0);
  const double cx = centroid[0].item<double>();
  const double cy = centroid[1].item<double>();

  auto mins = std::get<0>(mean_pts.min(0));
  auto maxs = std::get<0>(mean_pts.max(0));
  const double sx = std::max(opts.min_sigma_px, (maxs[0] - mins[0]).item<double>() / 2.0);
  const double sy = std::max(opts.min_sigma_px, (maxs[1] - mins[1]).item<double>() / 2.0);

  auto ys = torch::arange(opts.size, torch::kFloat64).unsqueeze(1);  // [H,1]
  auto xs = torch::arange(opts.size, torch::kFloat64).unsqueeze(0);  // [1,W]
  auto g = torch::exp(-0.5 * ((xs - cx).pow(2) / (sx * sx) + (ys - cy).pow(2) / (sy * sy)));
  g = g / g.max();

  MouthRegionMask m;
  m.weights = g.to(torch::kFloat32);
  m.cx = cx;
  m.cy = cy;
  m.sigma_x = sx;
  m.sigma_y = sy;
  return m;
}

}  // namespace emoface
