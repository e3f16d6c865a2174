#include "emoface/metrics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

#include "emoface/align.hpp"
#include "emoface/common.hpp"
#include "emoface/landmarks.hpp"

namespace emoface {

namespace F = torch::nn::functional;

namespace {
void check_same_videos(const torch::Tensor& a, const torch::Tensor& b) {
  TORCH_CHECK(a.sizes() == b.sizes(), "metric shape mismatch: ", a.sizes(), " vs ", b.sizes());
  TORCH_CHECK(a.dim() == 4 && a.size(3) == 3 && a.scalar_type() == torch::kUInt8 &&
                  b.scalar_type() == torch::kUInt8,
              "metrics expect u8 [T,H,W,3]");
}
}  // namespace

double psnr_8bit(const torch::Tensor& a, const torch::Tensor& b, double cap_db) {
  check_same_videos(a, b);
  auto fa = a.to(torch::kFloat64);
  auto fb = b.to(torch::kFloat64);
  auto mse = (fa - fb).pow(2).mean({1, 2, 3});  // per frame
  double total = 0;
  for (int64_t t = 0; t < mse.size(0); ++t) {
    const double m = mse[t].item<double>();
    total += m <= 0.0 ? cap_db : std::min(cap_db, 10.0 * std::log10(255.0 * 255.0 / m));
  }
  return total / static_cast<double>(mse.size(0));
}

double ssim_8bit(const torch::Tensor& a, const torch::Tensor& b) {
  check_same_videos(a, b);
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
  constexpr int kWin = 11;
  TORCH_CHECK(a.size(1) >= kWin && a.size(2) >= kWin, "frames smaller than the SSIM window");

  // [T,3,H,W] doubles on the 0..255 scale
  auto fa = a.to(torch::kFloat64).permute({0, 3, 1, 2}).contiguous();
  auto fb = b.to(torch::kFloat64).permute({0, 3, 1, 2}).contiguous();

  auto coords = torch::arange(kWin, torch::kFloat64) - (kWin - 1) / 2.0;
  auto g1 = torch::exp(-coords.pow(2) / (2.0 * 1.5 * 1.5));
  auto kernel2d = torch::outer(g1, g1);
  kernel2d = kernel2d / kernel2d.sum();
  auto kernel = kernel2d.view({1, 1, kWin, kWin}).repeat({3, 1, 1, 1});

  auto filt = [&](const torch::Tensor& x) {
    return F::conv2d(x, kernel, F::Conv2dFuncOptions().groups(3));  // valid
  };
  auto mu_a = filt(fa);
  auto mu_b = filt(fb);
  auto sigma_a = filt(fa * fa) - mu_a * mu_a;
  auto sigma_b = filt(fb * fb) - mu_b * mu_b;
  auto sigma_ab = filt(fa * fb) - mu_a * mu_b;

  auto num = (2 * mu_a * mu_b + kC1) * (2 * sigma_ab + kC2);
  auto den = (mu_a * mu_a + mu_b * mu_b + kC1) * (sigma_a + sigma_b + kC2);
  auto per_frame = (num / den).mean({1, 2, 3});
  return per_frame.mean().item<double>();
}

NlmdResult nlmd(const torch::Tensor& lms_gen, const torch::Tensor& lms_gt,
                const std::optional<torch::Tensor>& valid_gen,
                const std::optional<torch::Tensor>& valid_gt) {
  TORCH_CHECK(lms_gen.sizes() == lms_gt.sizes(), "nlmd landmark shape mismatch");
  TORCH_CHECK(lms_gen.dim() == 3 && lms_gen.size(1) == kNumLandmarks && lms_gen.size(2) == 2,
              "nlmd expects [T,68,2]");
  const int64_t t = lms_gen.size(0);
  auto g = lms_gen.to(torch::kFloat64);
  auto r = lms_gt.to(torch::kFloat64);

  NlmdResult out;
  double total = 0;
  for (int64_t i = 0; i < t; ++i) {
    if (valid_gen && !(*valid_gen)[i].item<bool>()) continue;
    if (valid_gt && !(*valid_gt)[i].item<bool>()) continue;
    const double norm = interocular_distance(r[i]).item<double>();
    TORCH_CHECK(norm > 0, "degenerate inter-ocular distance in ground truth frame ", i);
    total += ((g[i] - r[i]).norm(2, 1).mean() / norm).item<double>();
    ++out.used_frames;
  }
  if (out.used_frames == 0)
    throw DataError("nlmd: no frames with landmarks on both sides");
  out.value = total / static_cast<double>(out.used_frames);
  out.excluded_rate = 1.0 - static_cast<double>(out.used_frames) / static_cast<double>(t);
  out.flagged = out.excluded_rate > 0.2;
  return out;
}

std::vector<ComparisonOutput> align_for_comparison(const std::vector<ComparisonInput>& clips,
                                                   const torch::Tensor& template_landmarks,
                                                   int canvas, int crop_margin) {
  TORCH_CHECK(canvas > 2 * crop_margin, "crop margin leaves no pixels");
  std::vector<ComparisonOutput> out;
  auto target = anchor_points(template_landmarks);
  for (const auto& c : clips) {
    ComparisonOutput o;
    o.id = c.id;
    o.transform = estimate_similarity(anchor_points(c.first_landmarks), target);
    const int64_t t = c.frames.size(0);
    auto warped = torch::empty({t, canvas, canvas, 3}, torch::kUInt8);
    for (int64_t i = 0; i < t; ++i)
      warped[i] = warp_frame(c.frames[i], o.transform, canvas, canvas);
    if (crop_margin > 0)
      warped = warped
                   .narrow(1, crop_margin, canvas - 2 * crop_margin)
                   .narrow(2, crop_margin, canvas - 2 * crop_margin)
                   .contiguous();
    o.frames = warped;
    out.push_back(std::move(o));
  }
  return out;
}

double MetricReport::mean_psnr() const {
  double s = 0;
  for (const auto& r : rows) s += r.psnr;
  return rows.empty() ? 0 : s / static_cast<double>(rows.size());
}

double MetricReport::mean_ssim() const {
  double s = 0;
  for (const auto& r : rows) s += r.ssim;
  return rows.empty() ? 0 : s / static_cast<double>(rows.size());
}

std::optional<double> MetricReport::mean_nlmd() const {
  double s = 0;
  int64_t n = 0;
  for (const auto& r : rows)
    if (r.nlmd) {
      s += r.nlmd->value;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return s / static_cast<double>(n);
}

void MetricReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path.string());
  os << "clip_id,psnr_db,ssim,nlmd,nlmd_excluded_rate,nlmd_flagged\n";
  for (const auto& r : rows) {
    os << r.clip_id << "," << r.psnr << "," << r.ssim << ",";
    if (r.nlmd)
      os << r.nlmd->value << "," << r.nlmd->excluded_rate << "," << (r.nlmd->flagged ? 1 : 0);
    else
      os << ",,";
    os << "\n";
  }
  os << "mean," << mean_psnr() << "," << mean_ssim() << ",";
  if (auto m = mean_nlmd()) os << *m;
  os << ",,\n";
}

void MetricReport::write_json(const std::filesystem::path& path) const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"clip_id", r.clip_id}, {"psnr_db", r.psnr}, {"ssim", r.ssim}};
    if (r.nlmd) {
      j["nlmd"] = r.nlmd->value;
      j["nlmd_excluded_rate"] = r.nlmd->excluded_rate;
      j["nlmd_flagged"] = r.nlmd->flagged;
    }
    rows_j.push_back(j);
  }
  nlohmann::json j{{"clips", rows_j},
                   {"mean_psnr_db", mean_psnr()},
                   {"mean_ssim", mean_ssim()},
                   {"nlmd_normalizer", nlmd_normalizer},
                   {"pixel_convention", pixel_convention}};
  if (auto m = mean_nlmd()) j["mean_nlmd"] = *m;
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path.string());
  os << j.dump(2) << "\n";
}

}  // namespace emoface
