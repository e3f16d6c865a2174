#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emoface/similarity.hpp"

namespace emoface {

inline constexpr double kPsnrCapDb = 100.0;  // reported for zero MSE

// Both metrics run on denormalized 8-bit frames (u8 [T,H,W,3]), matching how
// cross-system comparisons are conventionally made.
double psnr_8bit(const torch::Tensor& a, const torch::Tensor& b, double cap_db = kPsnrCapDb);

// Wang et al. SSIM: 11x11 Gaussian window sigma 1.5, C1=(0.01*255)^2,
// C2=(0.03*255)^2, valid windows, mean over channels/space then frames.
double ssim_8bit(const torch::Tensor& a, const torch::Tensor& b);

struct NlmdResult {
  double value = 0;
  int64_t used_frames = 0;
  double excluded_rate = 0;
  bool flagged = false;  // > 20% of frames dropped
};

// Mean over frames and the 68 points of the landmark distance, normalized by
// the ground-truth frame's inter-ocular distance. Frames invalid on either
// side are dropped pairwise. Throws when nothing is left.
NlmdResult nlmd(const torch::Tensor& lms_gen, const torch::Tensor& lms_gt,
                const std::optional<torch::Tensor>& valid_gen = std::nullopt,
                const std::optional<torch::Tensor>& valid_gt = std::nullopt);

struct ComparisonInput {
  torch::Tensor frames;           // u8 [T,H,W,3], any H/W
  torch::Tensor first_landmarks;  // [68,2] in that clip's coords
  std::string id;
};

struct ComparisonOutput {
  torch::Tensor frames;  // u8 [T,S,S,3], common size
  SimilarityTransform transform;
  std::string id;
};

// Maps heterogeneous clips onto one template (eye/nose anchors) and crops
// them to a common size so metrics compare like with like.
std::vector<ComparisonOutput> align_for_comparison(const std::vector<ComparisonInput>& clips,
                                                   const torch::Tensor& template_landmarks,
                                                   int canvas = 128, int crop_margin = 0);

struct ClipMetricRow {
  std::string clip_id;
  double psnr = 0, ssim = 0;
  std::optional<NlmdResult> nlmd;
};

struct MetricReport {
  std::vector<ClipMetricRow> rows;
  std::string nlmd_normalizer = "ground-truth inter-ocular distance (per frame)";
  std::string pixel_convention = "8-bit round((x+1)*127.5)";

  double mean_psnr() const;
  double mean_ssim() const;
  std::optional<double> mean_nlmd() const;
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;
};

}  // namespace emoface
