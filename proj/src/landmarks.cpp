#include "emoface/landmarks.hpp"

#include "emoface/common.hpp"
#include "emoface/tensor_file.hpp"

namespace emoface {
namespace {

torch::Tensor region_mean(const torch::Tensor& lms, int begin, int end) {
  auto pts = lms.to(torch::kFloat64).narrow(-2, begin, end - begin);
  return pts.mean(-2);
}

}  // namespace

torch::Tensor right_eye_center(const torch::Tensor& lms) {
  return region_mean(lms, kRightEyeBegin, kRightEyeEnd);
}
torch::Tensor left_eye_center(const torch::Tensor& lms) {
  return region_mean(lms, kLeftEyeBegin, kLeftEyeEnd);
}
torch::Tensor nose_center(const torch::Tensor& lms) {
  return region_mean(lms, kNoseBegin, kNoseEnd);
}
torch::Tensor mouth_points(const torch::Tensor& lms) {
  return lms.narrow(-2, kMouthBegin, kMouthEnd - kMouthBegin);
}

torch::Tensor anchor_points(const torch::Tensor& lms) {
  auto l = lms.to(torch::kFloat64);
  if (l.dim() == 3) l = l.mean(0);  // temporal mean
  TORCH_CHECK(l.dim() == 2 && l.size(0) == kNumLandmarks && l.size(1) == 2,
              "expected [68,2] or [T,68,2] landmarks");
  return torch::stack({right_eye_center(l), left_eye_center(l), nose_center(l)});
}

torch::Tensor interocular_distance(const torch::Tensor& lms) {
  auto r = right_eye_center(lms);
  auto l = left_eye_center(lms);
  return (l - r).norm(2, -1);
}

torch::Tensor canonical_anchors() {
  return torch::tensor({{44.0, 52.0}, {84.0, 52.0}, {64.0, 84.0}}, torch::kFloat64);
}

std::optional<torch::Tensor> FileLandmarkSource::landmarks_for(const std::string& clip_id) {
  auto path = dir_ / (clip_id + ".lms.ten");
  if (!std::filesystem::exists(path)) return std::nullopt;
  auto t = load_tensor(path).to(torch::kFloat32);
  if (t.dim() == 2) t = t.unsqueeze(0);
  if (t.dim() != 3 || t.size(1) != kNumLandmarks || t.size(2) != 2) return std::nullopt;
  return t;
}

}  // namespace emoface
