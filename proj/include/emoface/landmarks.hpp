#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <optional>

namespace emoface {

// Index ranges of the standard 68-point scheme used by this pipeline.
inline constexpr int kRightEyeBegin = 36, kRightEyeEnd = 42;  // image-left eye
inline constexpr int kLeftEyeBegin = 42, kLeftEyeEnd = 48;
inline constexpr int kNoseBegin = 27, kNoseEnd = 36;
inline constexpr int kMouthBegin = 48, kMouthEnd = 68;  // 20 points

// lms: [68,2] or [T,68,2]. Results are float64 [..,2].
torch::Tensor right_eye_center(const torch::Tensor& lms);
torch::Tensor left_eye_center(const torch::Tensor& lms);
torch::Tensor nose_center(const torch::Tensor& lms);
torch::Tensor mouth_points(const torch::Tensor& lms);  // [...,20,2]

// The 3 alignment anchors (right eye, left eye, nose) as a [3,2] tensor.
// For [T,68,2] input the temporal mean is taken first.
torch::Tensor anchor_points(const torch::Tensor& lms);

// Per-frame inter-ocular distance, [T] (or scalar for one frame).
torch::Tensor interocular_distance(const torch::Tensor& lms);

// Canonical anchor positions in the 128x128 aligned frame; templates are
// constructed so an actor's eye/nose means land exactly here.
torch::Tensor canonical_anchors();

// Source of landmarks for raw material. The paper's pipeline assumes some
// face-landmark detector; here any provider can be plugged in. The file-based
// implementation reads per-clip sidecar arrays produced offline.
class LandmarkSource {
 public:
  virtual ~LandmarkSource() = default;
  // Returns [T,68,2] float32 landmarks for the clip at `clip_id`, or nullopt
  // if detection/lookup failed.
  virtual std::optional<torch::Tensor> landmarks_for(const std::string& clip_id) = 0;
};

// Reads <dir>/<clip_id>.lms.ten (a single [T,68,2] tensor).
class FileLandmarkSource : public LandmarkSource {
 public:
  explicit FileLandmarkSource(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::optional<torch::Tensor> landmarks_for(const std::string& clip_id) override;

 private:
  std::filesystem::path dir_;
};

}  // namespace emoface
