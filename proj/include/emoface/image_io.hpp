#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <vector>

namespace emoface {

// Frame conventions used throughout:
//   - storage / metrics side: uint8 tensors shaped [H,W,3] or [T,H,W,3], RGB
//   - network side: float32 tensors shaped [3,H,W] or [T,3,H,W] in [-1,1]
// Normalization is x/127.5 - 1 and its inverse with round + clamp.

torch::Tensor normalize_frames(const torch::Tensor& u8_frames);   // u8 [...,H,W,3] -> f32 [...,3,H,W]
torch::Tensor denormalize_frames(const torch::Tensor& f_frames);  // f32 [...,3,H,W] -> u8 [...,H,W,3]

torch::Tensor read_image_rgb(const std::filesystem::path& path);  // u8 [H,W,3]
void write_image_rgb(const std::filesystem::path& path, const torch::Tensor& u8_hwc);

// JPEG bytes of one u8 [H,W,3] RGB frame (quality 0..100); used by the AVI muxer.
std::vector<uint8_t> encode_jpeg_rgb(const torch::Tensor& u8_hwc, int quality);

}  // namespace emoface
