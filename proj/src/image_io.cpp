#include "emoface/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "emoface/common.hpp"

namespace emoface {

torch::Tensor normalize_frames(const torch::Tensor& u8_frames) {
  TORCH_CHECK(u8_frames.scalar_type() == torch::kUInt8, "expected uint8 frames");
  TORCH_CHECK(u8_frames.size(-1) == 3, "expected channel-last RGB input");
  auto f = u8_frames.to(torch::kFloat32).div(127.5).sub(1.0);
  return f.movedim(-1, -3).contiguous();
}

torch::Tensor denormalize_frames(const torch::Tensor& f_frames) {
  TORCH_CHECK(f_frames.size(-3) == 3, "expected channel-first input");
  auto u = f_frames.detach().to(torch::kFloat32).add(1.0).mul(127.5).round().clamp(0, 255);
  return u.to(torch::kUInt8).movedim(-3, -1).contiguous();
}

namespace {

cv::Mat to_bgr_mat(const torch::Tensor& u8_hwc) {
  TORCH_CHECK(u8_hwc.dim() == 3 && u8_hwc.size(2) == 3 && u8_hwc.scalar_type() == torch::kUInt8,
              "expected u8 [H,W,3]");
  auto t = u8_hwc.contiguous();
  cv::Mat rgb(static_cast<int>(t.size(0)), static_cast<int>(t.size(1)), CV_8UC3,
              const_cast<void*>(static_cast<const void*>(t.const_data_ptr())));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

}  // namespace

torch::Tensor read_image_rgb(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw DataError("cannot read image: " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  auto t = torch::from_blob(rgb.data, {rgb.rows, rgb.cols, 3}, torch::kUInt8);
  return t.clone();
}

void write_image_rgb(const std::filesystem::path& path, const torch::Tensor& u8_hwc) {
  if (!cv::imwrite(path.string(), to_bgr_mat(u8_hwc)))
    throw DataError("cannot write image: " + path.string());
}

std::vector<uint8_t> encode_jpeg_rgb(const torch::Tensor& u8_hwc, int quality) {
  std::vector<uint8_t> buf;
  std::vector<int> params = {cv::IMWRITE_JPEG_QUALITY, quality};
  if (!cv::imencode(".jpg", to_bgr_mat(u8_hwc), buf, params))
    throw DataError("jpeg encode failed");
  return buf;
}

}  // namespace emoface
