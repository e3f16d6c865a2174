#include "emoface/align.hpp"

#include <opencv2/imgproc.hpp>

#include <cmath>

#include "emoface/landmarks.hpp"
#include "emoface/wav_io.hpp"

namespace emoface {

torch::Tensor make_template_landmarks(const torch::Tensor& frame_landmarks) {
  auto t = estimate_similarity(anchor_points(frame_landmarks), canonical_anchors());
  return t.apply(frame_landmarks.to(torch::kFloat64)).to(torch::kFloat32);
}

torch::Tensor warp_frame(const torch::Tensor& u8_hwc, const SimilarityTransform& t,
                         int out_h, int out_w) {
  auto src = u8_hwc.contiguous();
  cv::Mat src_mat(static_cast<int>(src.size(0)), static_cast<int>(src.size(1)), CV_8UC3,
                  const_cast<void*>(static_cast<const void*>(src.const_data_ptr())));
  auto m = t.matrix();
  cv::Mat warp = (cv::Mat_<double>(2, 3) << m[0], m[1], m[2], m[3], m[4], m[5]);
  cv::Mat dst;
  cv::warpAffine(src_mat, dst, warp, cv::Size(out_w, out_h), cv::INTER_LINEAR,
                 cv::BORDER_CONSTANT, cv::Scalar(0, 0, 0));
  return torch::from_blob(dst.data, {out_h, out_w, 3}, torch::kUInt8).clone();
}

std::vector<int64_t> resample_frame_indices(int64_t t_in, double fps_in, int64_t t_out,
                                            double fps_out) {
  std::vector<int64_t> idx(static_cast<size_t>(t_out));
  for (int64_t k = 0; k < t_out; ++k) {
    auto src = static_cast<int64_t>(std::llround(k / fps_out * fps_in));
    idx[static_cast<size_t>(k)] = std::clamp<int64_t>(src, 0, t_in - 1);
  }
  return idx;
}

AlignedClip align_clip(const RawClip& raw, const torch::Tensor& template_landmarks,
                       const AlignOptions& opts) {
  TORCH_CHECK(raw.frames.size(0) >= 1, "empty raw clip");
  TORCH_CHECK(raw.fps > 0 && raw.sample_rate > 0, "raw clip missing rates");
  if (!raw.landmarks.defined() || raw.landmarks.numel() == 0)
    throw DataError("clip " + raw.id() + " rejected: no landmarks for frame 0");
  TORCH_CHECK(raw.landmarks.size(0) == raw.frames.size(0),
              "per-frame landmarks required (got ", raw.landmarks.size(0), " for ",
              raw.frames.size(0), " frames)");

  const double video_dur = raw.frames.size(0) / raw.fps;
  const double audio_dur = static_cast<double>(raw.audio.numel()) / raw.sample_rate;
  if (std::abs(video_dur - audio_dur) > opts.av_tolerance_sec + 1e-9)
    throw DataError("clip " + raw.id() + " rejected: audio/video duration mismatch (" +
                    std::to_string(audio_dur) + "s vs " + std::to_string(video_dur) + "s)");

  // Transform from the first frame only; later frames may drift.
  auto transform =
      estimate_similarity(anchor_points(raw.landmarks[0]), anchor_points(template_landmarks));

  auto audio = resample_audio(raw.audio, raw.sample_rate, kSampleRate);
  audio = peak_normalize(audio);
  const int64_t t_out =
      std::min<int64_t>(audio.numel() / kSamplesPerFrame,
                        static_cast<int64_t>(std::floor(video_dur * kFps + 1e-9)));
  if (t_out < 1) throw DataError("clip " + raw.id() + " rejected: shorter than one frame");
  audio = audio.narrow(0, 0, t_out * kSamplesPerFrame).contiguous();

  auto indices = resample_frame_indices(raw.frames.size(0), raw.fps, t_out, kFps);
  auto frames = torch::empty({t_out, kImageSize, kImageSize, 3}, torch::kUInt8);
  auto lms = torch::empty({t_out, kNumLandmarks, 2}, torch::kFloat32);
  for (int64_t k = 0; k < t_out; ++k) {
    auto src = indices[static_cast<size_t>(k)];
    frames[k] = warp_frame(raw.frames[src], transform, kImageSize, kImageSize);
    lms[k] = transform.apply(raw.landmarks[src].to(torch::kFloat64)).to(torch::kFloat32);
  }

  AlignedClip out;
  out.frames = frames;
  out.audio = audio;
  out.landmarks = lms;
  out.actor_id = raw.actor_id;
  out.sentence_id = raw.sentence_id;
  out.emotion = raw.emotion;
  out.src_fps = raw.fps;
  out.src_sample_rate = raw.sample_rate;
  out.validate();
  return out;
}

}  // namespace emoface
