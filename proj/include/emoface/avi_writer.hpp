#pragma once

#include <torch/torch.h>

#include <filesystem>

namespace emoface {

// Writes an AVI with an MJPG video stream and an interleaved 16-bit PCM mono
// audio stream. Self-contained RIFF muxing: no timestamps or other varying
// metadata, so identical inputs give byte-identical files.
//
// frames: u8 [T,H,W,3] RGB, audio: f32 [N] in [-1,1] at `sample_rate`.
void write_avi_mjpg(const std::filesystem::path& path, const torch::Tensor& frames, int fps,
                    const torch::Tensor& audio, int sample_rate, int jpeg_quality = 95);

}  // namespace emoface
