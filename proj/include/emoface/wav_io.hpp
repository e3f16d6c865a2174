#pragma once

#include <torch/torch.h>

#include <filesystem>

namespace emoface {

struct WavData {
  torch::Tensor samples;  // float32 [N], in [-1, 1]
  int sample_rate = 0;
};

// 16-bit PCM only. Multi-channel input is mixed down to mono.
WavData read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const torch::Tensor& samples, int sample_rate);

// Windowed-sinc resampler (Hann, 32 taps per side). No-op when rates match.
torch::Tensor resample_audio(const torch::Tensor& samples, int rate_in, int rate_out);

// Scales so that max |x| == 1; leaves all-zero input untouched.
torch::Tensor peak_normalize(const torch::Tensor& samples);

}  // namespace emoface
