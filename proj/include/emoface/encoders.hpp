#pragma once

#include <torch/torch.h>

#include "emoface/net_config.hpp"

namespace emoface {

// Speech waveform -> one embedding per video frame. Five strided 1-D convs
// (125 steps/s at 8 kHz), a decimating context layer down to 25 steps/s, one
// FC, then two stacked LSTMs. Exact rate law: n*320 samples -> n steps.
class SpeechEncoderImpl : public torch::nn::Module {
 public:
  explicit SpeechEncoderImpl(const ModelConfig& cfg);
  // audio: [B,N]; returns [B,T,D]. N not a multiple of 320 is zero-padded on
  // the right; `padded` reports that when non-null.
  torch::Tensor forward(const torch::Tensor& audio, bool* padded = nullptr);

 private:
  ModelConfig cfg_;
  torch::nn::ModuleList convs_;
  torch::nn::Linear fc_{nullptr};
  torch::nn::LSTM lstm_{nullptr};
};
TORCH_MODULE(SpeechEncoder);

struct ImageEncoding {
  torch::Tensor bottleneck;          // [B,D]
  std::vector<torch::Tensor> skips;  // five maps, resolutions 64..4
};

// Six conv layers; each of the first five is followed by x0.5 nearest
// neighbor downsampling (convolutions themselves are stride 1), the sixth is
// a valid 4x4 conv collapsing 4x4 -> 1x1.
class ImageEncoderImpl : public torch::nn::Module {
 public:
  explicit ImageEncoderImpl(const ModelConfig& cfg);
  ImageEncoding forward(const torch::Tensor& image);  // [B,3,128,128]

 private:
  ModelConfig cfg_;
  torch::nn::ModuleList convs_;
};
TORCH_MODULE(ImageEncoder);

// One-hot label through two FC+LeakyReLU layers, replicated T times.
class EmotionEncoderImpl : public torch::nn::Module {
 public:
  explicit EmotionEncoderImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& labels, int64_t t);  // i64 [B] -> [B,T,D]

 private:
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
};
TORCH_MODULE(EmotionEncoder);

// Per-frame standard-normal vectors through a single LSTM; models motion
// uncorrelated with speech/image/emotion.
class NoiseEncoderImpl : public torch::nn::Module {
 public:
  explicit NoiseEncoderImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& noise);  // [B,T,Z] -> [B,T,H]

 private:
  torch::nn::LSTM lstm_{nullptr};
};
TORCH_MODULE(NoiseEncoder);

}  // namespace emoface
