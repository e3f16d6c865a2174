#include "emoface/encoders.hpp"

namespace emoface {

namespace F = torch::nn::functional;

namespace {
constexpr double kLeakySlope = 0.2;

torch::Tensor leaky(const torch::Tensor& x) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(kLeakySlope));
}

torch::Tensor downsample_half(const torch::Tensor& x) {
  return F::interpolate(
      x, F::InterpolateFuncOptions()
             .size(std::vector<int64_t>{x.size(2) / 2, x.size(3) / 2})
             .mode(torch::kNearest));
}
}  // namespace

SpeechEncoderImpl::SpeechEncoderImpl(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  int in_ch = 1;
  for (size_t i = 0; i < cfg_.speech_filters.size(); ++i) {
    const int k = cfg_.speech_kernels[i];
    convs_->push_back(torch::nn::Conv1d(torch::nn::Conv1dOptions(in_ch, cfg_.speech_filters[i], k)
                                            .stride(cfg_.speech_strides[i])
                                            .padding((k - 1) / 2)));
    in_ch = cfg_.speech_filters[i];
  }
  register_module("convs", convs_);
  const int ctx_width = cfg_.speech_filters.back() * cfg_.context_decimation;
  fc_ = register_module("fc", torch::nn::Linear(ctx_width, cfg_.speech_fc));
  lstm_ = register_module(
      "lstm", torch::nn::LSTM(torch::nn::LSTMOptions(cfg_.speech_fc, cfg_.speech_lstm_hidden)
                                  .num_layers(cfg_.speech_lstm_layers)
                                  .batch_first(true)));
}

torch::Tensor SpeechEncoderImpl::forward(const torch::Tensor& audio, bool* padded) {
  TORCH_CHECK(audio.dim() == 2, "speech encoder expects [B,N] audio");
  TORCH_CHECK(audio.size(1) > 0, "empty audio");
  auto x = audio;
  const int64_t rem = x.size(1) % kSamplesPerFrame;
  if (padded) *padded = rem != 0;
  if (rem != 0) x = F::pad(x, F::PadFuncOptions({0, kSamplesPerFrame - rem}));

  x = x.unsqueeze(1);  // [B,1,N]
  for (const auto& m : *convs_) x = leaky(m->as<torch::nn::Conv1d>()->forward(x));

  // Context layer: the conv stack yields 5 steps per output frame; group them
  // and concatenate the 5 feature vectors around each kept index (the +-2
  // window tiles the sequence exactly), decimating 125 -> 25 steps/s.
  const int64_t dec = cfg_.context_decimation;
  const int64_t t = x.size(2) / dec;
  TORCH_CHECK(x.size(2) == t * dec, "conv output length not divisible by decimation");
  x = x.view({x.size(0), x.size(1), t, dec}).permute({0, 2, 3, 1}).reshape(
      {x.size(0), t, dec * cfg_.speech_filters.back()});

  x = leaky(fc_->forward(x));
  return std::get<0>(lstm_->forward(x));  // [B,T,H]
}

ImageEncoderImpl::ImageEncoderImpl(const ModelConfig& cfg) : cfg_(cfg) {
  int in_ch = 3;
  for (size_t i = 0; i < cfg_.image_channels.size(); ++i) {
    const bool bottleneck = i + 1 == cfg_.image_channels.size();
    const int k = bottleneck ? 4 : 3;
    convs_->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(in_ch, cfg_.image_channels[i], k)
                                            .padding(bottleneck ? 0 : 1)));
    in_ch = cfg_.image_channels[i];
  }
  register_module("convs", convs_);
}

ImageEncoding ImageEncoderImpl::forward(const torch::Tensor& image) {
  TORCH_CHECK(image.dim() == 4 && image.size(1) == 3 && image.size(2) == cfg_.image_size &&
                  image.size(3) == cfg_.image_size,
              "image encoder expects [B,3,128,128], got ", image.sizes());
  ImageEncoding enc;
  auto x = image;
  const size_t n = cfg_.image_channels.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    x = leaky(convs_[i]->as<torch::nn::Conv2d>()->forward(x));
    x = downsample_half(x);
    enc.skips.push_back(x);
  }
  x = leaky(convs_[n - 1]->as<torch::nn::Conv2d>()->forward(x));  // [B,C,1,1]
  enc.bottleneck = x.flatten(1);
  return enc;
}

EmotionEncoderImpl::EmotionEncoderImpl(const ModelConfig& cfg) {
  fc1_ = register_module("fc1", torch::nn::Linear(kNumEmotions, cfg.emotion_fc1));
  fc2_ = register_module("fc2", torch::nn::Linear(cfg.emotion_fc1, cfg.emotion_fc2));
}

torch::Tensor EmotionEncoderImpl::forward(const torch::Tensor& labels, int64_t t) {
  TORCH_CHECK(labels.dim() == 1, "emotion encoder expects i64 [B] labels");
  TORCH_CHECK(
      labels.ge(0).all().item<bool>() && labels.lt(kNumEmotions).all().item<bool>(),
      "emotion label out of range [0,5]");
  auto one_hot = torch::one_hot(labels, kNumEmotions).to(fc1_->weight.scalar_type());
  auto e = leaky(fc2_->forward(leaky(fc1_->forward(one_hot))));  // [B,D]
  return e.unsqueeze(1).expand({e.size(0), t, e.size(1)});
}

NoiseEncoderImpl::NoiseEncoderImpl(const ModelConfig& cfg) {
  lstm_ = register_module(
      "lstm", torch::nn::LSTM(
                  torch::nn::LSTMOptions(cfg.noise_dim, cfg.noise_lstm_hidden).batch_first(true)));
}

torch::Tensor NoiseEncoderImpl::forward(const torch::Tensor& noise) {
  TORCH_CHECK(noise.dim() == 3, "noise encoder expects [B,T,Z]");
  return std::get<0>(lstm_->forward(noise));
}

}  // namespace emoface
