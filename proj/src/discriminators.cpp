#include "emoface/discriminators.hpp"

#include <sstream>

namespace emoface {

namespace F = torch::nn::functional;

namespace {
torch::Tensor leaky(const torch::Tensor& x) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(0.2));
}

torch::nn::ModuleList make_trunk(const std::vector<int>& channels, int in_ch) {
  torch::nn::ModuleList convs;
  for (int c : channels) {
    convs->push_back(
        torch::nn::Conv2d(torch::nn::Conv2dOptions(in_ch, c, 3).stride(2).padding(1)));
    in_ch = c;
  }
  return convs;
}

int64_t trunk_flat_dim(const std::vector<int>& channels, int image_size) {
  int64_t hw = image_size;
  for (size_t i = 0; i < channels.size(); ++i) hw = (hw + 1) / 2;
  return channels.back() * hw * hw;
}
}  // namespace

FrameCriticImpl::FrameCriticImpl(const ModelConfig& cfg) : cfg_(cfg) {
  convs_ = make_trunk(cfg_.critic_channels, 6);
  register_module("convs", convs_);
  fc1_ = register_module(
      "fc1", torch::nn::Linear(trunk_flat_dim(cfg_.critic_channels, cfg_.image_size),
                               cfg_.critic_fc));
  fc2_ = register_module("fc2", torch::nn::Linear(cfg_.critic_fc, 1));
}

torch::Tensor FrameCriticImpl::forward(const torch::Tensor& frames,
                                       const torch::Tensor& condition) {
  TORCH_CHECK(frames.dim() == 5 && frames.size(2) == 3, "critic expects [B,T,3,H,W] frames");
  TORCH_CHECK(condition.dim() == 4 && condition.size(0) == frames.size(0),
              "condition batch mismatch");
  const int64_t b = frames.size(0), t = frames.size(1);
  auto cond = condition.unsqueeze(1).expand({b, t, 3, condition.size(2), condition.size(3)});
  auto x = torch::cat({frames, cond}, 2).reshape(
      {b * t, 6, frames.size(3), frames.size(4)});
  for (const auto& m : *convs_) x = leaky(m->as<torch::nn::Conv2d>()->forward(x));
  x = leaky(fc1_->forward(x.flatten(1)));
  return fc2_->forward(x).reshape({b, t});  // no activation: Wasserstein critic
}

EmotionClassifierImpl::EmotionClassifierImpl(const ModelConfig& cfg, int num_classes)
    : cfg_(cfg), num_classes_(num_classes) {
  TORCH_CHECK(num_classes == kNumEmotions || num_classes == kNumEmotions + 1,
              "emotion classifier supports 6 or 7 classes");
  convs_ = make_trunk(cfg_.emo_channels, 3);
  register_module("convs", convs_);
  fc1_ = register_module(
      "fc1",
      torch::nn::Linear(trunk_flat_dim(cfg_.emo_channels, cfg_.image_size), cfg_.emo_fc1));
  fc2_ = register_module("fc2", torch::nn::Linear(cfg_.emo_fc1, cfg_.emo_fc2));
  lstm_ = register_module(
      "lstm", torch::nn::LSTM(
                  torch::nn::LSTMOptions(cfg_.emo_fc2, cfg_.emo_lstm_hidden).batch_first(true)));
  head_ = register_module("head", torch::nn::Linear(cfg_.emo_lstm_hidden, num_classes));
}

EmotionPrediction EmotionClassifierImpl::forward(const torch::Tensor& frames) {
  TORCH_CHECK(frames.dim() == 5 && frames.size(2) == 3,
              "emotion classifier expects [B,T,3,H,W]");
  const int64_t b = frames.size(0), t = frames.size(1);
  auto x = frames.reshape({b * t, 3, frames.size(3), frames.size(4)});
  for (const auto& m : *convs_) x = leaky(m->as<torch::nn::Conv2d>()->forward(x));
  x = leaky(fc1_->forward(x.flatten(1)));
  x = leaky(fc2_->forward(x));
  auto seq = x.reshape({b, t, x.size(1)});
  auto out = std::get<0>(lstm_->forward(seq));     // [B,T,H]
  auto last = out.select(1, t - 1);                // last time step
  auto logits = head_->forward(last);
  return {logits, torch::softmax(logits, 1)};
}

std::string EmotionClassifierImpl::trunk_signature() const {
  std::ostringstream os;
  for (int c : cfg_.emo_channels) os << "conv3x3s2:" << c << ";";
  os << "fc:" << cfg_.emo_fc1 << ";fc:" << cfg_.emo_fc2 << ";lstm:" << cfg_.emo_lstm_hidden;
  return os.str();
}

}  // namespace emoface
