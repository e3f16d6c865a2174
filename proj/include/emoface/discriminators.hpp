#pragma once

#include <torch/torch.h>

#include "emoface/net_config.hpp"

namespace emoface {

// Per-frame realness critic, conditioned on the identity image by channel
// concatenation. No output activation and no normalization layers (the
// per-sample gradient penalty forbids batch statistics).
class FrameCriticImpl : public torch::nn::Module {
 public:
  explicit FrameCriticImpl(const ModelConfig& cfg);
  // frames [B,T,3,H,W], condition [B,3,H,W] -> unbounded scores [B,T]
  torch::Tensor forward(const torch::Tensor& frames, const torch::Tensor& condition);

 private:
  ModelConfig cfg_;
  torch::nn::ModuleList convs_;
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
};
TORCH_MODULE(FrameCritic);

struct EmotionPrediction {
  torch::Tensor logits;  // [B,C]
  torch::Tensor probs;   // [B,C], softmax of logits
};

// Video-level emotion classifier: per-frame conv trunk in the frame critic's
// layout (3-channel input, no condition), two FC layers, LSTM over the frame
// sequence, and a softmax head on the last step. num_classes is 7 for the
// discriminator (six emotions + fake) and 6 for the evaluation classifier.
class EmotionClassifierImpl : public torch::nn::Module {
 public:
  EmotionClassifierImpl(const ModelConfig& cfg, int num_classes);
  EmotionPrediction forward(const torch::Tensor& frames);  // [B,T,3,H,W]

  int num_classes() const { return num_classes_; }
  // Layer layout of everything below the class head; lets tests assert the
  // discriminator and the evaluation classifier share topology.
  std::string trunk_signature() const;

 private:
  ModelConfig cfg_;
  int num_classes_;
  torch::nn::ModuleList convs_;
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr}, head_{nullptr};
  torch::nn::LSTM lstm_{nullptr};
};
TORCH_MODULE(EmotionClassifier);

}  // namespace emoface
