#pragma once

#include <torch/torch.h>

#include "emoface/discriminators.hpp"
#include "emoface/feature_extractor.hpp"

namespace emoface {

struct LossWeights {
  double alpha = 100.0;   // MRM L1
  double beta = 1.0;      // perceptual
  double gamma = 0.01;    // frame GAN term
  double delta = 0.001;   // emotion GAN term
  double gp_lambda = 10.0;
};

// Mean over every element of weight(p) * |gen - gt|. gen/gt: [...,T,3,H,W] or
// [T,3,H,W]; weights: [H,W] or [B,H,W], broadcast over frames and channels.
torch::Tensor mrm_l1(const torch::Tensor& gen, const torch::Tensor& gt,
                     const torch::Tensor& weights);

// Sum over taps of MSE between feature stacks, frames batched together.
// gen/gt: [N,3,H,W] or [B,T,3,H,W] in [-1,1].
torch::Tensor perceptual_loss(const torch::Tensor& gen, const torch::Tensor& gt,
                              FeatureExtractor& extractor);

// mean(fake) - mean(real) + lambda * gp
torch::Tensor wgan_critic_loss(const torch::Tensor& real_scores,
                               const torch::Tensor& fake_scores, const torch::Tensor& gp,
                               double gp_lambda);

// Mean over frames of (||d critic / d xhat||_2 - 1)^2 at xhat = u*real +
// (1-u)*fake, u ~ U(0,1) per frame. Differentiable w.r.t. critic parameters.
torch::Tensor gradient_penalty(FrameCritic& critic, const torch::Tensor& real,
                               const torch::Tensor& fake, const torch::Tensor& condition,
                               Rng& rng);

struct EmotionGanLosses {
  torch::Tensor d_loss;  // CE(real -> true label) + CE(fake -> fake class)
  torch::Tensor g_loss;  // CE(fake -> conditioned label)
};

// Posteriors are 7-class probability rows ([B,7]); labels i64 [B] in [0,5].
EmotionGanLosses emotion_gan_losses(const torch::Tensor& posterior_real,
                                    const torch::Tensor& posterior_fake,
                                    const torch::Tensor& true_labels,
                                    const torch::Tensor& conditioned_labels);

// Eq.-style weighted sum alpha*l1 + beta*perc + gamma*j_fd + delta*j_ed.
// Throws TrainAbort naming the first non-finite component.
torch::Tensor generator_objective(const torch::Tensor& l1, const torch::Tensor& perc,
                                  const torch::Tensor& j_fd, const torch::Tensor& j_ed,
                                  const LossWeights& w);
double generator_objective(double l1, double perc, double j_fd, double j_ed,
                           const LossWeights& w);

}  // namespace emoface
