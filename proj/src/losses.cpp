#include "emoface/losses.hpp"

#include <cmath>

namespace emoface {

torch::Tensor mrm_l1(const torch::Tensor& gen, const torch::Tensor& gt,
                     const torch::Tensor& weights) {
  TORCH_CHECK(gen.sizes() == gt.sizes(), "mrm_l1 shape mismatch: ", gen.sizes(), " vs ",
              gt.sizes());
  TORCH_CHECK(weights.size(-1) == gen.size(-1) && weights.size(-2) == gen.size(-2),
              "mask resolution does not match frames");
  auto w = weights;
  if (gen.dim() == 5 && w.dim() == 3) w = w.view({w.size(0), 1, 1, w.size(1), w.size(2)});
  return (w * (gen - gt).abs()).mean();
}

torch::Tensor perceptual_loss(const torch::Tensor& gen, const torch::Tensor& gt,
                              FeatureExtractor& extractor) {
  TORCH_CHECK(extractor, "perceptual loss requires a feature extractor");
  TORCH_CHECK(gen.sizes() == gt.sizes(), "perceptual_loss shape mismatch");
  auto flatten = [](const torch::Tensor& x) {
    return x.dim() == 5 ? x.reshape({-1, x.size(2), x.size(3), x.size(4)}) : x;
  };
  auto fg = extractor->forward(flatten(gen));
  auto fr = [&] {
    // Ground-truth features carry no gradient.
    torch::NoGradGuard no_grad;
    return extractor->forward(flatten(gt));
  }();
  auto loss = torch::zeros({}, gen.options());
  for (size_t i = 0; i < fg.size(); ++i) loss = loss + torch::mse_loss(fg[i], fr[i]);
  return loss;
}

torch::Tensor wgan_critic_loss(const torch::Tensor& real_scores,
                               const torch::Tensor& fake_scores, const torch::Tensor& gp,
                               double gp_lambda) {
  return fake_scores.mean() - real_scores.mean() + gp_lambda * gp;
}

torch::Tensor gradient_penalty(FrameCritic& critic, const torch::Tensor& real,
                               const torch::Tensor& fake, const torch::Tensor& condition,
                               Rng& rng) {
  TORCH_CHECK(real.sizes() == fake.sizes(), "gradient_penalty shape mismatch");
  const int64_t b = real.size(0), t = real.size(1);
  auto u = torch::empty({b, t, 1, 1, 1}, real.options());
  {
    float* p = u.data_ptr<float>();
    for (int64_t i = 0; i < b * t; ++i) p[i] = static_cast<float>(rng.uniform());
  }
  auto xhat = (u * real.detach() + (1 - u) * fake.detach()).requires_grad_(true);
  auto scores = critic->forward(xhat, condition.detach());
  auto grads = torch::autograd::grad({scores.sum()}, {xhat},
                                     /*grad_outputs=*/{}, /*retain_graph=*/true,
                                     /*create_graph=*/true)[0];
  auto norms = grads.reshape({b * t, -1}).norm(2, 1);
  return (norms - 1).pow(2).mean();
}

EmotionGanLosses emotion_gan_losses(const torch::Tensor& posterior_real,
                                    const torch::Tensor& posterior_fake,
                                    const torch::Tensor& true_labels,
                                    const torch::Tensor& conditioned_labels) {
  TORCH_CHECK(posterior_real.size(1) == kNumEmotions + 1 &&
                  posterior_fake.size(1) == kNumEmotions + 1,
              "expected 7-class posteriors");
  TORCH_CHECK(true_labels.ge(0).all().item<bool>() &&
                  true_labels.lt(kNumEmotions).all().item<bool>() &&
                  conditioned_labels.ge(0).all().item<bool>() &&
                  conditioned_labels.lt(kNumEmotions).all().item<bool>(),
              "emotion labels must lie in [0,5]");
  auto ce = [](const torch::Tensor& probs, const torch::Tensor& labels) {
    auto picked = probs.gather(1, labels.view({-1, 1})).clamp_min(1e-12);
    return -picked.log().mean();
  };
  auto fake_labels =
      torch::full_like(true_labels, static_cast<int64_t>(kFakeClass));
  EmotionGanLosses out;
  out.d_loss = ce(posterior_real, true_labels) + ce(posterior_fake, fake_labels);
  out.g_loss = ce(posterior_fake, conditioned_labels);
  return out;
}

namespace {
void check_finite(const torch::Tensor& v, const char* name) {
  if (!torch::isfinite(v).all().item<bool>())
    throw TrainAbort(std::string("non-finite loss component: ") + name);
}
}  // namespace

torch::Tensor generator_objective(const torch::Tensor& l1, const torch::Tensor& perc,
                                  const torch::Tensor& j_fd, const torch::Tensor& j_ed,
                                  const LossWeights& w) {
  check_finite(l1, "mrm_l1");
  check_finite(perc, "perceptual");
  check_finite(j_fd, "frame_gan");
  check_finite(j_ed, "emotion_gan");
  return w.alpha * l1 + w.beta * perc + w.gamma * j_fd + w.delta * j_ed;
}

double generator_objective(double l1, double perc, double j_fd, double j_ed,
                           const LossWeights& w) {
  for (auto [v, name] : {std::pair{l1, "mrm_l1"}, {perc, "perceptual"}, {j_fd, "frame_gan"},
                         {j_ed, "emotion_gan"}}) {
    if (!std::isfinite(v)) throw TrainAbort(std::string("non-finite loss component: ") + name);
  }
  return w.alpha * l1 + w.beta * perc + w.gamma * j_fd + w.delta * j_ed;
}

}  // namespace emoface
