#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <optional>

#include "emoface/checkpoint.hpp"
#include "emoface/generator.hpp"
#include "emoface/losses.hpp"
#include "emoface/window.hpp"

namespace emoface {

struct TrainConfig {
  std::string stage = "init";  // init | gan
  int64_t iterations = 100000;

  double lr_gen_init = 1e-4;
  double lr_gen_gan = 1e-5;
  double lr_disc = 1e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.99;

  int batch_init = 8;
  int batch_gan = 4;
  int window_frames = kWindowFrames;  // fixed at 32

  LossWeights weights;
  uint64_t seed = 1;

  int64_t log_interval = 10;       // stdout cadence; CSV gets every iteration
  int64_t val_interval = 1000;
  int64_t sample_interval = 1000;
  int64_t checkpoint_interval = 1000;
  size_t val_max_clips = 8;
  double grad_clip = 10.0;

  std::string perceptual_mode = "file";  // file | tiny | off
  std::optional<std::filesystem::path> perceptual_weights;

  AugmentConfig augment;
  MrmOptions mrm;

  std::string to_json() const;
  static TrainConfig from_json(const std::string& text);
  static TrainConfig from_file(const std::filesystem::path& path);
  void validate() const;
};

struct StepLosses {
  double mrm = 0, perceptual = 0, gen_adv = 0, emo_adv = 0;
  double critic = 0, emo_disc = 0, gp = 0, total_gen = 0;
};

// Owns the three networks, their optimizers, the data loaders, and the
// two-stage schedule. All sampling is derived from (seed, iteration), so an
// interrupted run resumed from a checkpoint continues bit-identically.
class Trainer {
 public:
  Trainer(std::filesystem::path data_root, const Manifest& manifest, ModelConfig model_cfg,
          TrainConfig train_cfg, std::filesystem::path out_dir);

  // Run `n` iterations of the configured stage (capped by cfg.iterations);
  // returns the per-iteration losses in order.
  std::vector<StepLosses> run(int64_t n = -1);

  StepLosses step_init(uint64_t iteration);
  StepLosses step_gan(uint64_t iteration);

  void save(const std::filesystem::path& path) const;
  // Restores nets/optimizers/counters. `start_gan_stage` turns an init-stage
  // checkpoint into the starting point of the GAN stage (iteration reset,
  // generator lr switched).
  void load(const std::filesystem::path& path, bool start_gan_stage = false);

  double validate();

  Generator& generator() { return gen_; }
  FrameCritic& critic() { return critic_; }
  EmotionClassifier& emotion_disc() { return emo_disc_; }
  torch::optim::Adam& generator_opt() { return *opt_gen_; }
  int64_t iteration() const { return iteration_; }
  const std::string& stage() const { return stage_; }
  const TrainConfig& config() const { return tcfg_; }
  WindowLoader& train_loader() { return *train_loader_; }

 private:
  void build_optimizers();
  void set_generator_lr(double lr);
  void append_log(uint64_t iteration, const StepLosses& l, double wall_ms);
  void dump_samples(uint64_t iteration);
  CheckpointData snapshot() const;

  std::filesystem::path data_root_;
  std::filesystem::path out_dir_;
  ModelConfig mcfg_;
  TrainConfig tcfg_;

  Generator gen_{nullptr};
  FrameCritic critic_{nullptr};
  EmotionClassifier emo_disc_{nullptr};
  FeatureExtractor extractor_{nullptr};

  std::unique_ptr<torch::optim::Adam> opt_gen_, opt_critic_, opt_emo_;
  std::unique_ptr<WindowLoader> train_loader_, val_loader_;

  std::string stage_ = "init";
  int64_t iteration_ = 0;
  double best_val_ = std::numeric_limits<double>::infinity();
};

}  // namespace emoface
