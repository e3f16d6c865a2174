#include "emoface/trainer.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "emoface/image_io.hpp"

namespace emoface {

using nlohmann::json;

std::string TrainConfig::to_json() const {
  json j{{"stage", stage},
         {"iterations", iterations},
         {"lr_gen_init", lr_gen_init},
         {"lr_gen_gan", lr_gen_gan},
         {"lr_disc", lr_disc},
         {"adam_beta1", adam_beta1},
         {"adam_beta2", adam_beta2},
         {"batch_init", batch_init},
         {"batch_gan", batch_gan},
         {"window_frames", window_frames},
         {"alpha", weights.alpha},
         {"beta", weights.beta},
         {"gamma", weights.gamma},
         {"delta", weights.delta},
         {"gp_lambda", weights.gp_lambda},
         {"seed", seed},
         {"log_interval", log_interval},
         {"val_interval", val_interval},
         {"sample_interval", sample_interval},
         {"checkpoint_interval", checkpoint_interval},
         {"val_max_clips", val_max_clips},
         {"grad_clip", grad_clip},
         {"perceptual_mode", perceptual_mode},
         {"perceptual_weights",
          perceptual_weights ? perceptual_weights->string() : std::string()},
         {"augment_enabled", augment.p_brightness_contrast > 0 || augment.p_gamma > 0 ||
                                 augment.p_hsv > 0 || augment.p_clahe > 0 ||
                                 augment.p_gauss_noise > 0 || augment.p_channel_shuffle > 0 ||
                                 augment.p_rgb_shift > 0},
         {"mrm_min_sigma", mrm.min_sigma_px},
         {"mrm_base_weight", mrm.base_weight}};
  return j.dump(2);
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  TrainConfig c;
  c.stage = j.value("stage", c.stage);
  c.iterations = j.value("iterations", c.iterations);
  c.lr_gen_init = j.value("lr_gen_init", c.lr_gen_init);
  c.lr_gen_gan = j.value("lr_gen_gan", c.lr_gen_gan);
  c.lr_disc = j.value("lr_disc", c.lr_disc);
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.batch_init = j.value("batch_init", c.batch_init);
  c.batch_gan = j.value("batch_gan", c.batch_gan);
  c.window_frames = j.value("window_frames", c.window_frames);
  c.weights.alpha = j.value("alpha", c.weights.alpha);
  c.weights.beta = j.value("beta", c.weights.beta);
  c.weights.gamma = j.value("gamma", c.weights.gamma);
  c.weights.delta = j.value("delta", c.weights.delta);
  c.weights.gp_lambda = j.value("gp_lambda", c.weights.gp_lambda);
  c.seed = j.value("seed", c.seed);
  c.log_interval = j.value("log_interval", c.log_interval);
  c.val_interval = j.value("val_interval", c.val_interval);
  c.sample_interval = j.value("sample_interval", c.sample_interval);
  c.checkpoint_interval = j.value("checkpoint_interval", c.checkpoint_interval);
  c.val_max_clips = j.value("val_max_clips", c.val_max_clips);
  c.grad_clip = j.value("grad_clip", c.grad_clip);
  c.perceptual_mode = j.value("perceptual_mode", c.perceptual_mode);
  auto pw = j.value("perceptual_weights", std::string());
  if (!pw.empty()) c.perceptual_weights = pw;
  if (!j.value("augment_enabled", true)) c.augment = AugmentConfig::disabled();
  c.mrm.min_sigma_px = j.value("mrm_min_sigma", c.mrm.min_sigma_px);
  c.mrm.base_weight = j.value("mrm_base_weight", c.mrm.base_weight);
  c.validate();
  return c;
}

TrainConfig TrainConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open train config: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

void TrainConfig::validate() const {
  if (stage != "init" && stage != "gan") throw ConfigError("stage must be init or gan");
  if (iterations <= 0) throw ConfigError("iterations must be positive");
  if (lr_gen_init <= 0 || lr_gen_gan <= 0 || lr_disc <= 0)
    throw ConfigError("learning rates must be positive");
  if (batch_init < 1 || batch_gan < 1) throw ConfigError("batch sizes must be >= 1");
  if (window_frames != kWindowFrames)
    throw ConfigError("window_frames is fixed at 32 for training");
  if (weights.alpha < 0 || weights.beta < 0 || weights.gamma < 0 || weights.delta < 0 ||
      weights.gp_lambda < 0)
    throw ConfigError("loss weights must be non-negative");
}

namespace {

double clip_and_norm(const std::vector<torch::Tensor>& params, double max_norm) {
  return torch::nn::utils::clip_grad_norm_(params, max_norm);
}

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw TrainAbort(std::string("non-finite loss component: ") + name);
}

}  // namespace

Trainer::Trainer(std::filesystem::path data_root, const Manifest& manifest, ModelConfig model_cfg,
                 TrainConfig train_cfg, std::filesystem::path out_dir)
    : data_root_(std::move(data_root)),
      out_dir_(std::move(out_dir)),
      mcfg_(std::move(model_cfg)),
      tcfg_(std::move(train_cfg)) {
  mcfg_.validate();
  tcfg_.validate();
  stage_ = tcfg_.stage;
  std::filesystem::create_directories(out_dir_);

  auto train_entries = manifest.split_entries(Split::kTrain);
  if (train_entries.empty()) throw DataError("manifest has an empty train split");
  WindowOptions wopts{tcfg_.augment, tcfg_.mrm};
  train_loader_ = std::make_unique<WindowLoader>(data_root_, train_entries, wopts, tcfg_.seed);
  auto val_entries = manifest.split_entries(Split::kVal);
  if (!val_entries.empty()) {
    WindowOptions vopts{AugmentConfig::disabled(), tcfg_.mrm};
    val_loader_ = std::make_unique<WindowLoader>(data_root_, val_entries, vopts, tcfg_.seed);
  }

  // Seeded construction order fixes the full parameter init.
  torch::manual_seed(static_cast<int64_t>(tcfg_.seed));
  gen_ = Generator(mcfg_);
  critic_ = FrameCritic(mcfg_);
  emo_disc_ = EmotionClassifier(mcfg_, kNumEmotions + 1);
  extractor_ = make_feature_extractor(tcfg_.perceptual_mode, tcfg_.perceptual_weights);
  build_optimizers();
}

void Trainer::build_optimizers() {
  auto betas = std::make_tuple(tcfg_.adam_beta1, tcfg_.adam_beta2);
  const double lr_gen = stage_ == "init" ? tcfg_.lr_gen_init : tcfg_.lr_gen_gan;
  opt_gen_ = std::make_unique<torch::optim::Adam>(
      gen_->parameters(), torch::optim::AdamOptions(lr_gen).betas(betas));
  opt_critic_ = std::make_unique<torch::optim::Adam>(
      critic_->parameters(), torch::optim::AdamOptions(tcfg_.lr_disc).betas(betas));
  opt_emo_ = std::make_unique<torch::optim::Adam>(
      emo_disc_->parameters(), torch::optim::AdamOptions(tcfg_.lr_disc).betas(betas));
}

void Trainer::set_generator_lr(double lr) {
  for (auto& group : opt_gen_->param_groups())
    static_cast<torch::optim::AdamOptions&>(group.options()).lr(lr);
}

StepLosses Trainer::step_init(uint64_t iteration) {
  auto batch = train_loader_->batch(iteration, tcfg_.batch_init);
  auto noise = torch::stack([&] {
    std::vector<torch::Tensor> ns;
    for (int b = 0; b < tcfg_.batch_init; ++b)
      ns.push_back(draw_noise(kWindowFrames, mcfg_.noise_dim,
                              hash_seed(tcfg_.seed, iteration, 2000 + b)));
    return ns;
  }());

  auto gen_frames = gen_->forward(batch.audio, batch.condition, batch.emotion, noise);
  auto l1 = mrm_l1(gen_frames, batch.frames, batch.mrm);
  auto perc = extractor_ ? perceptual_loss(gen_frames, batch.frames, extractor_)
                         : torch::zeros({}, gen_frames.options());
  auto zero = torch::zeros({}, gen_frames.options());
  auto obj = generator_objective(l1, perc, zero, zero, tcfg_.weights);

  opt_gen_->zero_grad();
  obj.backward();
  clip_and_norm(gen_->parameters(), tcfg_.grad_clip);
  opt_gen_->step();

  StepLosses out;
  out.mrm = l1.item<double>();
  out.perceptual = perc.item<double>();
  out.total_gen = obj.item<double>();
  check_finite(out.mrm, "mrm_l1");
  check_finite(out.perceptual, "perceptual");
  check_finite(out.total_gen, "generator_objective");
  return out;
}

StepLosses Trainer::step_gan(uint64_t iteration) {
  auto batch = train_loader_->batch(iteration, tcfg_.batch_gan);
  auto noise = torch::stack([&] {
    std::vector<torch::Tensor> ns;
    for (int b = 0; b < tcfg_.batch_gan; ++b)
      ns.push_back(draw_noise(kWindowFrames, mcfg_.noise_dim,
                              hash_seed(tcfg_.seed, iteration, 2000 + b)));
    return ns;
  }());

  auto gen_frames = gen_->forward(batch.audio, batch.condition, batch.emotion, noise);
  auto fake_detached = gen_frames.detach();
  StepLosses out;

  // 1) frame critic (WGAN-GP)
  {
    auto real_scores = critic_->forward(batch.frames, batch.condition);
    auto fake_scores = critic_->forward(fake_detached, batch.condition);
    Rng gp_rng(hash_seed(tcfg_.seed, iteration, 3000));
    auto gp = gradient_penalty(critic_, batch.frames, fake_detached, batch.condition, gp_rng);
    auto c_loss = wgan_critic_loss(real_scores, fake_scores, gp, tcfg_.weights.gp_lambda);
    opt_critic_->zero_grad();
    c_loss.backward();
    clip_and_norm(critic_->parameters(), tcfg_.grad_clip);
    opt_critic_->step();
    out.critic = c_loss.item<double>();
    out.gp = gp.item<double>();
    check_finite(out.critic, "critic_loss");
    check_finite(out.gp, "gradient_penalty");
  }

  // 2) emotion discriminator (CE with the fake class)
  {
    auto pred_real = emo_disc_->forward(batch.frames);
    auto pred_fake = emo_disc_->forward(fake_detached);
    auto losses = emotion_gan_losses(pred_real.probs, pred_fake.probs, batch.emotion,
                                     batch.emotion);
    opt_emo_->zero_grad();
    losses.d_loss.backward();
    clip_and_norm(emo_disc_->parameters(), tcfg_.grad_clip);
    opt_emo_->step();
    out.emo_disc = losses.d_loss.item<double>();
    check_finite(out.emo_disc, "emotion_disc_loss");
  }

  // 3) generator (full objective against the just-updated discriminators)
  {
    auto l1 = mrm_l1(gen_frames, batch.frames, batch.mrm);
    auto perc = extractor_ ? perceptual_loss(gen_frames, batch.frames, extractor_)
                           : torch::zeros({}, gen_frames.options());
    auto zero = torch::zeros({}, gen_frames.options());
    auto j_fd = tcfg_.weights.gamma != 0
                    ? (-critic_->forward(gen_frames, batch.condition).mean())
                    : zero;
    auto j_ed = zero;
    if (tcfg_.weights.delta != 0) {
      auto pred = emo_disc_->forward(gen_frames);
      auto real_stub = pred.probs.detach();
      j_ed = emotion_gan_losses(real_stub, pred.probs, batch.emotion, batch.emotion).g_loss;
    }
    auto obj = generator_objective(l1, perc, j_fd, j_ed, tcfg_.weights);
    opt_gen_->zero_grad();
    obj.backward();
    clip_and_norm(gen_->parameters(), tcfg_.grad_clip);
    opt_gen_->step();
    out.mrm = l1.item<double>();
    out.perceptual = perc.item<double>();
    out.gen_adv = j_fd.item<double>();
    out.emo_adv = j_ed.item<double>();
    out.total_gen = obj.item<double>();
    check_finite(out.total_gen, "generator_objective");
  }
  return out;
}

std::vector<StepLosses> Trainer::run(int64_t n) {
  const int64_t remaining = tcfg_.iterations - iteration_;
  const int64_t steps = n < 0 ? remaining : std::min(n, remaining);
  std::vector<StepLosses> history;
  history.reserve(static_cast<size_t>(std::max<int64_t>(steps, 0)));

  for (int64_t k = 0; k < steps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    StepLosses l;
    try {
      l = stage_ == "init" ? step_init(static_cast<uint64_t>(iteration_))
                           : step_gan(static_cast<uint64_t>(iteration_));
    } catch (const TrainAbort& e) {
      save(out_dir_ / "ckpt_abort.ten");
      std::cerr << "training aborted at iteration " << iteration_ << ": " << e.what()
                << " (state saved to ckpt_abort.ten)\n";
      throw;
    }
    ++iteration_;
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    append_log(static_cast<uint64_t>(iteration_), l, wall_ms);
    history.push_back(l);

    if (tcfg_.log_interval > 0 && iteration_ % tcfg_.log_interval == 0) {
      std::cout << "[" << stage_ << " " << iteration_ << "/" << tcfg_.iterations
                << "] mrm=" << l.mrm << " perc=" << l.perceptual;
      if (stage_ == "gan")
        std::cout << " critic=" << l.critic << " gp=" << l.gp << " emo_d=" << l.emo_disc
                  << " g_adv=" << l.gen_adv << " g_emo=" << l.emo_adv;
      std::cout << " total=" << l.total_gen << std::endl;
    }
    if (val_loader_ && tcfg_.val_interval > 0 && iteration_ % tcfg_.val_interval == 0) {
      const double v = validate();
      std::ofstream vl(out_dir_ / "val_log.csv", std::ios::app);
      vl << iteration_ << "," << stage_ << "," << v << "\n";
      if (v < best_val_) {
        best_val_ = v;
        save(out_dir_ / "ckpt_best.ten");
      }
    }
    if (tcfg_.sample_interval > 0 && iteration_ % tcfg_.sample_interval == 0)
      dump_samples(static_cast<uint64_t>(iteration_));
    if (tcfg_.checkpoint_interval > 0 && iteration_ % tcfg_.checkpoint_interval == 0)
      save(out_dir_ / "ckpt_latest.ten");
  }
  if (steps > 0) save(out_dir_ / "ckpt_latest.ten");
  return history;
}

double Trainer::validate() {
  if (!val_loader_) return std::numeric_limits<double>::quiet_NaN();
  torch::NoGradGuard no_grad;
  const size_t n = std::min(val_loader_->size(), tcfg_.val_max_clips);
  double total = 0;
  for (size_t k = 0; k < n; ++k) {
    auto w = val_loader_->fixed_window(k);
    auto batch = stack_windows({w});
    auto noise = draw_noise(kWindowFrames, mcfg_.noise_dim, 0).unsqueeze(0);
    auto gen_frames = gen_->forward(batch.audio, batch.condition, batch.emotion, noise);
    auto l1 = mrm_l1(gen_frames, batch.frames, batch.mrm);
    auto perc = extractor_ ? perceptual_loss(gen_frames, batch.frames, extractor_)
                           : torch::zeros({}, gen_frames.options());
    total += tcfg_.weights.alpha * l1.item<double>() +
             tcfg_.weights.beta * perc.item<double>();
  }
  return total / static_cast<double>(n);
}

void Trainer::append_log(uint64_t iteration, const StepLosses& l, double wall_ms) {
  const auto path = out_dir_ / "train_log.csv";
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream os(path, std::ios::app);
  if (fresh)
    os << "iteration,stage,mrm,perceptual,gen_adv,emo_adv,critic,emo_disc,gp,total_gen,"
          "lr_gen,lr_disc,wall_ms\n";
  const double lr_gen = stage_ == "init" ? tcfg_.lr_gen_init : tcfg_.lr_gen_gan;
  os << iteration << "," << stage_ << "," << l.mrm << "," << l.perceptual << "," << l.gen_adv
     << "," << l.emo_adv << "," << l.critic << "," << l.emo_disc << "," << l.gp << ","
     << l.total_gen << "," << lr_gen << "," << tcfg_.lr_disc << "," << wall_ms << "\n";
}

void Trainer::dump_samples(uint64_t iteration) {
  torch::NoGradGuard no_grad;
  auto w = train_loader_->fixed_window(0);
  auto batch = stack_windows({w});
  auto noise = draw_noise(kWindowFrames, mcfg_.noise_dim, iteration).unsqueeze(0);
  auto gen_frames = gen_->forward(batch.audio, batch.condition, batch.emotion, noise)[0];
  // one row: condition | four generated | four ground truth
  std::vector<torch::Tensor> cells = {batch.condition[0]};
  for (int64_t f : {0, 10, 21, 31}) cells.push_back(gen_frames[f]);
  for (int64_t f : {0, 10, 21, 31}) cells.push_back(batch.frames[0][f]);
  auto grid = torch::cat(cells, 2);  // side by side
  std::filesystem::create_directories(out_dir_ / "samples");
  char name[64];
  std::snprintf(name, sizeof(name), "iter_%08lld.png", static_cast<long long>(iteration));
  write_image_rgb(out_dir_ / "samples" / name, denormalize_frames(grid));
}

CheckpointData Trainer::snapshot() const {
  CheckpointData d;
  d.kind = "trainer";
  d.stage = stage_;
  d.iteration = iteration_;
  d.seed = tcfg_.seed;
  d.model_config_json = mcfg_.to_json();
  d.train_config_json = tcfg_.to_json();
  append_module_params(d.archive, "generator", *gen_);
  append_module_params(d.archive, "critic", *critic_);
  append_module_params(d.archive, "emotion_disc", *emo_disc_);
  append_adam_state(d.archive, "generator", *opt_gen_, gen_->parameters());
  append_adam_state(d.archive, "critic", *opt_critic_, critic_->parameters());
  append_adam_state(d.archive, "emotion_disc", *opt_emo_, emo_disc_->parameters());
  return d;
}

void Trainer::save(const std::filesystem::path& path) const {
  save_checkpoint_file(path, snapshot());
}

void Trainer::load(const std::filesystem::path& path, bool start_gan_stage) {
  auto d = load_checkpoint_file(path);
  if (d.kind != "trainer") throw ConfigError("not a trainer checkpoint: " + path.string());
  if (d.model_config_json != mcfg_.to_json())
    throw ConfigError(
        "checkpoint was produced under a different model config; refusing to load.\n"
        "checkpoint:\n" + d.model_config_json + "\ncurrent:\n" + mcfg_.to_json());
  load_module_params(d.archive, "generator", *gen_);
  load_module_params(d.archive, "critic", *critic_);
  load_module_params(d.archive, "emotion_disc", *emo_disc_);
  load_adam_state(d.archive, "generator", *opt_gen_, gen_->parameters());
  load_adam_state(d.archive, "critic", *opt_critic_, critic_->parameters());
  load_adam_state(d.archive, "emotion_disc", *opt_emo_, emo_disc_->parameters());

  if (start_gan_stage) {
    if (d.stage != "init")
      throw ConfigError("GAN stage must start from an init-stage checkpoint (got stage '" +
                        d.stage + "')");
    stage_ = "gan";
    tcfg_.stage = "gan";
    iteration_ = 0;
    set_generator_lr(tcfg_.lr_gen_gan);
  } else {
    stage_ = d.stage;
    tcfg_.stage = d.stage;
    iteration_ = d.iteration;
    set_generator_lr(stage_ == "init" ? tcfg_.lr_gen_init : tcfg_.lr_gen_gan);
  }
}

}  // namespace emoface
