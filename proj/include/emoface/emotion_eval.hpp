#pragma once

#include <torch/torch.h>

#include <filesystem>

#include "emoface/discriminators.hpp"
#include "emoface/manifest.hpp"
#include "emoface/window.hpp"

namespace emoface {

struct EmotionEvalReport {
  double accuracy_pct = 0;
  double macro_f1_pct = 0;
  torch::Tensor confusion;  // i64 [6,6] raw counts, rows = true label

  torch::Tensor row_normalized_pct() const;  // f64 [6,6], each row sums to 100
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;
  // Fig.-style heatmap with per-cell percentages.
  void write_png(const std::filesystem::path& path) const;
};

EmotionEvalReport report_from_predictions(const std::vector<int>& predictions,
                                          const std::vector<Emotion>& labels);

// Runs the classifier over a whole clip ([T,3,H,W] in [-1,1]); argmax over
// the six emotion classes (a 7-class discriminator's fake class is ignored).
int classify_video(EmotionClassifier& clf, const torch::Tensor& frames);

EmotionEvalReport evaluate_emotion_expression(EmotionClassifier& clf,
                                              const std::vector<torch::Tensor>& videos,
                                              const std::vector<Emotion>& labels);

struct EmoClfTrainConfig {
  int64_t iterations = 5000;
  double lr = 1e-4;
  double adam_beta1 = 0.5, adam_beta2 = 0.99;
  int batch = 8;
  uint64_t seed = 1;
  double grad_clip = 10.0;
  int64_t log_interval = 50;
  AugmentConfig augment;
  MrmOptions mrm;
};

// 6-class variant of the emotion discriminator trained with plain CE on
// ground-truth windows. Returns the final training-batch accuracy estimate.
double train_emotion_classifier(EmotionClassifier& clf, const std::filesystem::path& data_root,
                                const std::vector<ManifestEntry>& train_entries,
                                const EmoClfTrainConfig& cfg,
                                std::vector<double>* loss_history = nullptr);

void save_classifier_checkpoint(const std::filesystem::path& path, EmotionClassifier& clf,
                                const ModelConfig& mcfg, int64_t iteration, uint64_t seed);
EmotionClassifier load_classifier_checkpoint(const std::filesystem::path& path,
                                             ModelConfig* mcfg_out = nullptr);

}  // namespace emoface
