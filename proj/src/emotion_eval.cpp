#include "emoface/emotion_eval.hpp"

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <fstream>
#include <iostream>

#include "emoface/checkpoint.hpp"

namespace emoface {

torch::Tensor EmotionEvalReport::row_normalized_pct() const {
  auto c = confusion.to(torch::kFloat64);
  auto row_sums = c.sum(1, /*keepdim=*/true).clamp_min(1e-12);
  return c / row_sums * 100.0;
}

EmotionEvalReport report_from_predictions(const std::vector<int>& predictions,
                                          const std::vector<Emotion>& labels) {
  TORCH_CHECK(predictions.size() == labels.size(), "prediction/label count mismatch: ",
              predictions.size(), " vs ", labels.size());
  TORCH_CHECK(!labels.empty(), "no samples to evaluate");
  EmotionEvalReport r;
  r.confusion = torch::zeros({kNumEmotions, kNumEmotions}, torch::kInt64);
  auto acc = r.confusion.accessor<int64_t, 2>();
  for (size_t i = 0; i < labels.size(); ++i) {
    const int t = static_cast<int>(labels[i]);
    const int p = predictions[i];
    TORCH_CHECK(p >= 0 && p < kNumEmotions, "prediction out of range");
    acc[t][p] += 1;
  }
  int64_t correct = 0;
  for (int i = 0; i < kNumEmotions; ++i) correct += acc[i][i];
  r.accuracy_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(labels.size());

  double f1_sum = 0;
  for (int c = 0; c < kNumEmotions; ++c) {
    int64_t tp = acc[c][c], fp = 0, fn = 0;
    for (int o = 0; o < kNumEmotions; ++o) {
      if (o != c) {
        fp += acc[o][c];
        fn += acc[c][o];
      }
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    f1_sum += denom > 0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
  r.macro_f1_pct = 100.0 * f1_sum / kNumEmotions;
  return r;
}

int classify_video(EmotionClassifier& clf, const torch::Tensor& frames) {
  torch::NoGradGuard no_grad;
  clf->eval();
  auto pred = clf->forward(frames.unsqueeze(0));
  auto emotion_logits = pred.logits.narrow(1, 0, kNumEmotions);
  return static_cast<int>(emotion_logits.argmax(1).item<int64_t>());
}

EmotionEvalReport evaluate_emotion_expression(EmotionClassifier& clf,
                                              const std::vector<torch::Tensor>& videos,
                                              const std::vector<Emotion>& labels) {
  TORCH_CHECK(videos.size() == labels.size(), "video/label count mismatch");
  std::vector<int> preds;
  preds.reserve(videos.size());
  for (const auto& v : videos) preds.push_back(classify_video(clf, v));
  return report_from_predictions(preds, labels);
}

void EmotionEvalReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path.string());
  os << "true\\pred";
  for (const auto& n : emotion_names()) os << "," << n;
  os << "\n";
  auto pct = row_normalized_pct();
  for (int i = 0; i < kNumEmotions; ++i) {
    os << emotion_names()[i];
    for (int j = 0; j < kNumEmotions; ++j) os << "," << pct[i][j].item<double>();
    os << "\n";
  }
  os << "accuracy_pct," << accuracy_pct << "\nmacro_f1_pct," << macro_f1_pct << "\n";
}

void EmotionEvalReport::write_json(const std::filesystem::path& path) const {
  nlohmann::json conf = nlohmann::json::array();
  nlohmann::json pct = nlohmann::json::array();
  auto norm = row_normalized_pct();
  for (int i = 0; i < kNumEmotions; ++i) {
    nlohmann::json row = nlohmann::json::array(), prow = nlohmann::json::array();
    for (int j = 0; j < kNumEmotions; ++j) {
      row.push_back(confusion[i][j].item<int64_t>());
      prow.push_back(norm[i][j].item<double>());
    }
    conf.push_back(row);
    pct.push_back(prow);
  }
  nlohmann::json j{{"accuracy_pct", accuracy_pct},
                   {"macro_f1_pct", macro_f1_pct},
                   {"labels", emotion_names()},
                   {"confusion_counts", conf},
                   {"confusion_row_pct", pct}};
  std::ofstream os(path);
  os << j.dump(2) << "\n";
}

void EmotionEvalReport::write_png(const std::filesystem::path& path) const {
  const int cell = 64, margin = 80;
  const int size = margin + kNumEmotions * cell + 8;
  cv::Mat img(size, size, CV_8UC3, cv::Scalar(255, 255, 255));
  auto pct = row_normalized_pct();
  for (int i = 0; i < kNumEmotions; ++i) {
    for (int j = 0; j < kNumEmotions; ++j) {
      const double v = pct[i][j].item<double>() / 100.0;
      // white -> blue ramp
      cv::Scalar color(255.0 - 200.0 * v, 255.0 - 120.0 * v, 255.0 - 30.0 * v);
      cv::Rect rect(margin + j * cell, margin + i * cell, cell, cell);
      cv::rectangle(img, rect, color, cv::FILLED);
      cv::rectangle(img, rect, cv::Scalar(120, 120, 120), 1);
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%.1f", pct[i][j].item<double>());
      cv::putText(img, buf, {rect.x + 8, rect.y + cell / 2 + 5}, cv::FONT_HERSHEY_SIMPLEX,
                  0.45, v > 0.55 ? cv::Scalar(255, 255, 255) : cv::Scalar(30, 30, 30), 1,
                  cv::LINE_AA);
    }
  }
  for (int i = 0; i < kNumEmotions; ++i) {
    const auto& name = emotion_names()[i];
    cv::putText(img, name.substr(0, 3), {margin + i * cell + 14, margin - 12},
                cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(0, 0, 0), 1, cv::LINE_AA);
    cv::putText(img, name.substr(0, 3), {8, margin + i * cell + cell / 2 + 5},
                cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(0, 0, 0), 1, cv::LINE_AA);
  }
  if (!cv::imwrite(path.string(), img))
    throw DataError("cannot write confusion figure: " + path.string());
}

double train_emotion_classifier(EmotionClassifier& clf, const std::filesystem::path& data_root,
                                const std::vector<ManifestEntry>& train_entries,
                                const EmoClfTrainConfig& cfg,
                                std::vector<double>* loss_history) {
  TORCH_CHECK(!train_entries.empty(), "classifier training needs a non-empty train split");
  WindowOptions wopts{cfg.augment, cfg.mrm};
  WindowLoader loader(data_root, train_entries, wopts, cfg.seed);
  auto betas = std::make_tuple(cfg.adam_beta1, cfg.adam_beta2);
  torch::optim::Adam opt(clf->parameters(), torch::optim::AdamOptions(cfg.lr).betas(betas));

  clf->train();
  double last_acc = 0;
  for (int64_t it = 0; it < cfg.iterations; ++it) {
    auto batch = loader.batch(static_cast<uint64_t>(it), cfg.batch);
    auto pred = clf->forward(batch.frames);
    auto loss = torch::nn::functional::cross_entropy(pred.logits, batch.emotion);
    opt.zero_grad();
    loss.backward();
    torch::nn::utils::clip_grad_norm_(clf->parameters(), cfg.grad_clip);
    opt.step();

    const double l = loss.item<double>();
    if (!std::isfinite(l)) throw TrainAbort("non-finite classifier loss");
    if (loss_history) loss_history->push_back(l);
    last_acc = pred.logits.argmax(1).eq(batch.emotion).to(torch::kFloat64).mean().item<double>();
    if (cfg.log_interval > 0 && (it + 1) % cfg.log_interval == 0)
      std::cout << "[emoclf " << (it + 1) << "/" << cfg.iterations << "] ce=" << l
                << " batch_acc=" << last_acc << std::endl;
  }
  return last_acc;
}

void save_classifier_checkpoint(const std::filesystem::path& path, EmotionClassifier& clf,
                                const ModelConfig& mcfg, int64_t iteration, uint64_t seed) {
  CheckpointData d;
  d.kind = "emoclf";
  d.stage = "classifier";
  d.iteration = iteration;
  d.seed = seed;
  d.model_config_json = mcfg.to_json();
  append_module_params(d.archive, "classifier", *clf);
  save_checkpoint_file(path, d);
}

EmotionClassifier load_classifier_checkpoint(const std::filesystem::path& path,
                                             ModelConfig* mcfg_out) {
  auto d = load_checkpoint_file(path);
  if (d.kind != "emoclf") throw ConfigError("not a classifier checkpoint: " + path.string());
  auto mcfg = ModelConfig::from_json(d.model_config_json);
  EmotionClassifier clf(mcfg, kNumEmotions);
  load_module_params(d.archive, "classifier", *clf);
  if (mcfg_out) *mcfg_out = mcfg;
  return clf;
}

}  // namespace emoface
