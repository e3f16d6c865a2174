#include "emoface/generator.hpp"

#include "emoface/checkpoint.hpp"

namespace emoface {

GeneratorImpl::GeneratorImpl(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  speech_encoder = register_module("speech_encoder", SpeechEncoder(cfg_));
  image_encoder = register_module("image_encoder", ImageEncoder(cfg_));
  emotion_encoder = register_module("emotion_encoder", EmotionEncoder(cfg_));
  noise_encoder = register_module("noise_encoder", NoiseEncoder(cfg_));
  decoder = register_module("decoder", VideoDecoder(cfg_));
}

torch::Tensor GeneratorImpl::forward(const torch::Tensor& audio, const torch::Tensor& condition,
                                     const torch::Tensor& emotion, const torch::Tensor& noise) {
  TORCH_CHECK(audio.size(1) % kSamplesPerFrame == 0,
              "generator forward expects audio trimmed/padded to whole frames");
  auto speech = speech_encoder->forward(audio);  // [B,T,Ds]
  const int64_t t = speech.size(1);
  TORCH_CHECK(noise.size(1) == t, "noise sequence length ", noise.size(1),
              " != frame count ", t);
  auto enc = image_encoder->forward(condition);
  auto emo = emotion_encoder->forward(emotion, t);
  auto noi = noise_encoder->forward(noise);
  auto img = enc.bottleneck.unsqueeze(1).expand({audio.size(0), t, enc.bottleneck.size(1)});
  auto embed = torch::cat({speech, img, noi, emo}, 2);
  return decoder->forward(embed, enc);
}

torch::Tensor GeneratorImpl::generate(const torch::Tensor& audio, const torch::Tensor& condition,
                                      Emotion emotion, uint64_t seed, int64_t chunk_frames) {
  torch::NoGradGuard no_grad;
  TORCH_CHECK(audio.dim() == 1, "generate expects a single [N] waveform");
  const int64_t t = audio.numel() / kSamplesPerFrame;  // floor: partial tail dropped
  TORCH_CHECK(t >= 1, "audio shorter than one frame (", audio.numel(), " samples)");
  auto a = audio.narrow(0, 0, t * kSamplesPerFrame).unsqueeze(0);
  auto cond = condition.unsqueeze(0);
  auto labels = torch::tensor({static_cast<int64_t>(emotion)}, torch::kInt64);
  auto noise = draw_noise(t, cfg_.noise_dim, seed).unsqueeze(0);

  // Encoders run over the full utterance in one pass (recurrent state spans
  // the whole clip); only the per-frame decoding is chunked.
  auto speech = speech_encoder->forward(a);
  auto enc = image_encoder->forward(cond);
  auto emo = emotion_encoder->forward(labels, t);
  auto noi = noise_encoder->forward(noise);
  auto img = enc.bottleneck.unsqueeze(1).expand({1, t, enc.bottleneck.size(1)});
  auto embed = torch::cat({speech, img, noi, emo}, 2);

  if (chunk_frames <= 0) chunk_frames = t;
  std::vector<torch::Tensor> chunks;
  for (int64_t s = 0; s < t; s += chunk_frames) {
    const int64_t n = std::min(chunk_frames, t - s);
    chunks.push_back(decoder->forward(embed.narrow(1, s, n), enc));
  }
  return torch::cat(chunks, 1).squeeze(0);
}

Generator load_generator_checkpoint(const std::filesystem::path& path,
                                    ModelConfig* config_out) {
  auto d = load_checkpoint_file(path);
  if (d.kind != "trainer")
    throw ConfigError("not a trainer checkpoint (kind '" + d.kind + "'): " + path.string());
  auto mcfg = ModelConfig::from_json(d.model_config_json);
  Generator gen(mcfg);
  load_module_params(d.archive, "generator", *gen);
  gen->eval();
  if (config_out) *config_out = mcfg;
  return gen;
}

torch::Tensor draw_noise(int64_t t, int z, uint64_t seed) {
  Rng rng(hash_seed(seed, 0x401be));
  auto out = torch::empty({t, z}, torch::kFloat32);
  float* p = out.data_ptr<float>();
  for (int64_t i = 0; i < t * z; ++i) p[i] = static_cast<float>(rng.normal());
  return out;
}

}  // namespace emoface
