#pragma once

#include <torch/torch.h>

#include <filesystem>

#include "emoface/encoders.hpp"
#include "emoface/video_decoder.hpp"

namespace emoface {

// The full speech + image + emotion + noise -> video network.
class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(const ModelConfig& cfg);

  // audio [B,N] (N a multiple of 320), condition [B,3,128,128], emotion i64
  // [B], noise [B,T,Z] with T == N/320. Returns [B,T,3,128,128].
  torch::Tensor forward(const torch::Tensor& audio, const torch::Tensor& condition,
                        const torch::Tensor& emotion, const torch::Tensor& noise);

  // Single-clip inference: trims audio to a whole number of frames, draws
  // noise from `seed`, decodes in chunks to bound memory. Returns
  // [T,3,128,128] with T == floor(samples/320).
  torch::Tensor generate(const torch::Tensor& audio, const torch::Tensor& condition,
                         Emotion emotion, uint64_t seed, int64_t chunk_frames = 8);

  const ModelConfig& config() const { return cfg_; }

  SpeechEncoder speech_encoder{nullptr};
  ImageEncoder image_encoder{nullptr};
  EmotionEncoder emotion_encoder{nullptr};
  NoiseEncoder noise_encoder{nullptr};
  VideoDecoder decoder{nullptr};

 private:
  ModelConfig cfg_;
};
TORCH_MODULE(Generator);

// Standard-normal noise sequence [T,Z] drawn from this project's RNG (keeps
// generation reproducible independent of torch's global RNG state).
torch::Tensor draw_noise(int64_t t, int z, uint64_t seed);

// Rebuilds the generator recorded in a trainer checkpoint.
Generator load_generator_checkpoint(const std::filesystem::path& path,
                                    ModelConfig* config_out = nullptr);

}  // namespace emoface
