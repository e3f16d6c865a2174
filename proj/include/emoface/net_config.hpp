#pragma once

#include <string>
#include <vector>

#include "emoface/common.hpp"

namespace emoface {

// Every width in one place. Conv kernel/stride layouts are part of the system
// design and fixed; channel widths and embedding sizes are configurable, with
// defaults sized for the full system and a reduced preset for tests.
struct ModelConfig {
  // speech encoder: five 1-D conv layers (filters, kernel, stride)
  std::vector<int> speech_filters = {64, 128, 256, 512, 16};
  std::vector<int> speech_kernels = {63, 31, 17, 9, 1};
  std::vector<int> speech_strides = {4, 4, 2, 2, 1};
  int context_offsets = 2;     // +-2 steps concatenated around each kept index
  int context_decimation = 5;  // 125 -> 25 steps/s
  int speech_fc = 256;
  int speech_lstm_hidden = 256;
  int speech_lstm_layers = 2;

  // image encoder: six 2-D convs; first five emit skips, the last (kernel 4,
  // valid) is the bottleneck
  std::vector<int> image_channels = {64, 128, 256, 512, 512, 512};

  // emotion encoder: two FC layers on the one-hot label
  int emotion_fc1 = 128;
  int emotion_fc2 = 128;

  // noise encoder
  int noise_dim = 10;
  int noise_lstm_hidden = 10;

  // video decoder: first FC width; the second FC is image_channels[4]*16
  int decoder_fc = 1024;

  // frame critic
  std::vector<int> critic_channels = {64, 128, 256, 512, 512};
  int critic_fc = 512;

  // emotion discriminator / classifier
  std::vector<int> emo_channels = {64, 128, 256, 512, 512};
  int emo_fc1 = 512;
  int emo_fc2 = 256;
  int emo_lstm_hidden = 256;

  int image_size = 128;

  static ModelConfig defaults() { return {}; }
  // Width-reduced preset used by unit/acceptance tests; kernel/stride layout
  // (and hence all rate laws) identical to the full model.
  static ModelConfig tiny();

  int speech_embed_dim() const { return speech_lstm_hidden; }
  int image_embed_dim() const { return image_channels.back(); }
  int embed_dim() const {
    return speech_embed_dim() + image_embed_dim() + emotion_fc2 + noise_lstm_hidden;
  }

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
  void validate() const;
};

}  // namespace emoface
