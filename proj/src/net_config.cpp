#include "emoface/net_config.hpp"

#include <nlohmann/json.hpp>

namespace emoface {

using nlohmann::json;

ModelConfig ModelConfig::tiny() {
  ModelConfig c;
  c.speech_filters = {8, 12, 16, 24, 8};
  c.speech_fc = 24;
  c.speech_lstm_hidden = 24;
  c.image_channels = {6, 8, 10, 12, 16, 24};
  c.emotion_fc1 = 16;
  c.emotion_fc2 = 16;
  c.noise_dim = 4;
  c.noise_lstm_hidden = 4;
  c.decoder_fc = 48;
  c.critic_channels = {6, 8, 10, 12, 16};
  c.critic_fc = 32;
  c.emo_channels = {6, 8, 10, 12, 16};
  c.emo_fc1 = 32;
  c.emo_fc2 = 24;
  c.emo_lstm_hidden = 24;
  return c;
}

void ModelConfig::validate() const {
  if (speech_filters.size() != 5 || speech_kernels.size() != 5 || speech_strides.size() != 5)
    throw ConfigError("speech encoder needs exactly five conv layers");
  int stride_prod = 1;
  for (int s : speech_strides) stride_prod *= s;
  if (stride_prod * context_decimation != kSamplesPerFrame)
    throw ConfigError("speech stride product x decimation must equal 320 samples/frame");
  for (int k : speech_kernels)
    if (k % 2 == 0) throw ConfigError("speech conv kernels must be odd for exact rate law");
  if (image_channels.size() != 6) throw ConfigError("image encoder needs six conv layers");
  if (critic_channels.size() != 5 || emo_channels.size() != 5)
    throw ConfigError("discriminator trunks need five conv layers");
  if (image_size != kImageSize) throw ConfigError("image_size is fixed at 128");
  if (noise_dim < 1) throw ConfigError("noise_dim must be positive");
}

std::string ModelConfig::to_json() const {
  json j{{"speech_filters", speech_filters},
         {"speech_kernels", speech_kernels},
         {"speech_strides", speech_strides},
         {"context_offsets", context_offsets},
         {"context_decimation", context_decimation},
         {"speech_fc", speech_fc},
         {"speech_lstm_hidden", speech_lstm_hidden},
         {"speech_lstm_layers", speech_lstm_layers},
         {"image_channels", image_channels},
         {"emotion_fc1", emotion_fc1},
         {"emotion_fc2", emotion_fc2},
         {"noise_dim", noise_dim},
         {"noise_lstm_hidden", noise_lstm_hidden},
         {"decoder_fc", decoder_fc},
         {"critic_channels", critic_channels},
         {"critic_fc", critic_fc},
         {"emo_channels", emo_channels},
         {"emo_fc1", emo_fc1},
         {"emo_fc2", emo_fc2},
         {"emo_lstm_hidden", emo_lstm_hidden},
         {"image_size", image_size}};
  return j.dump(2);
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ModelConfig c;
  j.at("speech_filters").get_to(c.speech_filters);
  j.at("speech_kernels").get_to(c.speech_kernels);
  j.at("speech_strides").get_to(c.speech_strides);
  c.context_offsets = j.value("context_offsets", c.context_offsets);
  c.context_decimation = j.value("context_decimation", c.context_decimation);
  c.speech_fc = j.at("speech_fc").get<int>();
  c.speech_lstm_hidden = j.at("speech_lstm_hidden").get<int>();
  c.speech_lstm_layers = j.value("speech_lstm_layers", c.speech_lstm_layers);
  j.at("image_channels").get_to(c.image_channels);
  c.emotion_fc1 = j.at("emotion_fc1").get<int>();
  c.emotion_fc2 = j.at("emotion_fc2").get<int>();
  c.noise_dim = j.at("noise_dim").get<int>();
  c.noise_lstm_hidden = j.at("noise_lstm_hidden").get<int>();
  c.decoder_fc = j.at("decoder_fc").get<int>();
  j.at("critic_channels").get_to(c.critic_channels);
  c.critic_fc = j.at("critic_fc").get<int>();
  j.at("emo_channels").get_to(c.emo_channels);
  c.emo_fc1 = j.at("emo_fc1").get<int>();
  c.emo_fc2 = j.at("emo_fc2").get<int>();
  c.emo_lstm_hidden = j.at("emo_lstm_hidden").get<int>();
  c.image_size = j.value("image_size", kImageSize);
  c.validate();
  return c;
}

}  // namespace emoface
