#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <optional>
#include <vector>

#include "emoface/common.hpp"

namespace emoface {

// Frozen sequential conv/relu/maxpool stack used by the perceptual loss.
//
// The production preset is the 19-layer VGG feature stack (16 convs in blocks
// of 2/2/4/4/4 plus five pools, indices 0..36) with taps at 4, 9, 18, 27, 36
// — the five pool outputs. Weights come from a TEN1 archive exported offline
// (see tools/export_vgg19.py); without a weights file the extractor refuses
// to run in production mode.
//
// The tiny preset keeps the five-block/five-tap structure with one thin conv
// per block and fixed seeded weights; it exists for tests, where a trained
// backbone is unavailable.
class FeatureExtractorImpl : public torch::nn::Module {
 public:
  enum class Preset { kVgg19, kTiny };

  FeatureExtractorImpl(Preset preset, std::optional<std::filesystem::path> weights_file,
                       uint64_t tiny_seed = 0x7ea7);

  // frames: [N,3,H,W] in [-1,1]; remapped internally to the backbone's input
  // normalization. Returns one feature map per tap index.
  std::vector<torch::Tensor> forward(const torch::Tensor& frames);

  const std::vector<int>& taps() const { return taps_; }
  Preset preset() const { return preset_; }

 private:
  void build(const std::vector<int>& convs_per_block, const std::vector<int>& channels);
  void load_weights(const std::filesystem::path& path);

  Preset preset_;
  std::vector<int> taps_;
  torch::nn::ModuleList layers_;          // Conv2d entries; relu/pool applied functionally
  std::vector<char> layer_kinds_;         // 'c', 'r', 'p' per stack index
  std::vector<size_t> conv_of_index_;     // stack index -> position in layers_
};
TORCH_MODULE(FeatureExtractor);

// Builds the extractor named by `mode`: "file" (VGG-19 + weights archive),
// "tiny", or "off" (returns null). Throws ConfigError when mode is "file" but
// no usable weights archive is given.
FeatureExtractor make_feature_extractor(const std::string& mode,
                                        const std::optional<std::filesystem::path>& weights);

}  // namespace emoface
