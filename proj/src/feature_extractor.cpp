#include "emoface/feature_extractor.hpp"

#include "emoface/tensor_file.hpp"

namespace emoface {

namespace F = torch::nn::functional;

FeatureExtractorImpl::FeatureExtractorImpl(Preset preset,
                                           std::optional<std::filesystem::path> weights_file,
                                           uint64_t tiny_seed)
    : preset_(preset) {
  if (preset_ == Preset::kVgg19) {
    build({2, 2, 4, 4, 4}, {64, 128, 256, 512, 512});
    if (!weights_file)
      throw ConfigError(
          "perceptual feature extractor unavailable: VGG-19 preset requires a weights "
          "archive (use tools/export_vgg19.py), or select the tiny test preset");
    load_weights(*weights_file);
  } else {
    torch::manual_seed(tiny_seed);
    build({1, 1, 1, 1, 1}, {4, 8, 8, 8, 8});
  }
  // Frozen: the perceptual loss trains nothing in this stack.
  for (auto& p : parameters()) p.set_requires_grad(false);
  eval();
}

void FeatureExtractorImpl::build(const std::vector<int>& convs_per_block,
                                 const std::vector<int>& channels) {
  int in_ch = 3;
  int index = 0;
  for (size_t blk = 0; blk < convs_per_block.size(); ++blk) {
    for (int i = 0; i < convs_per_block[blk]; ++i) {
      conv_of_index_.push_back(layers_->size());
      layers_->push_back(torch::nn::Conv2d(
          torch::nn::Conv2dOptions(in_ch, channels[blk], 3).padding(1)));
      layer_kinds_.push_back('c');
      ++index;
      conv_of_index_.push_back(0);
      layer_kinds_.push_back('r');
      ++index;
      in_ch = channels[blk];
    }
    conv_of_index_.push_back(0);
    layer_kinds_.push_back('p');
    taps_.push_back(index);  // pool output closes each block
    ++index;
  }
  register_module("layers", layers_);
}

void FeatureExtractorImpl::load_weights(const std::filesystem::path& path) {
  auto ar = TensorArchive::load(path);
  size_t conv = 0;
  for (size_t idx = 0; idx < layer_kinds_.size(); ++idx) {
    if (layer_kinds_[idx] != 'c') continue;
    auto* c = layers_[conv_of_index_[idx]]->as<torch::nn::Conv2d>();
    const std::string base = "features." + std::to_string(idx);
    auto w = ar.at(base + ".weight").to(torch::kFloat32);
    auto b = ar.at(base + ".bias").to(torch::kFloat32);
    TORCH_CHECK(w.sizes() == c->weight.sizes(), "weights archive mismatch at ", base,
                ": got ", w.sizes(), ", expected ", c->weight.sizes());
    torch::NoGradGuard g;
    c->weight.copy_(w);
    c->bias.copy_(b);
    ++conv;
  }
}

std::vector<torch::Tensor> FeatureExtractorImpl::forward(const torch::Tensor& frames) {
  TORCH_CHECK(frames.dim() == 4 && frames.size(1) == 3, "expected [N,3,H,W]");
  // [-1,1] -> [0,1] -> backbone normalization
  auto mean = torch::tensor({0.485f, 0.456f, 0.406f}).view({1, 3, 1, 1}).to(frames.scalar_type());
  auto stdv = torch::tensor({0.229f, 0.224f, 0.225f}).view({1, 3, 1, 1}).to(frames.scalar_type());
  auto x = ((frames + 1) * 0.5 - mean) / stdv;

  std::vector<torch::Tensor> out;
  size_t next_tap = 0;
  for (size_t idx = 0; idx < layer_kinds_.size() && next_tap < taps_.size(); ++idx) {
    switch (layer_kinds_[idx]) {
      case 'c': x = layers_[conv_of_index_[idx]]->as<torch::nn::Conv2d>()->forward(x); break;
      case 'r': x = torch::relu(x); break;
      case 'p': x = F::max_pool2d(x, F::MaxPool2dFuncOptions(2)); break;
    }
    if (static_cast<int>(idx) == taps_[next_tap]) {
      out.push_back(x);
      ++next_tap;
    }
  }
  return out;
}

FeatureExtractor make_feature_extractor(
    const std::string& mode, const std::optional<std::filesystem::path>& weights) {
  if (mode == "off") return nullptr;
  if (mode == "tiny") return FeatureExtractor(FeatureExtractorImpl::Preset::kTiny, std::nullopt);
  if (mode == "file")
    return FeatureExtractor(FeatureExtractorImpl::Preset::kVgg19, weights);
  throw ConfigError("unknown perceptual mode '" + mode + "' (expected file|tiny|off)");
}

}  // namespace emoface
