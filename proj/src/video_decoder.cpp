#include "emoface/video_decoder.hpp"

namespace emoface {

namespace F = torch::nn::functional;

namespace {
torch::Tensor leaky(const torch::Tensor& x) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(0.2));
}

torch::Tensor upsample_double(const torch::Tensor& x) {
  return F::interpolate(
      x, F::InterpolateFuncOptions()
             .size(std::vector<int64_t>{x.size(2) * 2, x.size(3) * 2})
             .mode(torch::kNearest));
}

// Skip maps come from one condition image; every frame of the window consumes
// the same map.
torch::Tensor expand_skip(const torch::Tensor& skip, int64_t t) {
  auto s = skip.unsqueeze(1).expand({skip.size(0), t, skip.size(1), skip.size(2), skip.size(3)});
  return s.reshape({skip.size(0) * t, skip.size(1), skip.size(2), skip.size(3)});
}
}  // namespace

VideoDecoderImpl::VideoDecoderImpl(const ModelConfig& cfg) : cfg_(cfg) {
  const auto& ch = cfg_.image_channels;  // {c1..c5, bottleneck}
  const int c5 = ch[4];
  fc1_ = register_module("fc1", torch::nn::Linear(cfg_.embed_dim(), cfg_.decoder_fc));
  fc2_ = register_module("fc2", torch::nn::Linear(cfg_.decoder_fc, c5 * 4 * 4));

  // Stage i consumes skip[4-i] and mirrors encoder layer 5-i's filter count.
  const std::array<int, 5> in_ch = {c5 + c5, c5 + ch[3], ch[3] + ch[2], ch[2] + ch[1],
                                    ch[1] + ch[0]};
  const std::array<int, 5> out_ch = {c5, ch[3], ch[2], ch[1], ch[0]};
  for (int i = 0; i < 5; ++i) {
    convs_->push_back(
        torch::nn::Conv2d(torch::nn::Conv2dOptions(in_ch[i], out_ch[i], 3).padding(1)));
  }
  register_module("convs", convs_);
  out_conv_ = register_module("out_conv",
                              torch::nn::Conv2d(torch::nn::Conv2dOptions(ch[0], 3, 3).padding(1)));
}

torch::Tensor VideoDecoderImpl::forward(const torch::Tensor& embed, const ImageEncoding& enc) {
  TORCH_CHECK(embed.dim() == 3, "decoder expects [B,T,D] embeddings");
  TORCH_CHECK(enc.skips.size() == 5, "expected five skip maps");
  const int64_t b = embed.size(0);
  const int64_t t = embed.size(1);

  auto x = leaky(fc1_->forward(embed));
  x = leaky(fc2_->forward(x));                       // [B,T,c5*16]
  x = x.reshape({b * t, cfg_.image_channels[4], 4, 4});

  for (int i = 0; i < 5; ++i) {
    x = torch::cat({x, expand_skip(enc.skips[static_cast<size_t>(4 - i)], t)}, 1);
    x = upsample_double(x);
    x = leaky(convs_[static_cast<size_t>(i)]->as<torch::nn::Conv2d>()->forward(x));
  }
  x = torch::tanh(out_conv_->forward(x));            // last layer: no skip, tanh
  return x.reshape({b, t, 3, cfg_.image_size, cfg_.image_size});
}

}  // namespace emoface
