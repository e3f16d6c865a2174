#pragma once

#include <torch/torch.h>

#include "emoface/encoders.hpp"

namespace emoface {

// Per-frame decoder: concatenated embedding -> two FC layers -> 4x4 map, then
// five x2 nearest-neighbor-upsample + 3x3 conv stages, each fed the matching
// encoder skip by channel concatenation; a final skip-free conv + tanh emits
// the frame. Filter counts mirror the image encoder.
class VideoDecoderImpl : public torch::nn::Module {
 public:
  explicit VideoDecoderImpl(const ModelConfig& cfg);
  // embed: [B,T,D]; enc from the condition image (batch B). Returns
  // [B,T,3,128,128] in [-1,1].
  torch::Tensor forward(const torch::Tensor& embed, const ImageEncoding& enc);

 private:
  ModelConfig cfg_;
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
  torch::nn::ModuleList convs_;
  torch::nn::Conv2d out_conv_{nullptr};
};
TORCH_MODULE(VideoDecoder);

}  // namespace emoface
