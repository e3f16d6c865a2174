#pragma once

#include <torch/torch.h>

#include <array>

namespace emoface {

// 4-DOF planar similarity: p -> s*R(theta)*p + t.
struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;  // radians
  double tx = 0.0;
  double ty = 0.0;

  std::array<double, 2> apply(double x, double y) const;
  torch::Tensor apply(const torch::Tensor& points) const;  // [...,2] -> [...,2]
  SimilarityTransform inverse() const;
  // Row-major 2x3 matrix [[a,-b,tx],[b,a,ty]] with a=s*cos, b=s*sin.
  std::array<double, 6> matrix() const;
};

struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares similarity fit from src to dst point sets ([N,2], N >= 2).
// For the alignment use case N == 3 (eye/eye/nose means); collinear or
// duplicate triples are rejected.
SimilarityTransform estimate_similarity(const torch::Tensor& src, const torch::Tensor& dst);

}  // namespace emoface
