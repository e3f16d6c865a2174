#include "emoface/similarity.hpp"

#include <cmath>

namespace emoface {

std::array<double, 2> SimilarityTransform::apply(double x, double y) const {
  const double a = scale * std::cos(rotation);
  const double b = scale * std::sin(rotation);
  return {a * x - b * y + tx, b * x + a * y + ty};
}

torch::Tensor SimilarityTransform::apply(const torch::Tensor& points) const {
  TORCH_CHECK(points.size(-1) == 2, "expected [...,2] points");
  auto p = points.to(torch::kFloat64);
  const double a = scale * std::cos(rotation);
  const double b = scale * std::sin(rotation);
  auto x = p.select(-1, 0);
  auto y = p.select(-1, 1);
  return torch::stack({a * x - b * y + tx, b * x + a * y + ty}, -1).to(points.scalar_type());
}

SimilarityTransform SimilarityTransform::inverse() const {
  const double a = scale * std::cos(rotation);
  const double b = scale * std::sin(rotation);
  const double s2 = a * a + b * b;
  SimilarityTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = -rotation;
  inv.tx = (-a * tx - b * ty) / s2;
  inv.ty = (b * tx - a * ty) / s2;
  return inv;
}

std::array<double, 6> SimilarityTransform::matrix() const {
  const double a = scale * std::cos(rotation);
  const double b = scale * std::sin(rotation);
  return {a, -b, tx, b, a, ty};
}

SimilarityTransform estimate_similarity(const torch::Tensor& src, const torch::Tensor& dst) {
  TORCH_CHECK(src.dim() == 2 && src.size(1) == 2, "src must be [N,2]");
  TORCH_CHECK(src.sizes() == dst.sizes(), "src/dst shape mismatch");
  const int64_t n = src.size(0);
  TORCH_CHECK(n >= 2, "need at least two points");

  auto s = src.to(torch::kFloat64);
  auto d = dst.to(torch::kFloat64);

  // Degeneracy check: points must span a non-trivial triangle (N==3) and must
  // not coincide. Area is measured relative to the point spread.
  auto spread = (s - s.mean(0)).norm(2, 1).max().item<double>();
  if (spread < 1e-12) throw DegenerateGeometry("similarity fit: coincident source points");
  if (n == 3) {
    auto e1 = s[1] - s[0];
    auto e2 = s[2] - s[0];
    double cross = (e1[0] * e2[1] - e1[1] * e2[0]).item<double>();
    if (std::abs(cross) < 1e-9 * spread * spread)
      throw DegenerateGeometry("similarity fit: collinear or duplicate source points");
  }

  // Center both sets; the reduced problem is linear in (a, b) with
  //   a = sum(x*u + y*v) / sum(x^2 + y^2),  b = sum(x*v - y*u) / sum(x^2+y^2)
  // over centered coordinates (x,y) -> (u,v).
  auto sm = s.mean(0);
  auto dm = d.mean(0);
  auto sc = s - sm;
  auto dc = d - dm;
  const double denom = sc.pow(2).sum().item<double>();
  auto x = sc.select(1, 0), y = sc.select(1, 1);
  auto u = dc.select(1, 0), v = dc.select(1, 1);
  const double a = (x * u + y * v).sum().item<double>() / denom;
  const double b = (x * v - y * u).sum().item<double>() / denom;

  SimilarityTransform t;
  t.scale = std::hypot(a, b);
  t.rotation = std::atan2(b, a);
  t.tx = dm[0].item<double>() - (a * sm[0].item<double>() - b * sm[1].item<double>());
  t.ty = dm[1].item<double>() - (b * sm[0].item<double>() + a * sm[1].item<double>());
  return t;
}

}  // namespace emoface
