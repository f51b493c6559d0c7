#include "lptriple/tensor.hpp"

namespace lpt {

namespace {

bool is_one_point_counting(const WeightedPointSpace& s) {
  return s.kind() == SpaceKind::Counting && s.size() == 1;
}

}  // namespace

ProductSpace product_space(const std::vector<WeightedPointSpace>& factors) {
  if (factors.empty()) {
    throw ValidationError("product_space needs at least one factor");
  }
  Eigen::Index total = 1;
  bool all_counting = true;
  bool prob_compatible = true;  // probability factors plus trivial ones
  for (const auto& f : factors) {
    total *= f.size();
    if (f.kind() != SpaceKind::Counting) all_counting = false;
    if (f.kind() != SpaceKind::Probability && !is_one_point_counting(f)) {
      prob_compatible = false;
    }
  }
  RealVector w(total);
  // first factor slowest-varying
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index rest = flat;
    Eigen::Index stride = total;
    double prod = 1.0;
    for (const auto& f : factors) {
      stride /= f.size();
      const Eigen::Index idx = rest / stride;
      rest %= stride;
      prod *= f.weights()[idx];
    }
    w[flat] = prod;
  }
  if (all_counting) {
    return ProductSpace{factors, WeightedPointSpace::counting(total)};
  }
  if (prob_compatible) {
    return ProductSpace{factors, WeightedPointSpace::probability(std::move(w))};
  }
  throw ValidationError(
      "product of counting and probability factors of size > 1 is not "
      "supported");
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  const ProductSpace dom = product_space({a.domain, b.domain});
  const ProductSpace cod = product_space({a.codomain, b.codomain});
  Matrix m(cod.flat.size(), dom.flat.size());
  const Eigen::Index br = b.entries.rows();
  const Eigen::Index bc = b.entries.cols();
  for (Eigen::Index i = 0; i < a.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.entries.cols(); ++j) {
      m.block(i * br, j * bc, br, bc) = a.entries(i, j) * b.entries;
    }
  }
  return OperatorMatrix(dom.flat, cod.flat, std::move(m));
}

PVector kron(const PVector& a, const PVector& b) {
  const ProductSpace s = product_space({a.space, b.space});
  Vector v(s.flat.size());
  for (Eigen::Index i = 0; i < a.coords.size(); ++i) {
    v.segment(i * b.coords.size(), b.coords.size()) = a.coords[i] * b.coords;
  }
  return PVector(s.flat, std::move(v));
}

}  // namespace lpt
