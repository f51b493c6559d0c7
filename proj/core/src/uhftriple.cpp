#include "lptriple/uhftriple.hpp"

#include <cmath>

namespace lpt {

void UHFSpecConfig::validate() const {
  if (dims.size() < 2) {
    throw ValidationError("tower needs d(0) and at least one level");
  }
  if (dims[0] != 1) throw ValidationError("d(0) must equal 1");
  for (std::size_t j = 1; j < dims.size(); ++j) {
    if (dims[j] < 2) throw ValidationError("d(j) must be >= 2 for j >= 1");
  }
}

Eigen::Index UHFTower::level_dim(int n) const {
  Eigen::Index d = 1;
  for (int j = 0; j <= n; ++j) d *= spec.dims[std::size_t(j)];
  return d;
}

Eigen::Index UHFTower::trailing_dim(int n) const {
  Eigen::Index d = 1;
  for (int j = n + 1; j <= levels(); ++j) d *= spec.dims[std::size_t(j)];
  return d;
}

namespace {

ProductSpace trailing_space(const UHFSpecConfig& spec, int n) {
  std::vector<WeightedPointSpace> factors;
  for (int j = n + 1; j <= spec.levels(); ++j) {
    factors.push_back(
        WeightedPointSpace::uniform_probability(spec.dims[std::size_t(j)]));
  }
  if (factors.empty()) {
    // empty interior range: one point space with counting measure
    factors.push_back(WeightedPointSpace::counting(1));
  }
  return product_space(factors);
}

}  // namespace

UHFTower build_tower(const UHFSpecConfig& spec, Eigen::Index dim_cap) {
  spec.validate();
  UHFTower tower;
  tower.spec = spec;
  const int M = spec.levels();
  Eigen::Index total = 1;
  for (int d : spec.dims) total *= d;
  if (total > dim_cap) {
    throw ResourceError("total tower dimension exceeds the configured cap");
  }
  std::vector<WeightedPointSpace> factors;
  for (int n = 0; n <= M; ++n) {
    factors.push_back(
        WeightedPointSpace::uniform_probability(spec.dims[std::size_t(n)]));
    tower.spaces.push_back(product_space(factors));
  }
  const WeightedPointSpace& full = tower.spaces.back().flat;
  for (int n = 0; n <= M; ++n) {
    const Eigen::Index head = tower.level_dim(n);
    const Eigen::Index trail = tower.trailing_dim(n);
    const WeightedPointSpace& level = tower.spaces[std::size_t(n)].flat;
    // iota_n: replicate a function of the leading coordinates across the rest
    Matrix inc = Matrix::Zero(total, head);
    for (Eigen::Index i = 0; i < total; ++i) inc(i, i / trail) = 1.0;
    tower.iota.emplace_back(level, full, std::move(inc));
    // pi_n: average over the trailing coordinates (uniform weights)
    Matrix avg = Matrix::Zero(head, total);
    for (Eigen::Index i = 0; i < total; ++i) {
      avg(i / trail, i) = 1.0 / double(trail);
    }
    tower.pi.emplace_back(full, level, std::move(avg));
    tower.P.push_back(tower.iota.back() * tower.pi.back());
    tower.Q.push_back(n == 0 ? tower.P[0]
                             : tower.P[std::size_t(n)] -
                                   tower.P[std::size_t(n) - 1]);
  }
  return tower;
}

OperatorMatrix partial_projector(const UHFTower& tower, int n, int m) {
  if (n < 0 || m < n || m > tower.levels()) {
    throw ValidationError("partial_projector requires 0 <= n <= m <= M");
  }
  const ProductSpace trail = trailing_space(tower.spec, n);
  Eigen::Index mid = 1;
  for (int j = n + 1; j <= m; ++j) mid *= tower.spec.dims[std::size_t(j)];
  const Eigen::Index tail = tower.trailing_dim(m);
  const Eigen::Index total = mid * tail;
  Matrix p = Matrix::Zero(total, total);
  for (Eigen::Index i = 0; i < total; ++i) {
    const Eigen::Index b = i / tail;
    for (Eigen::Index c = 0; c < tail; ++c) {
      p(i, b * tail + c) = 1.0 / double(tail);
    }
  }
  return OperatorMatrix(trail.flat, trail.flat, std::move(p));
}

AlphaSeq::AlphaSeq(std::vector<double> v) : values(std::move(v)) {
  if (values.empty() || values[0] != 0.0) {
    throw ValidationError("alpha_0 must be 0");
  }
  for (std::size_t n = 1; n < values.size(); ++n) {
    if (!(values[n] >= 0.0) || !std::isfinite(values[n])) {
      throw ValidationError("alpha_n must be nonnegative and finite");
    }
  }
}

LevelOperator embed_algebra(const UHFTower& tower, int n, const Matrix& core) {
  if (n < 0 || n > tower.levels()) {
    throw ValidationError("embed_algebra level out of range");
  }
  const Eigen::Index head = tower.level_dim(n);
  if (core.rows() != head || core.cols() != head) {
    throw ValidationError("core size does not match the level dimension");
  }
  const Eigen::Index trail = tower.trailing_dim(n);
  const WeightedPointSpace& level = tower.spaces[std::size_t(n)].flat;
  const OperatorMatrix head_op(level, level, core);
  const ProductSpace tspace = trailing_space(tower.spec, n);
  const OperatorMatrix tail_id = OperatorMatrix::identity(tspace.flat);
  OperatorMatrix emb = kron(head_op, tail_id);
  (void)trail;
  // retag onto the canonical full space (same weights, same flattening)
  return LevelOperator{n, core,
                       OperatorMatrix(tower.full_space(), tower.full_space(),
                                      std::move(emb.entries))};
}

OperatorMatrix dirac(const UHFTower& tower, const AlphaSeq& alpha) {
  if (alpha.levels() != tower.levels()) {
    throw ValidationError("alpha length does not match the tower truncation");
  }
  OperatorMatrix d(tower.full_space(), tower.full_space(),
                   Matrix::Zero(tower.total_dim(), tower.total_dim()));
  for (int n = 1; n <= tower.levels(); ++n) {
    d = d + Complex(alpha.values[std::size_t(n)]) * tower.Q[std::size_t(n)];
  }
  return d;
}

OperatorMatrix resolvent_inverse(const UHFTower& tower, const AlphaSeq& alpha) {
  if (alpha.levels() != tower.levels()) {
    throw ValidationError("alpha length does not match the tower truncation");
  }
  OperatorMatrix r = tower.P[0];
  for (int n = 1; n <= tower.levels(); ++n) {
    const double a = alpha.values[std::size_t(n)];
    r = r + Complex(1.0 / (1.0 + a * a)) * tower.Q[std::size_t(n)];
  }
  return r;
}

OperatorMatrix commutator(const UHFTower& tower, const AlphaSeq& alpha,
                          const LevelOperator& a) {
  if (a.embedded.domain != tower.full_space()) {
    throw ValidationError("level operator belongs to a different tower");
  }
  if (alpha.levels() != tower.levels()) {
    throw ValidationError("alpha length does not match the tower truncation");
  }
  for (int m = a.level + 1; m <= tower.levels(); ++m) {
    const Matrix resid = tower.Q[std::size_t(m)].entries * a.embedded.entries -
                         a.embedded.entries * tower.Q[std::size_t(m)].entries;
    if (resid.cwiseAbs().maxCoeff() > 1e-12) {
      throw std::runtime_error(
          "tower invariant violated: [Q_m, a] != 0 above the level");
    }
  }
  const OperatorMatrix d = dirac(tower, alpha);
  return d * a.embedded - a.embedded * d;
}

RealVector hermitian_eigenvalues(const OperatorMatrix& a) {
  const Matrix& m = a.entries;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvalues();
}

}  // namespace lpt
