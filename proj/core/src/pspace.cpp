#include "lptriple/pspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lpt {

PExponent::PExponent(double value) : value_(value) {
  if (!std::isfinite(value) || value < 1.0) {
    throw ValidationError("p exponent must satisfy 1 <= p < infinity");
  }
}

double PExponent::dual() const {
  if (value_ == 1.0) {
    throw ValidationError("dual exponent of p = 1 is not finite");
  }
  return value_ / (value_ - 1.0);
}

WeightedPointSpace::WeightedPointSpace(SpaceKind kind, RealVector weights)
    : kind_(kind), weights_(std::move(weights)) {
  if (weights_.size() == 0) {
    throw ValidationError("point space must have at least one point");
  }
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw ValidationError("point weights must be positive and finite");
    }
  }
  if (kind_ == SpaceKind::Probability) {
    if (std::abs(weights_.sum() - 1.0) > 1e-12) {
      throw ValidationError("probability weights must sum to 1");
    }
  } else {
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (weights_[i] != 1.0) {
        throw ValidationError("counting weights must all equal 1");
      }
    }
  }
}

WeightedPointSpace WeightedPointSpace::counting(Eigen::Index n) {
  return WeightedPointSpace(SpaceKind::Counting, RealVector::Ones(n));
}

WeightedPointSpace WeightedPointSpace::uniform_probability(Eigen::Index n) {
  if (n <= 0) throw ValidationError("space size must be positive");
  return WeightedPointSpace(SpaceKind::Probability,
                            RealVector::Constant(n, 1.0 / double(n)));
}

WeightedPointSpace WeightedPointSpace::probability(RealVector weights) {
  return WeightedPointSpace(SpaceKind::Probability, std::move(weights));
}

PVector::PVector(WeightedPointSpace s, Vector c)
    : space(std::move(s)), coords(std::move(c)) {
  if (coords.size() != space.size()) {
    throw ValidationError("vector length does not match its space");
  }
}

OperatorMatrix::OperatorMatrix(WeightedPointSpace dom, WeightedPointSpace cod,
                               Matrix m)
    : domain(std::move(dom)), codomain(std::move(cod)), entries(std::move(m)) {
  if (entries.rows() != codomain.size() || entries.cols() != domain.size()) {
    throw ValidationError("matrix shape does not match domain/codomain");
  }
}

OperatorMatrix OperatorMatrix::identity(const WeightedPointSpace& s) {
  return OperatorMatrix(s, s, Matrix::Identity(s.size(), s.size()));
}

PVector OperatorMatrix::apply(const PVector& v) const {
  if (v.space != domain) {
    throw ValidationError("vector space does not match operator domain");
  }
  return PVector(codomain, entries * v.coords);
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (b.codomain != a.domain) {
    throw ValidationError("operator composition: spaces do not match");
  }
  return OperatorMatrix(b.domain, a.codomain, a.entries * b.entries);
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  return compose(a, b);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.domain != b.domain || a.codomain != b.codomain) {
    throw ValidationError("operator sum: spaces do not match");
  }
  return OperatorMatrix(a.domain, a.codomain, a.entries + b.entries);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.domain != b.domain || a.codomain != b.codomain) {
    throw ValidationError("operator difference: spaces do not match");
  }
  return OperatorMatrix(a.domain, a.codomain, a.entries - b.entries);
}

OperatorMatrix operator*(Complex c, const OperatorMatrix& a) {
  return OperatorMatrix(a.domain, a.codomain, c * a.entries);
}

double vec_norm(const PVector& v, PExponent p) {
  const double pv = p.value();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.coords.size(); ++i) {
    acc += v.space.weights()[i] * std::pow(std::abs(v.coords[i]), pv);
  }
  return std::pow(acc, 1.0 / pv);
}

Matrix to_counting(const OperatorMatrix& a, PExponent p) {
  const double inv_p = 1.0 / p.value();
  Matrix out = a.entries;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      // ratio form so equal weights rescale by exactly 1
      out(i, j) *=
          std::pow(a.codomain.weights()[i] / a.domain.weights()[j], inv_p);
    }
  }
  return out;
}

namespace detail {

Rng::Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {
  next();
  next();
}

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return double(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

Complex Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return Complex(re, im);
}

double max_col_abs_sum(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    best = std::max(best, m.col(j).cwiseAbs().sum());
  }
  return best;
}

double max_row_abs_sum(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    best = std::max(best, m.row(i).cwiseAbs().sum());
  }
  return best;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

// |x|^{q-1} * phase(x), the duality map on coordinates; 0 maps to 0.
Vector dual_map(const Vector& x, double q) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    out[i] = (m == 0.0) ? Complex(0.0) : std::pow(m, q - 1.0) * (x[i] / m);
  }
  return out;
}

double counting_p_norm(const Vector& x, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc += std::pow(std::abs(x[i]), p);
  }
  return std::pow(acc, 1.0 / p);
}

// Boyd-Higham power iteration for the p->p norm of a counting-space matrix.
// Returns the best (valid) lower bound seen from the given start.
double power_iteration(const Matrix& m, double p, Vector x, int max_iters,
                       double tol) {
  const double q = p / (p - 1.0);
  double nx = counting_p_norm(x, p);
  if (nx == 0.0) return 0.0;
  x /= nx;
  double best = 0.0;
  double prev = -1.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector y = m * x;
    const double gamma = counting_p_norm(y, p);
    best = std::max(best, gamma);
    if (gamma == 0.0) break;
    Vector z = m.adjoint() * dual_map(y, p);
    const double nz = counting_p_norm(z, q);
    if (nz == 0.0) break;
    if (prev >= 0.0 && std::abs(gamma - prev) < tol) break;
    prev = gamma;
    x = dual_map(z, q);
    const double nn = counting_p_norm(x, p);
    if (nn == 0.0) break;
    x /= nn;
  }
  return best;
}

// min over the valid Riesz-Thorin interpolation routes through (1, inf)
// and through 2.
double interpolation_upper(const Matrix& m, double p) {
  const double n1 = max_col_abs_sum(m);
  const double ninf = max_row_abs_sum(m);
  const double n2 = spectral_norm(m);
  double upper = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
  if (p < 2.0) {
    // 1/p = theta/1 + (1-theta)/2
    const double theta = 2.0 / p - 1.0;
    upper = std::min(upper, std::pow(n1, theta) * std::pow(n2, 1.0 - theta));
  } else if (p > 2.0) {
    // 1/p = theta/2
    const double theta = 2.0 / p;
    upper = std::min(upper, std::pow(n2, theta) * std::pow(ninf, 1.0 - theta));
  }
  return upper;
}

}  // namespace
}  // namespace detail

NormEstimate op_norm(const OperatorMatrix& a, PExponent p,
                     const NormBudget& budget) {
  const Matrix m = to_counting(a, p);
  NormEstimate est;
  if (p.is_one()) {
    est.lower = est.upper = detail::max_col_abs_sum(m);
    est.methods.insert(NormMethod::ExactP1);
    return est;
  }
  if (p.is_two()) {
    est.lower = est.upper = detail::spectral_norm(m);
    est.methods.insert(NormMethod::ExactP2);
    return est;
  }
  if (budget.starts <= 0) {
    throw ValidationError("op_norm needs at least one start for general p");
  }
  const double pv = p.value();
  double lower = 0.0;
  for (int s = 0; s < budget.starts; ++s) {
    Vector x(m.cols());
    if (s == 0) {
      x.setOnes();
    } else if (s == 1) {
      // heaviest column
      Eigen::Index jbest = 0;
      double cbest = -1.0;
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double c = m.col(j).cwiseAbs().sum();
        if (c > cbest) {
          cbest = c;
          jbest = j;
        }
      }
      x.setZero();
      x[jbest] = 1.0;
    } else {
      detail::Rng rng(detail::Rng::mix(budget.seed, std::uint64_t(s)));
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] = rng.complex_normal();
      }
    }
    lower = std::max(lower, detail::power_iteration(m, pv, std::move(x),
                                                    budget.max_iters,
                                                    budget.tol));
  }
  est.lower = lower;
  est.upper = std::max(detail::interpolation_upper(m, pv), lower);
  est.methods = {NormMethod::PowerIteration, NormMethod::Interpolation};
  return est;
}

namespace {

// Ascent state for oracle_norm: maximize ||m x||_p over the unit p-sphere
// by normalized gradient steps with backtracking.
double ascend(const lpt::Matrix& m, double p, lpt::Vector x, int max_iters) {
  using lpt::Vector;
  const auto pnorm = [&](const Vector& v) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      acc += std::pow(std::abs(v[i]), p);
    }
    return std::pow(acc, 1.0 / p);
  };
  double nx = pnorm(x);
  if (nx == 0.0) return 0.0;
  x /= nx;
  double f = pnorm(m * x);
  double step = 0.5;
  for (int it = 0; it < max_iters && step > 1e-14; ++it) {
    const Vector y = m * x;
    // ascent direction: adjoint applied to the duality image of y
    Vector g(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double mod = std::abs(y[i]);
      g[i] = (mod == 0.0) ? lpt::Complex(0.0)
                          : std::pow(mod, p - 1.0) * (y[i] / mod);
    }
    Vector d = m.adjoint() * g;
    const double nd = d.norm();
    if (nd == 0.0) break;
    d /= nd;
    bool improved = false;
    while (step > 1e-14) {
      Vector cand = x + step * d;
      const double nc = pnorm(cand);
      if (nc > 0.0) {
        cand /= nc;
        const double fc = pnorm(m * cand);
        if (fc > f + 1e-15) {
          x = std::move(cand);
          f = fc;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
    step *= 1.6;
  }
  return f;
}

}  // namespace

double oracle_norm(const OperatorMatrix& a, PExponent p, std::uint64_t seed) {
  if (a.domain.size() > 4) {
    throw ValidationError("oracle_norm only supports domain dimension <= 4");
  }
  const Matrix m = to_counting(a, p);
  const Eigen::Index d = m.cols();
  const double pv = p.value();
  double best = 0.0;
  // deterministic grid of real-phase starts: all entries in {-1, 0, 1}
  std::vector<Vector> starts;
  const int total = int(std::pow(3.0, double(d)));
  for (int code = 1; code < total; ++code) {
    Vector x(d);
    int c = code;
    for (Eigen::Index i = 0; i < d; ++i) {
      x[i] = double(c % 3 - 1);
      c /= 3;
    }
    starts.push_back(std::move(x));
  }
  detail::Rng rng(detail::Rng::mix(seed, 0xabcdULL));
  for (int s = 0; s < 32; ++s) {
    Vector x(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      x[i] = rng.complex_normal();
    }
    starts.push_back(std::move(x));
  }
  for (auto& x : starts) {
    best = std::max(best, ascend(m, pv, std::move(x), 400));
  }
  return best;
}

}  // namespace lpt
