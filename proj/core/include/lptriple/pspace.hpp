#pragma once

// Finite weighted L^p spaces, vector p-norms, and certified p->p operator
// norm estimation. Everything downstream (tensor towers, group truncations,
// metric searches) measures through this module.

#include <complex>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lpt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation would exceed a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exponent p of an L^p space. Must satisfy 1 <= p < infinity.
class PExponent {
 public:
  explicit PExponent(double value);
  double value() const { return value_; }
  bool is_one() const { return value_ == 1.0; }
  bool is_two() const { return value_ == 2.0; }
  /// Holder-dual exponent p/(p-1); requires p > 1.
  double dual() const;

 private:
  double value_;
};

enum class SpaceKind { Probability, Counting };

/// A finite measure space: points with positive weights. Counting spaces
/// have all weights 1; probability spaces have weights summing to 1.
class WeightedPointSpace {
 public:
  static WeightedPointSpace counting(Eigen::Index n);
  static WeightedPointSpace uniform_probability(Eigen::Index n);
  static WeightedPointSpace probability(RealVector weights);

  Eigen::Index size() const { return weights_.size(); }
  SpaceKind kind() const { return kind_; }
  const RealVector& weights() const { return weights_; }

  bool operator==(const WeightedPointSpace& o) const {
    return kind_ == o.kind_ && weights_.size() == o.weights_.size() &&
           weights_ == o.weights_;
  }
  bool operator!=(const WeightedPointSpace& o) const { return !(*this == o); }

 private:
  WeightedPointSpace(SpaceKind kind, RealVector weights);
  SpaceKind kind_;
  RealVector weights_;
};

/// An element of L^p over a WeightedPointSpace.
struct PVector {
  WeightedPointSpace space;
  Vector coords;

  PVector(WeightedPointSpace s, Vector c);
};

/// A bounded operator between two weighted point spaces, stored densely.
/// Shape is codomain-size x domain-size.
struct OperatorMatrix {
  WeightedPointSpace domain;
  WeightedPointSpace codomain;
  Matrix entries;

  OperatorMatrix(WeightedPointSpace dom, WeightedPointSpace cod, Matrix m);

  static OperatorMatrix identity(const WeightedPointSpace& s);

  PVector apply(const PVector& v) const;
};

/// Composition a*b with space compatibility check.
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex c, const OperatorMatrix& a);

enum class NormMethod { ExactP1, ExactP2, PowerIteration, Interpolation, Oracle };

/// A certified interval [lower, upper] for a p->p operator norm.
struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::set<NormMethod> methods;

  bool exact() const {
    return methods.count(NormMethod::ExactP1) > 0 ||
           methods.count(NormMethod::ExactP2) > 0;
  }
};

/// Settings for the multi-start generalized power iteration.
struct NormBudget {
  int starts = 16;
  int max_iters = 200;
  double tol = 1e-12;
  std::uint64_t seed = 0;
};

/// (sum_i w_i |v_i|^p)^(1/p).
double vec_norm(const PVector& v, PExponent p);

/// Conjugates a by the isometry xi -> (w_i^{1/p} xi_i), yielding a matrix
/// whose p->p norm on counting spaces equals that of a on its weighted
/// spaces. Returns just the entries.
Matrix to_counting(const OperatorMatrix& a, PExponent p);

/// Certified p->p operator norm. Exact for p in {1, 2}; otherwise a power
/// iteration lower bound and a Riesz-Thorin interpolation upper bound.
NormEstimate op_norm(const OperatorMatrix& a, PExponent p,
                     const NormBudget& budget = {});

/// Independent brute-force lower-bound oracle for small matrices (dim <= 4):
/// projected-gradient ascent of ||a xi||_p over the unit p-sphere from a
/// deterministic grid of real-phase starts plus seeded random complex starts.
double oracle_norm(const OperatorMatrix& a, PExponent p, std::uint64_t seed = 0);

namespace detail {
// Deterministic scalar RNG helpers shared across search code; Box-Muller
// normals so output does not depend on libstdc++ distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();          // [0, 1)
  double normal();
  Complex complex_normal();
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  std::uint64_t next();
};

double max_col_abs_sum(const Matrix& m);
double max_row_abs_sum(const Matrix& m);
double spectral_norm(const Matrix& m);
}  // namespace detail

}  // namespace lpt
