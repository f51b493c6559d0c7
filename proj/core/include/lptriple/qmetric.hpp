#pragma once

// States on truncated algebras, the Connes-Rieffel extended pseudometric,
// the seminorm-equivalence constants c_n, and the alpha-selection rule.

#include <limits>
#include <vector>

#include "lptriple/uhftriple.hpp"

namespace lpt {

/// Raised when a finite c_n table is required but some level is degenerate.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(int level, const std::string& what)
      : std::runtime_error(what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

/// A unital norm-one diagonal functional omega(a) = sum_x c_x a_xx.
class State {
 public:
  enum class Kind { Point, Trace, Custom };

  static State point(const UHFTower& tower, Eigen::Index x);
  static State trace(const UHFTower& tower);
  static State custom(const UHFTower& tower, Vector weights);

  Kind kind() const { return kind_; }
  const Vector& weights() const { return weights_; }
  Complex eval(const Matrix& a) const;
  Complex eval(const OperatorMatrix& a) const { return eval(a.entries); }

 private:
  State(Kind kind, Vector weights);
  Kind kind_;
  Vector weights_;
};

/// Two-sided estimate of a metric value, with the witness achieving lower.
struct MetricEstimate {
  double lower = 0.0;       // may be +infinity
  double upper = std::numeric_limits<double>::infinity();
  Matrix witness;           // full-level core achieving lower (if finite)
};

/// Per-level seminorm-equivalence constants. c[n-1] corresponds to level n;
/// infinity marks a degenerate level whose kernel flag is false.
struct CnTable {
  std::vector<double> c;
  std::vector<bool> kernel_ok;

  static constexpr double infinite = std::numeric_limits<double>::infinity();
  bool all_finite() const;
};

/// Budget for the seeded multi-start searches in this module.
struct SearchBudget {
  int starts = 8;
  int max_iters = 150;
  std::uint64_t seed = 0;
};

/// Evaluates both sides of the identity Q_n [D,a] Q_0 1 = alpha_n Q_n a 1:
/// lhs = ||Q_n [D,a] (Q_0 1)||_p, rhs = alpha_n ||Q_n a 1||_p.
std::pair<double, double> key_estimate(const UHFTower& tower,
                                       const AlphaSeq& alpha,
                                       const LevelOperator& a, int n,
                                       PExponent p);

/// For each level n computes whether the seminorm a -> ||Q_n a 1||_p has the
/// same kernel as a -> ||Q_n a|| on V_n = Q_n A_M, and when it does, a
/// budgeted estimate of the equivalence constant c_n.
CnTable cn_constants(const UHFTower& tower, PExponent p,
                     const SearchBudget& budget = {});

/// alpha_n = 2^n max(c_n, 1); throws DegeneracyError on an infinite entry.
AlphaSeq alpha_auto(const CnTable& cn);

/// Certified lower bound for mk_D(omega, psi) at the truncation level:
/// budgeted search over feasible a with op_norm([D,a], p).upper <= 1.
MetricEstimate mk_lower(const UHFTower& tower, const AlphaSeq& alpha,
                        const State& omega, const State& psi, PExponent p,
                        const SearchBudget& budget = {});

/// Diameter-style upper bound 2 sum c_n / alpha_n; infinite when any level
/// is degenerate or has alpha_n = 0.
double mk_upper(const AlphaSeq& alpha, const CnTable& cn);

/// Distance of an embedded level operator to the scalars: min over lambda
/// of op_norm(a - lambda I, p), as a certified interval.
NormEstimate quotient_distance(const UHFTower& tower, const LevelOperator& a,
                               PExponent p, const SearchBudget& budget = {});

/// Numerical kernel of a -> [D, a] on the full level algebra.
struct DegeneracyReport {
  int dimension = 0;
  std::vector<Matrix> witnesses;  // full-level cores spanning the kernel
};

DegeneracyReport degeneracy_probe(const UHFTower& tower, const AlphaSeq& alpha);

}  // namespace lpt
