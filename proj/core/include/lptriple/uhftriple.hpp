#pragma once

// The truncated UHF tensor tower: product probability spaces, the
// structural maps iota_n / pi_n / P_n / Q_n, level-algebra embeddings, and
// the tower Dirac operator D_alpha with its resolvent.

#include <vector>

#include "lptriple/pspace.hpp"
#include "lptriple/tensor.hpp"

namespace lpt {

/// Level dimensions d(0), ..., d(M) with d(0) = 1 and d(j) >= 2 for j >= 1.
/// Each level space X_j is d(j) points with normalized counting measure.
struct UHFSpecConfig {
  std::vector<int> dims;

  int levels() const { return int(dims.size()) - 1; }  // M
  void validate() const;
};

/// The truncated tower over X_{<=M}. All operators act on (or into) the
/// flattened probability space of the full product.
struct UHFTower {
  UHFSpecConfig spec;
  std::vector<ProductSpace> spaces;      // X_{<=n}, n = 0..M
  std::vector<OperatorMatrix> iota;      // X_{<=n} -> X_{<=M}
  std::vector<OperatorMatrix> pi;        // X_{<=M} -> X_{<=n}
  std::vector<OperatorMatrix> P;         // P_n = iota_n pi_n
  std::vector<OperatorMatrix> Q;         // Q_0 = P_0, Q_n = P_n - P_{n-1}

  int levels() const { return spec.levels(); }
  Eigen::Index total_dim() const { return full_space().size(); }
  const WeightedPointSpace& full_space() const { return spaces.back().flat; }
  /// Product of d(j) for j <= n.
  Eigen::Index level_dim(int n) const;
  /// Product of d(j) for j > n (trailing block X_{(n,M]}).
  Eigen::Index trailing_dim(int n) const;
};

UHFTower build_tower(const UHFSpecConfig& spec, Eigen::Index dim_cap = 4096);

/// P_{m,n} on the trailing space X_{(n,M]}: average over coordinates beyond
/// m, replicated back. Satisfies P_m (eta1 (x) eta2) = eta1 (x) P_{m,n} eta2.
OperatorMatrix partial_projector(const UHFTower& tower, int n, int m);

/// The Dirac coefficient sequence: alpha_0 = 0, alpha_n > 0 for n >= 1.
struct AlphaSeq {
  std::vector<double> values;

  explicit AlphaSeq(std::vector<double> v);
  int levels() const { return int(values.size()) - 1; }
};

/// A level-n algebra element together with its embedding core (x) Id.
struct LevelOperator {
  int level;
  Matrix core;
  OperatorMatrix embedded;
};

LevelOperator embed_algebra(const UHFTower& tower, int n, const Matrix& core);

/// D = sum_{n=1}^{M} alpha_n Q_n. Annihilates constants.
OperatorMatrix dirac(const UHFTower& tower, const AlphaSeq& alpha);

/// R = P_0 + sum_{n>=1} (1+alpha_n^2)^{-1} Q_n, the two-sided inverse of
/// I + D^2 at the truncation level.
OperatorMatrix resolvent_inverse(const UHFTower& tower, const AlphaSeq& alpha);

/// [D, a] for an embedded level operator; checks [Q_m, a] = 0 for m above
/// the level.
OperatorMatrix commutator(const UHFTower& tower, const AlphaSeq& alpha,
                          const LevelOperator& a);

/// Eigenvalues of a Hermitian operator matrix, ascending.
RealVector hermitian_eigenvalues(const OperatorMatrix& a);

}  // namespace lpt
