#pragma once

// Truncations of reduced group algebras with length-function Dirac
// operators: ball enumeration, the compressed left regular representation,
// commutator estimates, and finite-rank resolvent approximants.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lptriple/pspace.hpp"

namespace lpt {

enum class GroupKind { Integers, Lattice, Free, Cyclic };

/// Elements are stored as integer vectors:
///   integers: {n}; lattice(d): d coordinates; cyclic(m): {k} with 0<=k<m;
///   free(k): a reduced word with letters +-(i+1) for generator i.
using GroupElement = std::vector<int>;

class GroupModel {
 public:
  static GroupModel integers();
  static GroupModel lattice(int d);
  static GroupModel free_group(int k);
  static GroupModel cyclic(int m);

  GroupKind kind() const { return kind_; }
  int param() const { return param_; }

  GroupElement identity() const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement invert(const GroupElement& a) const;
  /// Generators together with their inverses.
  std::vector<GroupElement> generators() const;

  std::string encode(const GroupElement& e) const;
  GroupElement parse(const std::string& s) const;

 private:
  GroupModel(GroupKind kind, int param) : kind_(kind), param_(param) {}
  GroupKind kind_;
  int param_;
};

/// A length function with its evaluator and the smallest achievable length
/// value strictly above a given radius (nullopt when the ball at that
/// radius already exhausts the group).
struct LengthFn {
  std::function<double(const GroupElement&)> eval;
  std::function<std::optional<double>(double)> next_length_beyond;

  double operator()(const GroupElement& e) const { return eval(e); }

  /// The canonical word-length-style function for each built-in family:
  /// |n| on the integers, l^1 on lattices, reduced word length on free
  /// groups, min(k, m-k) on cyclic groups.
  static LengthFn builtin(const GroupModel& g);
};

/// The ball B_L(R), enumerated and ordered by (length, encoding).
struct BallTruncation {
  double radius;
  std::vector<GroupElement> elements;
  std::map<std::string, int> index;  // encoding -> position
  WeightedPointSpace space;          // counting, |ball| points

  int find(const GroupModel& g, const GroupElement& e) const;  // -1 if absent
};

BallTruncation ball(const GroupModel& g, const LengthFn& length, double radius,
                    std::size_t cap = 100000);

/// A finitely supported element of the group algebra.
class GroupAlgElem {
 public:
  GroupAlgElem() = default;
  GroupAlgElem(const GroupModel& g,
               std::vector<std::pair<GroupElement, Complex>> terms);

  const std::vector<std::pair<GroupElement, Complex>>& support() const {
    return terms_;
  }
  double l1_norm() const;

 private:
  std::vector<std::pair<GroupElement, Complex>> terms_;
};

/// Convolution product (a*b)(g) = sum_k a(k) b(k^{-1} g).
GroupAlgElem convolve(const GroupModel& g, const GroupAlgElem& a,
                      const GroupAlgElem& b);

/// Compression of the left regular representation to the ball:
/// entry M[g,h] = a(g h^{-1}).
OperatorMatrix lambda_matrix(const GroupModel& g, const GroupAlgElem& a,
                             const BallTruncation& trunc);

/// Diagonal Dirac matrix with entries L(g) in ball order.
OperatorMatrix dirac_matrix(const BallTruncation& trunc, const LengthFn& length);

/// Analytic upper bound (||a||_1^p * sum_{g in supp a} L(g)^p)^(1/p) for the
/// commutator of the Dirac with the regular representation of a.
double commutator_bound(const GroupAlgElem& a, const LengthFn& length,
                        PExponent p);

/// Certified estimate of ||[D, lambda_p(a)]|| compressed to the ball. The
/// lower field is a valid lower bound for the untruncated norm.
NormEstimate commutator_norm_est(const GroupModel& g, const GroupAlgElem& a,
                                 const BallTruncation& trunc,
                                 const LengthFn& length, PExponent p,
                                 const NormBudget& budget = {});

enum class ResolventMode { Squared, Shifted };

/// Finite-rank diagonal approximant of (I+D^2)^{-1} (squared mode) or of
/// (D - lambda I)^{-1} (shifted mode), together with the analytic tail
/// residual over elements outside the ball.
std::pair<OperatorMatrix, double> resolvent_approx(const BallTruncation& trunc,
                                                   const LengthFn& length,
                                                   ResolventMode mode,
                                                   Complex lambda = Complex(0));

}  // namespace lpt
