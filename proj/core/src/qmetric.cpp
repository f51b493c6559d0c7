#include "lptriple/qmetric.hpp"

#include <algorithm>
#include <cmath>

namespace lpt {

State::State(Kind kind, Vector weights)
    : kind_(kind), weights_(std::move(weights)) {
  if (std::abs(weights_.sum() - Complex(1.0)) > 1e-12) {
    throw ValidationError("state weights must sum to 1");
  }
  if (kind_ != Kind::Custom) {
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (weights_[i].imag() != 0.0 || weights_[i].real() < 0.0) {
        throw ValidationError("point/trace states need nonnegative weights");
      }
    }
  }
}

State State::point(const UHFTower& tower, Eigen::Index x) {
  if (x < 0 || x >= tower.total_dim()) {
    throw ValidationError("point state index out of range");
  }
  Vector w = Vector::Zero(tower.total_dim());
  w[x] = 1.0;
  return State(Kind::Point, std::move(w));
}

State State::trace(const UHFTower& tower) {
  return State(Kind::Trace, Vector::Constant(tower.total_dim(),
                                             1.0 / double(tower.total_dim())));
}

State State::custom(const UHFTower& tower, Vector weights) {
  if (weights.size() != tower.total_dim()) {
    throw ValidationError("state weight count does not match the tower");
  }
  return State(Kind::Custom, std::move(weights));
}

Complex State::eval(const Matrix& a) const {
  if (a.rows() != weights_.size() || a.cols() != weights_.size()) {
    throw ValidationError("state and operator dimensions do not match");
  }
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) s += weights_[i] * a(i, i);
  return s;
}

bool CnTable::all_finite() const {
  for (double v : c) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::pair<double, double> key_estimate(const UHFTower& tower,
                                       const AlphaSeq& alpha,
                                       const LevelOperator& a, int n,
                                       PExponent p) {
  if (n < 1 || n > tower.levels()) {
    throw ValidationError("key_estimate level index out of range");
  }
  const Eigen::Index dim = tower.total_dim();
  const Vector ones = Vector::Ones(dim);
  const Vector q0_one = tower.Q[0].entries * ones;  // equals ones
  const OperatorMatrix comm = commutator(tower, alpha, a);
  const Vector lhs_vec =
      tower.Q[std::size_t(n)].entries * (comm.entries * q0_one);
  const Vector rhs_vec =
      tower.Q[std::size_t(n)].entries * (a.embedded.entries * ones);
  const double lhs = vec_norm(PVector(tower.full_space(), lhs_vec), p);
  const double rhs = alpha.values[std::size_t(n)] *
                     vec_norm(PVector(tower.full_space(), rhs_vec), p);
  return {lhs, rhs};
}

namespace {

// Orthonormal basis of the range of an (idempotent) operator, columns.
Matrix range_basis(const Matrix& q, double tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(q, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
  }
  return svd.matrixU().leftCols(r);
}

// Orthonormal basis (columns, as column-major vec'd matrices) of the
// kernel of a -> [D, a] on the full matrix algebra.
Matrix commutator_kernel(const Matrix& d, double tol = 1e-9) {
  const Eigen::Index n = d.rows();
  if (n > 64) {
    throw ResourceError("commutator kernel probe limited to dimension 64");
  }
  const Matrix id = Matrix::Identity(n, n);
  Matrix k(n * n, n * n);
  // vec(D a - a D) = (I (x) D - D^T (x) I) vec(a), column-major vec
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) = id(i, j) * d - d.transpose()(i, j) * id;
    }
  }
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(n * n - rank);
}

Matrix unvec(const Vector& v, Eigen::Index n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace

CnTable cn_constants(const UHFTower& tower, PExponent p,
                     const SearchBudget& budget) {
  const Eigen::Index dim = tower.total_dim();
  const Vector ones = Vector::Ones(dim);
  CnTable table;
  for (int n = 1; n <= tower.levels(); ++n) {
    const Matrix& q = tower.Q[std::size_t(n)].entries;
    const Matrix u = range_basis(q);
    const Eigen::Index r = u.cols();
    // V_n = Q_n A_M has basis {u_i e_l^T}; the evaluation v -> v 1 sends
    // every basis element with leading column u_i to u_i, so the kernel
    // flag is the rank condition on that evaluation map.
    Matrix eval(dim, r * dim);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index l = 0; l < dim; ++l) {
        eval.col(i * dim + l) = u.col(i);
      }
    }
    Eigen::JacobiSVD<Matrix> svd(eval);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) ++rank;
    }
    const bool flag = rank == r * dim;
    table.kernel_ok.push_back(flag);
    if (!flag) {
      table.c.push_back(CnTable::infinite);
      continue;
    }
    // budgeted multi-start ascent of op_norm(v).upper / ||v 1||_p over V_n
    double best = 1.0;
    for (int s = 0; s < budget.starts; ++s) {
      detail::Rng rng(detail::Rng::mix(budget.seed, 0x5a00 + std::uint64_t(s)));
      Matrix coeff(r, dim);
      for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index l = 0; l < dim; ++l) {
          coeff(i, l) = rng.complex_normal();
        }
      }
      const auto ratio = [&](const Matrix& t) -> double {
        const Matrix v = u * t;
        const double denom =
            vec_norm(PVector(tower.full_space(), v * ones), p);
        if (denom < 1e-12) return -1.0;
        return op_norm(OperatorMatrix(tower.full_space(), tower.full_space(),
                                      v),
                       p)
                   .upper /
               denom;
      };
      double cur = ratio(coeff);
      double step = 0.5;
      for (int it = 0; it < budget.max_iters && step > 1e-10; ++it) {
        Matrix probe(r, dim);
        for (Eigen::Index i = 0; i < r; ++i) {
          for (Eigen::Index l = 0; l < dim; ++l) {
            probe(i, l) = rng.complex_normal();
          }
        }
        const Matrix cand = coeff + step * probe;
        const double rc = ratio(cand);
        if (rc > cur) {
          coeff = cand;
          cur = rc;
          step *= 1.2;
        } else {
          step *= 0.8;
        }
      }
      best = std::max(best, cur);
    }
    table.c.push_back(best);
  }
  return table;
}

AlphaSeq alpha_auto(const CnTable& cn) {
  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < cn.c.size(); ++i) {
    if (!std::isfinite(cn.c[i])) {
      throw DegeneracyError(int(i) + 1,
                            "cannot auto-select alpha: c_n is infinite at "
                            "level " +
                                std::to_string(i + 1));
    }
    values.push_back(std::pow(2.0, double(i + 1)) * std::max(cn.c[i], 1.0));
  }
  return AlphaSeq(std::move(values));
}

double mk_upper(const AlphaSeq& alpha, const CnTable& cn) {
  if (int(cn.c.size()) != alpha.levels()) {
    throw ValidationError("c_n table and alpha have different lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < cn.c.size(); ++i) {
    const double a = alpha.values[i + 1];
    if (!std::isfinite(cn.c[i]) || a == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    sum += cn.c[i] / a;
  }
  return 2.0 * sum;
}

MetricEstimate mk_lower(const UHFTower& tower, const AlphaSeq& alpha,
                        const State& omega, const State& psi, PExponent p,
                        const SearchBudget& budget) {
  if (budget.starts <= 0) {
    throw ValidationError("mk_lower needs a nonzero start budget");
  }
  const Eigen::Index n = tower.total_dim();
  const OperatorMatrix d_op = dirac(tower, alpha);
  const Vector dw = omega.weights() - psi.weights();

  const auto delta = [&](const Matrix& a) -> Complex {
    Complex s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += dw[i] * a(i, i);
    return s;
  };
  const auto comm_upper = [&](const Matrix& a) -> double {
    const Matrix c = d_op.entries * a - a * d_op.entries;
    return op_norm(OperatorMatrix(tower.full_space(), tower.full_space(), c), p)
        .upper;
  };

  MetricEstimate est;
  // Directions with [D, a] = 0: if the difference functional sees one, the
  // truncated metric is infinite and we report the witness.
  const Matrix kernel = commutator_kernel(d_op.entries);
  for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
    const Matrix a = unvec(kernel.col(k), n);
    if (std::abs(delta(a)) > 1e-9) {
      est.lower = std::numeric_limits<double>::infinity();
      est.witness = a;
      return est;
    }
  }

  const auto project_out_kernel = [&](Matrix a) -> Matrix {
    Vector v = vec(a);
    v -= kernel * (kernel.adjoint() * v);
    return unvec(v, n);
  };
  const auto ratio = [&](const Matrix& a) -> double {
    const double num = std::abs(delta(a));
    const double den = comm_upper(a);
    if (den < 1e-14) return num > 1e-12 ? -1.0 : 0.0;
    return num / den;
  };

  double best = 0.0;
  Matrix best_a = Matrix::Zero(n, n);
  for (int s = 0; s < budget.starts; ++s) {
    detail::Rng rng(detail::Rng::mix(budget.seed, 0x33cc00 + std::uint64_t(s)));
    Matrix a(n, n);
    if (s == 0) {
      // natural first guess: the difference functional itself on the diagonal
      a = Matrix(dw.asDiagonal());
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          a(i, j) = rng.complex_normal();
        }
      }
    }
    a = project_out_kernel(a);
    if (vec(a).norm() < 1e-12) continue;
    a /= vec(a).norm();
    double cur = ratio(a);
    double step = 0.25;
    for (int it = 0; it < budget.max_iters && step > 1e-10; ++it) {
      // numeric gradient over real and imaginary parts
      Matrix grad = Matrix::Zero(n, n);
      const double h = 1e-6;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          Matrix ar = a;
          ar(i, j) += h;
          Matrix ai = a;
          ai(i, j) += Complex(0.0, h);
          grad(i, j) = Complex((ratio(project_out_kernel(ar)) - cur) / h,
                               (ratio(project_out_kernel(ai)) - cur) / h);
        }
      }
      const double gn = vec(grad).norm();
      if (gn < 1e-12) break;
      grad /= gn;
      bool improved = false;
      while (step > 1e-10) {
        Matrix cand = project_out_kernel(a + step * grad);
        const double cn_ = vec(cand).norm();
        if (cn_ > 1e-12) {
          cand /= cn_;
          const double rc = ratio(cand);
          if (rc > cur + 1e-14) {
            a = std::move(cand);
            cur = rc;
            improved = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!improved) break;
      step *= 1.5;
    }
    if (cur > best) {
      best = cur;
      best_a = a;
    }
  }
  // certify: rescale the witness so the certified commutator upper bound is 1
  const double den = comm_upper(best_a);
  if (best > 0.0 && den > 0.0) {
    est.witness = best_a / den;
    est.lower = std::abs(delta(est.witness));
  } else {
    est.witness = Matrix::Zero(n, n);
    est.lower = 0.0;
  }
  return est;
}

NormEstimate quotient_distance(const UHFTower& tower, const LevelOperator& a,
                               PExponent p, const SearchBudget& budget) {
  const auto eval = [&](Complex lambda) -> NormEstimate {
    Matrix m = a.embedded.entries;
    m.diagonal().array() -= lambda;
    return op_norm(OperatorMatrix(tower.full_space(), tower.full_space(), m),
                   p);
  };
  const double radius = 2.0 * op_norm(a.embedded, p).upper + 1e-12;
  double best_upper = std::numeric_limits<double>::infinity();
  double best_lower = std::numeric_limits<double>::infinity();
  const auto probe = [&](Complex lambda) -> double {
    const NormEstimate e = eval(lambda);
    best_upper = std::min(best_upper, e.upper);
    best_lower = std::min(best_lower, e.lower);
    return e.upper;
  };
  // f(lambda) is convex; alternate golden-section sweeps on Re and Im.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double cx = 0.0, cy = 0.0;
  double span = radius;
  const int sweeps = std::max(2, budget.max_iters / 30);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int axis = 0; axis < 2; ++axis) {
      double lo = (axis == 0 ? cx : cy) - span;
      double hi = (axis == 0 ? cx : cy) + span;
      double x1 = hi - phi * (hi - lo);
      double x2 = lo + phi * (hi - lo);
      const auto at = [&](double t) {
        return axis == 0 ? probe(Complex(t, cy)) : probe(Complex(cx, t));
      };
      double f1 = at(x1), f2 = at(x2);
      for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = at(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = at(x2);
        }
      }
      (axis == 0 ? cx : cy) = (lo + hi) / 2.0;
    }
    span *= 0.35;
  }
  probe(Complex(cx, cy));
  NormEstimate out = eval(Complex(cx, cy));
  out.lower = std::max(0.0, best_lower);
  out.upper = std::max(best_upper, out.lower);
  return out;
}

DegeneracyReport degeneracy_probe(const UHFTower& tower,
                                  const AlphaSeq& alpha) {
  const OperatorMatrix d = dirac(tower, alpha);
  const Matrix kernel = commutator_kernel(d.entries);
  DegeneracyReport report;
  report.dimension = int(kernel.cols());
  const Eigen::Index n = tower.total_dim();
  for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
    report.witnesses.push_back(unvec(kernel.col(k), n));
  }
  return report;
}

}  // namespace lpt
