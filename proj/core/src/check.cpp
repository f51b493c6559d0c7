#include "lptriple/check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lptriple/grouptriple.hpp"
#include "lptriple/pspace.hpp"
#include "lptriple/qmetric.hpp"
#include "lptriple/tensor.hpp"
#include "lptriple/uhftriple.hpp"

namespace lpt {

namespace {

using detail::Rng;

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = rng.complex_normal();
    }
  }
  return m;
}

OperatorMatrix random_counting_op(Rng& rng, Eigen::Index n) {
  const auto s = WeightedPointSpace::counting(n);
  return OperatorMatrix(s, s, random_matrix(rng, n, n));
}

class Recorder {
 public:
  explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

  void record(const std::string& suite, const std::string& name, bool ok,
              const std::string& detail = "") {
    out_.push_back({suite, name, ok, ok ? "" : detail});
  }

  template <typename F>
  void run(const std::string& suite, const std::string& name, F&& body) {
    try {
      std::ostringstream detail;
      const bool ok = body(detail);
      record(suite, name, ok, detail.str());
    } catch (const std::exception& e) {
      record(suite, name, false, std::string("exception: ") + e.what());
    }
  }

 private:
  std::vector<CheckResult>& out_;
};

const std::vector<std::vector<int>> kProfiles = {
    {1, 2}, {1, 2, 2}, {1, 3, 2}, {1, 2, 2, 2}};
const std::vector<double> kPGrid = {1.0, 1.5, 2.0, 3.0};

void check_pspace(Recorder& rec, const CheckOptions& opt) {
  const int samples = opt.quick ? 4 : 10;
  rec.run("pspace", "norm-interval-valid", [&](std::ostringstream& d) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x100 + std::uint64_t(s)));
      const auto a = random_counting_op(rng, 2 + s % 2);
      for (double pv : kPGrid) {
        const auto est = op_norm(a, PExponent(pv));
        if (est.lower > est.upper + 1e-12) {
          d << "lower " << est.lower << " > upper " << est.upper << " at p="
            << pv;
          return false;
        }
      }
    }
    return true;
  });
  rec.run("pspace", "norm-scaling", [&](std::ostringstream& d) {
    const double c = 2.5;
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x200 + std::uint64_t(s)));
      const auto a = random_counting_op(rng, 3);
      for (double pv : kPGrid) {
        const auto e1 = op_norm(a, PExponent(pv));
        const auto e2 = op_norm(Complex(c) * a, PExponent(pv));
        if (std::abs(e2.lower - c * e1.lower) > 1e-10 * (1.0 + e2.lower) ||
            std::abs(e2.upper - c * e1.upper) > 1e-10 * (1.0 + e2.upper)) {
          d << "scaling mismatch at p=" << pv;
          return false;
        }
      }
    }
    return true;
  });
  rec.run("pspace", "submultiplicativity-probe", [&](std::ostringstream& d) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x300 + std::uint64_t(s)));
      const auto a = random_counting_op(rng, 3);
      const auto b = random_counting_op(rng, 3);
      for (double pv : {1.5, 3.0}) {
        const PExponent p(pv);
        const double lhs = oracle_norm(a * b, p, opt.seed);
        const double rhs = op_norm(a, p).upper * op_norm(b, p).upper;
        if (lhs > rhs + 1e-6) {
          d << "oracle(ab)=" << lhs << " exceeds product bound " << rhs;
          return false;
        }
      }
    }
    return true;
  });
  rec.run("pspace", "p2-oracle-agreement", [&](std::ostringstream& d) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x400 + std::uint64_t(s)));
      const auto a = random_counting_op(rng, 3);
      const double exact = op_norm(a, PExponent(2.0)).lower;
      const double approx = oracle_norm(a, PExponent(2.0), opt.seed);
      if (std::abs(approx - exact) > 1e-3 * exact) {
        d << "oracle " << approx << " vs exact " << exact;
        return false;
      }
    }
    return true;
  });
  rec.run("pspace", "uniform-probability-invariance",
          [&](std::ostringstream& d) {
            Rng rng(Rng::mix(opt.seed, 0x500));
            const Matrix m = random_matrix(rng, 3, 3);
            const auto cs = WeightedPointSpace::counting(3);
            const auto us = WeightedPointSpace::uniform_probability(3);
            for (double pv : kPGrid) {
              const auto e1 = op_norm(OperatorMatrix(cs, cs, m), PExponent(pv));
              const auto e2 = op_norm(OperatorMatrix(us, us, m), PExponent(pv));
              if (e1.lower != e2.lower || e1.upper != e2.upper) {
                d << "counting vs uniform mismatch at p=" << pv;
                return false;
              }
            }
            return true;
          });
}

void check_tensor(Recorder& rec, const CheckOptions& opt) {
  const int samples = opt.quick ? 4 : 10;
  rec.run("tensor", "mixed-product-identity", [&](std::ostringstream& d) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x600 + std::uint64_t(s)));
      const auto a1 = random_counting_op(rng, 2);
      const auto a2 = random_counting_op(rng, 2);
      const auto b1 = random_counting_op(rng, 3);
      const auto b2 = random_counting_op(rng, 3);
      const Matrix lhs = (kron(a1, b1) * kron(a2, b2)).entries;
      const Matrix rhs = kron(a1 * a2, b1 * b2).entries;
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12) {
        d << "mixed-product residual " << (lhs - rhs).cwiseAbs().maxCoeff();
        return false;
      }
    }
    return true;
  });
  rec.run("tensor", "elementary-tensor-norm", [&](std::ostringstream& d) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x700 + std::uint64_t(s)));
      const auto sp1 = WeightedPointSpace::uniform_probability(2);
      const auto sp2 = WeightedPointSpace::uniform_probability(3);
      Vector v1(2), v2(3);
      for (int i = 0; i < 2; ++i) v1[i] = rng.complex_normal();
      for (int i = 0; i < 3; ++i) v2[i] = rng.complex_normal();
      const PVector xi(sp1, v1), eta(sp2, v2);
      for (double pv : kPGrid) {
        const PExponent p(pv);
        const double lhs = vec_norm(kron(xi, eta), p);
        const double rhs = vec_norm(xi, p) * vec_norm(eta, p);
        if (std::abs(lhs - rhs) > 1e-12 * (1.0 + rhs)) {
          d << "tensor norm " << lhs << " vs product " << rhs;
          return false;
        }
      }
    }
    return true;
  });
  rec.run("tensor", "p2-norm-multiplicativity", [&](std::ostringstream& d) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(Rng::mix(opt.seed, 0x800 + std::uint64_t(s)));
      const auto a = random_counting_op(rng, 2);
      const auto b = random_counting_op(rng, 2);
      const PExponent p(2.0);
      const double lhs = op_norm(kron(a, b), p).lower;
      const double rhs = op_norm(a, p).lower * op_norm(b, p).lower;
      if (std::abs(lhs - rhs) > 1e-8 * rhs) {
        d << "|a(x)b|=" << lhs << " vs |a||b|=" << rhs;
        return false;
      }
    }
    return true;
  });
  rec.run("tensor", "general-p-interval-multiplicativity",
          [&](std::ostringstream& d) {
            for (int s = 0; s < samples; ++s) {
              Rng rng(Rng::mix(opt.seed, 0x900 + std::uint64_t(s)));
              const auto a = random_counting_op(rng, 2);
              const auto b = random_counting_op(rng, 2);
              for (double pv : {1.5, 3.0}) {
                const PExponent p(pv);
                const auto ea = op_norm(a, p);
                const auto eb = op_norm(b, p);
                const auto eab = op_norm(kron(a, b), p);
                if (ea.lower * eb.lower > eab.upper + 1e-9 ||
                    eab.lower > ea.upper * eb.upper + 1e-9) {
                  d << "interval containment failed at p=" << pv;
                  return false;
                }
              }
            }
            return true;
          });
}

GroupAlgElem random_supported(Rng& rng, const GroupModel& g,
                              const BallTruncation& t, int max_supp) {
  std::vector<std::pair<GroupElement, Complex>> terms;
  const int count = 1 + int(rng.uniform() * max_supp);
  for (int i = 0; i < count; ++i) {
    const auto idx = std::size_t(rng.uniform() * double(t.elements.size()));
    terms.emplace_back(t.elements[std::min(idx, t.elements.size() - 1)],
                       rng.complex_normal());
  }
  return GroupAlgElem(g, std::move(terms));
}

void check_group(Recorder& rec, const CheckOptions& opt) {
  const int samples = opt.quick ? 4 : 10;
  rec.run("group", "convolution-homomorphism", [&](std::ostringstream& d) {
    for (const auto& g :
         {GroupModel::integers(), GroupModel::free_group(2)}) {
      const auto len = LengthFn::builtin(g);
      const double r = g.kind() == GroupKind::Free ? 4.0 : 6.0;
      const auto outer = ball(g, len, r);
      const auto inner = ball(g, len, r / 2.0);
      for (int s = 0; s < samples; ++s) {
        Rng rng(Rng::mix(opt.seed, 0xa00 + std::uint64_t(s)));
        const auto a = random_supported(rng, g, inner, 3);
        const auto b = random_supported(rng, g, inner, 3);
        const Matrix prod =
            (lambda_matrix(g, a, outer) * lambda_matrix(g, b, outer)).entries;
        const Matrix conv = lambda_matrix(g, convolve(g, a, b), outer).entries;
        for (const auto& x : inner.elements) {
          for (const auto& y : inner.elements) {
            const int i = outer.find(g, x);
            const int j = outer.find(g, y);
            if (std::abs(prod(i, j) - conv(i, j)) > 1e-12) {
              d << "sub-block mismatch at (" << g.encode(x) << ","
                << g.encode(y) << ")";
              return false;
            }
          }
        }
      }
    }
    return true;
  });
  rec.run("group", "commutator-monotone-in-radius",
          [&](std::ostringstream& d) {
            const auto g = GroupModel::integers();
            const auto len = LengthFn::builtin(g);
            Rng rng(Rng::mix(opt.seed, 0xb00));
            const GroupAlgElem a(
                g, {{{1}, rng.complex_normal()}, {{2}, rng.complex_normal()}});
            double prev = 0.0;
            for (double r = 2.0; r <= (opt.quick ? 5.0 : 8.0); r += 1.0) {
              const auto t = ball(g, len, r);
              const double lower =
                  commutator_norm_est(g, a, t, len, PExponent(2.0)).lower;
              if (lower < prev - 1e-12) {
                d << "lower bound decreased at R=" << r;
                return false;
              }
              prev = lower;
            }
            return true;
          });
  rec.run("group", "commutator-bound-consistency", [&](std::ostringstream& d) {
    struct Case {
      GroupModel g;
      double radius;
    };
    const std::vector<Case> cases = {{GroupModel::integers(), 6.0},
                                     {GroupModel::free_group(2), 3.0},
                                     {GroupModel::cyclic(6), 3.0}};
    for (const auto& [g, r] : cases) {
      const auto len = LengthFn::builtin(g);
      const auto t = ball(g, len, r);
      for (int s = 0; s < samples; ++s) {
        Rng rng(Rng::mix(opt.seed, 0xc00 + std::uint64_t(s)));
        const auto a = random_supported(rng, g, t, 4);
        for (double pv : kPGrid) {
          const PExponent p(pv);
          const double lower = commutator_norm_est(g, a, t, len, p).lower;
          const double bound = commutator_bound(a, len, p);
          if (lower > bound + 1e-9) {
            d << "truncation lower " << lower << " exceeds analytic bound "
              << bound;
            return false;
          }
        }
      }
    }
    return true;
  });
  rec.run("group", "dirac-spectrum-is-length-multiset",
          [&](std::ostringstream& d) {
            const auto g = GroupModel::free_group(2);
            const auto len = LengthFn::builtin(g);
            const auto t = ball(g, len, 2.0);
            const auto dm = dirac_matrix(t, len);
            auto eig = hermitian_eigenvalues(dm);
            std::vector<double> lengths;
            for (const auto& e : t.elements) lengths.push_back(len(e));
            std::sort(lengths.begin(), lengths.end());
            for (Eigen::Index i = 0; i < eig.size(); ++i) {
              if (std::abs(eig[i] - lengths[std::size_t(i)]) > 1e-12) {
                d << "spectrum mismatch at index " << i;
                return false;
              }
            }
            return true;
          });
  rec.run("group", "resolvent-identity-on-ball", [&](std::ostringstream& d) {
    const auto g = GroupModel::integers();
    const auto len = LengthFn::builtin(g);
    const auto t = ball(g, len, 4.0);
    const Complex lambda(-1.0, 0.0);
    const auto [jf, residual] =
        resolvent_approx(t, len, ResolventMode::Shifted, lambda);
    const auto dm = dirac_matrix(t, len);
    const Matrix lhs =
        (dm.entries - lambda * Matrix::Identity(dm.entries.rows(),
                                                dm.entries.cols())) *
        jf.entries;
    const Matrix id = Matrix::Identity(lhs.rows(), lhs.cols());
    if ((lhs - id).cwiseAbs().maxCoeff() > 1e-12) {
      d << "(D-lambda)J != I on the ball";
      return false;
    }
    if (std::abs(residual - 1.0 / 6.0) > 1e-12) {
      d << "shifted residual " << residual << " != 1/6";
      return false;
    }
    const auto [kf, res2] = resolvent_approx(t, len, ResolventMode::Squared);
    if (std::abs(res2 - 1.0 / 26.0) > 1e-12) {
      d << "squared residual " << res2 << " != 1/26";
      return false;
    }
    return true;
  });
}

void check_uhf(Recorder& rec, const CheckOptions& opt) {
  const auto profiles = opt.quick
                            ? std::vector<std::vector<int>>{{1, 2}, {1, 2, 2}}
                            : kProfiles;
  rec.run("uhf", "tower-structural-identities", [&](std::ostringstream& d) {
    for (const auto& dims : profiles) {
      const auto tower = build_tower(UHFSpecConfig{dims});
      const int m_levels = tower.levels();
      const Eigen::Index total = tower.total_dim();
      for (int n = 0; n <= m_levels; ++n) {
        const Matrix pi_iota =
            (tower.pi[std::size_t(n)] * tower.iota[std::size_t(n)]).entries;
        const Matrix idn =
            Matrix::Identity(pi_iota.rows(), pi_iota.cols());
        if ((pi_iota - idn).cwiseAbs().maxCoeff() > 1e-12) {
          d << "pi_n iota_n != Id at n=" << n;
          return false;
        }
        for (double pv : kPGrid) {
          const PExponent p(pv);
          const auto iso = op_norm(tower.iota[std::size_t(n)], p);
          if (iso.lower > 1.0 + 1e-9 || iso.upper < 1.0 - 1e-9) {
            d << "iota_n not an isometry at n=" << n << " p=" << pv;
            return false;
          }
          if (op_norm(tower.pi[std::size_t(n)], p).upper > 1.0 + 1e-9) {
            d << "|pi_n| > 1 at n=" << n << " p=" << pv;
            return false;
          }
        }
      }
      for (int n = 0; n <= m_levels; ++n) {
        for (int m = n; m <= m_levels; ++m) {
          const Matrix pn = tower.P[std::size_t(n)].entries;
          const Matrix pm = tower.P[std::size_t(m)].entries;
          if ((pn * pm - pn).cwiseAbs().maxCoeff() > 1e-12 ||
              (pm * pn - pn).cwiseAbs().maxCoeff() > 1e-12) {
            d << "P_n P_m != P_n at (" << n << "," << m << ")";
            return false;
          }
        }
      }
      Matrix qsum = Matrix::Zero(total, total);
      for (int n = 0; n <= m_levels; ++n) {
        const Matrix qn = tower.Q[std::size_t(n)].entries;
        qsum += qn;
        if ((qn * qn - qn).cwiseAbs().maxCoeff() > 1e-12) {
          d << "Q_n not idempotent at n=" << n;
          return false;
        }
        for (int m = 0; m < n; ++m) {
          const Matrix qm = tower.Q[std::size_t(m)].entries;
          if ((qn * qm).cwiseAbs().maxCoeff() > 1e-12 ||
              (qm * qn).cwiseAbs().maxCoeff() > 1e-12) {
            d << "Q_n Q_m != 0 at (" << n << "," << m << ")";
            return false;
          }
        }
      }
      if ((qsum - Matrix::Identity(total, total)).cwiseAbs().maxCoeff() >
          1e-12) {
        d << "sum of Q_n is not the identity";
        return false;
      }
      const Matrix pm_last = tower.P.back().entries;
      if ((pm_last - Matrix::Identity(total, total)).cwiseAbs().maxCoeff() >
          1e-12) {
        d << "P_M is not the identity";
        return false;
      }
    }
    return true;
  });
  rec.run("uhf", "level-commutation-lemma", [&](std::ostringstream& d) {
    const int cores = opt.quick ? 5 : 20;
    for (const auto& dims : profiles) {
      const auto tower = build_tower(UHFSpecConfig{dims});
      for (int n = 0; n <= tower.levels(); ++n) {
        for (int s = 0; s < cores; ++s) {
          Rng rng(Rng::mix(opt.seed, 0xd00 + std::uint64_t(s) * 31 +
                                         std::uint64_t(n)));
          const auto a = embed_algebra(
              tower, n, random_matrix(rng, tower.level_dim(n),
                                      tower.level_dim(n)));
          for (int m = n; m <= tower.levels(); ++m) {
            const Matrix resid =
                a.embedded.entries * tower.P[std::size_t(m)].entries -
                tower.P[std::size_t(m)].entries * a.embedded.entries;
            if (resid.cwiseAbs().maxCoeff() > 1e-12) {
              d << "aP_m != P_ma at level " << n << " m=" << m;
              return false;
            }
          }
        }
      }
    }
    return true;
  });
  rec.run("uhf", "dirac-spectral-decomposition", [&](std::ostringstream& d) {
    for (const auto& dims : profiles) {
      const auto tower = build_tower(UHFSpecConfig{dims});
      std::vector<double> av{0.0};
      for (int n = 1; n <= tower.levels(); ++n) av.push_back(double(n));
      const AlphaSeq alpha(av);
      const auto dm = dirac(tower, alpha);
      std::vector<double> expected;
      for (int n = 0; n <= tower.levels(); ++n) {
        const auto eig = hermitian_eigenvalues(tower.Q[std::size_t(n)]);
        int rank = 0;
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
          if (eig[i] > 0.5) ++rank;
        }
        for (int i = 0; i < rank; ++i) expected.push_back(av[std::size_t(n)]);
      }
      std::sort(expected.begin(), expected.end());
      const auto eig = hermitian_eigenvalues(dm);
      for (Eigen::Index i = 0; i < eig.size(); ++i) {
        if (std::abs(eig[i] - expected[std::size_t(i)]) > 1e-8) {
          d << "eigenvalue mismatch at index " << i;
          return false;
        }
      }
      const auto r = resolvent_inverse(tower, alpha);
      const Matrix i_d2 =
          Matrix::Identity(tower.total_dim(), tower.total_dim()) +
          dm.entries * dm.entries;
      if ((i_d2 * r.entries -
           Matrix::Identity(tower.total_dim(), tower.total_dim()))
              .cwiseAbs()
              .maxCoeff() > 1e-10) {
        d << "(I+D^2)R != I";
        return false;
      }
    }
    return true;
  });
  rec.run("uhf", "strong-convergence-profile", [&](std::ostringstream& d) {
    for (const auto& dims : profiles) {
      const auto tower = build_tower(UHFSpecConfig{dims});
      Rng rng(Rng::mix(opt.seed, 0xe00));
      Vector eta(tower.total_dim());
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        eta[i] = rng.complex_normal();
      }
      for (double pv : kPGrid) {
        const PExponent p(pv);
        const double base = vec_norm(PVector(tower.full_space(), eta), p);
        double last = -1.0;
        for (int n = 0; n <= tower.levels(); ++n) {
          const Vector diff = tower.P[std::size_t(n)].entries * eta - eta;
          last = vec_norm(PVector(tower.full_space(), diff), p);
          if (last > 2.0 * base + 1e-9) {
            d << "|P_n eta - eta| exceeds 2|eta| at n=" << n;
            return false;
          }
        }
        if (last > 1e-12) {
          d << "profile does not end at 0, final value " << last;
          return false;
        }
      }
    }
    return true;
  });
  rec.run("uhf", "nested-ranges-strictly-increase",
          [&](std::ostringstream& d) {
            for (const auto& dims : profiles) {
              const auto tower = build_tower(UHFSpecConfig{dims});
              Eigen::Index prev = 0;
              for (int n = 0; n <= tower.levels(); ++n) {
                const auto eig =
                    hermitian_eigenvalues(tower.P[std::size_t(n)]);
                Eigen::Index rank = 0;
                for (Eigen::Index i = 0; i < eig.size(); ++i) {
                  if (eig[i] > 0.5) ++rank;
                }
                if (rank != tower.level_dim(n) || (n > 0 && rank <= prev)) {
                  d << "range dimension not strictly increasing at n=" << n;
                  return false;
                }
                prev = rank;
              }
              if (prev != tower.total_dim()) {
                d << "final range is not the full space";
                return false;
              }
            }
            return true;
          });
}

void check_qmetric(Recorder& rec, const CheckOptions& opt) {
  const int samples = opt.quick ? 5 : 30;
  rec.run("qmetric", "key-estimate-identity", [&](std::ostringstream& d) {
    int done = 0;
    for (const auto& dims : kProfiles) {
      const auto tower = build_tower(UHFSpecConfig{dims});
      std::vector<double> av{0.0};
      for (int n = 1; n <= tower.levels(); ++n) av.push_back(double(n));
      const AlphaSeq alpha(av);
      for (int s = 0; s < samples && done < samples; ++s, ++done) {
        Rng rng(Rng::mix(opt.seed, 0xf00 + std::uint64_t(done)));
        const int level = tower.levels();
        const auto a = embed_algebra(
            tower, level, random_matrix(rng, tower.level_dim(level),
                                        tower.level_dim(level)));
        const int n = 1 + int(rng.uniform() * tower.levels()) % tower.levels();
        for (double pv : {2.0, 1.5}) {
          const auto [lhs, rhs] = key_estimate(tower, alpha, a, n,
                                               PExponent(pv));
          if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, rhs)) {
            d << "lhs " << lhs << " != rhs " << rhs << " at n=" << n;
            return false;
          }
        }
      }
    }
    return true;
  });
  rec.run("qmetric", "metric-zero-on-equal-states",
          [&](std::ostringstream& d) {
            const auto tower = build_tower(UHFSpecConfig{{1, 2}});
            const AlphaSeq alpha({0.0, 1.0});
            const auto omega = State::point(tower, 0);
            const auto est = mk_lower(tower, alpha, omega, omega,
                                      PExponent(2.0));
            if (est.lower > 1e-9) {
              d << "mk(omega,omega) = " << est.lower;
              return false;
            }
            return true;
          });
  rec.run("qmetric", "metric-alpha-homogeneity", [&](std::ostringstream& d) {
    const auto tower = build_tower(UHFSpecConfig{{1, 2}});
    const auto omega = State::point(tower, 0);
    const auto psi = State::point(tower, 1);
    const double v1 = mk_lower(tower, AlphaSeq({0.0, 1.0}), omega, psi,
                               PExponent(2.0))
                          .lower;
    const double v2 = mk_lower(tower, AlphaSeq({0.0, 2.0}), omega, psi,
                               PExponent(2.0))
                          .lower;
    if (std::abs(v2 - v1 / 2.0) > 2e-2) {
      d << "mk(2 alpha) = " << v2 << " vs mk(alpha)/2 = " << v1 / 2.0;
      return false;
    }
    return true;
  });
  rec.run("qmetric", "metric-grid-oracle-agreement",
          [&](std::ostringstream& d) {
            const auto tower = build_tower(UHFSpecConfig{{1, 2}});
            const AlphaSeq alpha({0.0, 1.0});
            const auto est = mk_lower(tower, alpha, State::point(tower, 0),
                                      State::point(tower, 1), PExponent(2.0));
            const double oracle = metric_grid_oracle_12(1.0);
            if (std::abs(est.lower - oracle) > 5e-3) {
              d << "mk_lower " << est.lower << " vs grid oracle " << oracle;
              return false;
            }
            return true;
          });
  rec.run("qmetric", "degeneracy-probe-dims-12", [&](std::ostringstream& d) {
    const auto tower = build_tower(UHFSpecConfig{{1, 2}});
    const AlphaSeq alpha({0.0, 1.0});
    const auto report = degeneracy_probe(tower, alpha);
    if (report.dimension < 2) {
      d << "kernel dimension " << report.dimension << " < 2";
      return false;
    }
    // the explicit zero-row/column-sum witness must lie in the kernel span
    Matrix w(2, 2);
    w << 1.0, -1.0, -1.0, 1.0;
    Vector wv = Eigen::Map<const Vector>(w.data(), 4);
    wv /= wv.norm();
    Vector resid = wv;
    for (const auto& k : report.witnesses) {
      const Vector kv = Eigen::Map<const Vector>(k.data(), 4);
      resid -= kv * (kv.adjoint() * wv);
    }
    if (resid.norm() > 1e-10) {
      d << "explicit witness not reproduced, residual " << resid.norm();
      return false;
    }
    return true;
  });
  rec.run("qmetric", "cn-kernel-flag-dims-12", [&](std::ostringstream& d) {
    const auto tower = build_tower(UHFSpecConfig{{1, 2}});
    const auto table = cn_constants(tower, PExponent(2.0));
    if (table.kernel_ok.at(0)) {
      d << "kernel flag unexpectedly true at n=1";
      return false;
    }
    if (std::isfinite(table.c.at(0))) {
      d << "c_1 unexpectedly finite";
      return false;
    }
    return true;
  });
  rec.run("qmetric", "alpha-auto-rule", [&](std::ostringstream& d) {
    CnTable cn;
    cn.c = {1.0, 1.0, 1.0};
    cn.kernel_ok = {true, true, true};
    const auto alpha = alpha_auto(cn);
    const std::vector<double> expected = {0.0, 2.0, 4.0, 8.0};
    if (alpha.values != expected) {
      d << "alpha_auto gave unexpected values";
      return false;
    }
    if (mk_upper(alpha, cn) > 2.0) {
      d << "mk_upper " << mk_upper(alpha, cn) << " > 2";
      return false;
    }
    CnTable bad;
    bad.c = {1.0, CnTable::infinite};
    bad.kernel_ok = {true, false};
    try {
      alpha_auto(bad);
      d << "alpha_auto accepted an infinite c_n";
      return false;
    } catch (const DegeneracyError&) {
    }
    return true;
  });
  rec.run("qmetric", "quotient-distance-examples", [&](std::ostringstream& d) {
    const auto tower = build_tower(UHFSpecConfig{{1, 2}});
    const PExponent p(2.0);
    const auto id_op = embed_algebra(tower, 1, Matrix::Identity(2, 2));
    const auto e_id = quotient_distance(tower, id_op, p);
    if (e_id.upper > 1e-9) {
      d << "distance of identity to scalars is " << e_id.upper;
      return false;
    }
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    const auto e_diag = quotient_distance(tower, embed_algebra(tower, 1, diag),
                                          p);
    if (std::abs(e_diag.upper - 1.0) > 1e-6) {
      d << "distance of diag(1,-1) is " << e_diag.upper << ", expected 1";
      return false;
    }
    return true;
  });
}

}  // namespace

double metric_grid_oracle_12(double alpha1) {
  // Independent of op_norm: closed-form 2x2 spectral norm, exhaustive grid
  // over real cores plus pattern-search refinement.
  const auto spectral2 = [](const Eigen::Matrix2d& m) {
    const double fro2 = m.squaredNorm();
    const double det = m.determinant();
    const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
    return std::sqrt((fro2 + std::sqrt(disc)) / 2.0);
  };
  const auto ratio = [&](double a, double b, double c, double dd) {
    // D = alpha1 * (I - P_0); [D, X] = (alpha1/2) [[b-c, a-d], [d-a, c-b]]
    Eigen::Matrix2d comm;
    comm << (b - c) / 2.0, (a - dd) / 2.0, (dd - a) / 2.0, (c - b) / 2.0;
    comm *= alpha1;
    const double den = spectral2(comm);
    if (den < 1e-12) return -1.0;
    return std::abs(a - dd) / den;
  };
  double best = 0.0;
  double bx[4] = {0, 0, 0, 0};
  const int steps = 9;
  for (int ia = 0; ia < steps; ++ia) {
    for (int ib = 0; ib < steps; ++ib) {
      for (int ic = 0; ic < steps; ++ic) {
        for (int id = 0; id < steps; ++id) {
          const double a = -1.0 + 0.25 * ia;
          const double b = -1.0 + 0.25 * ib;
          const double c = -1.0 + 0.25 * ic;
          const double dd = -1.0 + 0.25 * id;
          const double r = ratio(a, b, c, dd);
          if (r > best) {
            best = r;
            bx[0] = a;
            bx[1] = b;
            bx[2] = c;
            bx[3] = dd;
          }
        }
      }
    }
  }
  double step = 0.1;
  while (step > 1e-8) {
    bool improved = false;
    for (int i = 0; i < 4; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        double cand[4] = {bx[0], bx[1], bx[2], bx[3]};
        cand[i] += sgn * step;
        const double r = ratio(cand[0], cand[1], cand[2], cand[3]);
        if (r > best) {
          best = r;
          std::copy(cand, cand + 4, bx);
          improved = true;
        }
      }
    }
    if (!improved) step /= 2.0;
  }
  return best;
}

std::vector<CheckResult> run_checks(const CheckOptions& options) {
  std::vector<CheckResult> results;
  Recorder rec(results);
  check_pspace(rec, options);
  check_tensor(rec, options);
  check_group(rec, options);
  check_uhf(rec, options);
  check_qmetric(rec, options);
  return results;
}

}  // namespace lpt
