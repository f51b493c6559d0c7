// Acceptance gate: one pass/fail line per criterion, exit nonzero if any
// criterion fails. Each criterion is self-contained and seeded.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lptriple/check.hpp"
#include "lptriple/grouptriple.hpp"
#include "lptriple/qmetric.hpp"
#include "lptriple/tensor.hpp"
#include "lptriple/uhftriple.hpp"

using namespace lpt;

namespace {

const std::vector<std::vector<int>> kProfiles = {
    {1, 2}, {1, 2, 2}, {1, 3, 2}, {1, 2, 2, 2}};
const std::vector<double> kPGrid = {1.0, 1.5, 2.0, 3.0};

int numeric_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-8) ++r;
  }
  return r;
}

Matrix random_core(detail::Rng& rng, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) {
    m(i / n, i % n) = rng.complex_normal();
  }
  return m;
}

// ---- criterion bodies; each returns true on pass, filling a detail note ----

bool tower_identity_suite(std::ostream& note) {
  for (const auto& dims : kProfiles) {
    const auto t = build_tower(UHFSpecConfig{dims});
    const int M = t.levels();
    const Eigen::Index N = t.total_dim();
    for (int n = 0; n <= M; ++n) {
      const Matrix pid =
          t.pi[std::size_t(n)].entries * t.iota[std::size_t(n)].entries;
      if ((pid - Matrix::Identity(pid.rows(), pid.cols()))
              .cwiseAbs()
              .maxCoeff() > 1e-12) {
        note << "pi_n iota_n != Id at n=" << n;
        return false;
      }
      for (int m = 0; m <= M; ++m) {
        const Matrix pp =
            t.P[std::size_t(n)].entries * t.P[std::size_t(m)].entries;
        if ((pp - t.P[std::size_t(std::min(n, m))].entries)
                .cwiseAbs()
                .maxCoeff() > 1e-12) {
          note << "P_nP_m != P_min at (" << n << "," << m << ")";
          return false;
        }
        const Matrix qq =
            t.Q[std::size_t(n)].entries * t.Q[std::size_t(m)].entries;
        const Matrix expect = n == m ? t.Q[std::size_t(n)].entries
                                     : Matrix::Zero(N, N);
        if ((qq - expect).cwiseAbs().maxCoeff() > 1e-12) {
          note << "Q product law fails at (" << n << "," << m << ")";
          return false;
        }
      }
    }
    Matrix qsum = Matrix::Zero(N, N);
    for (const auto& q : t.Q) qsum += q.entries;
    if ((qsum - Matrix::Identity(N, N)).cwiseAbs().maxCoeff() > 1e-12) {
      note << "sum Q_n != I";
      return false;
    }
    for (double pv : kPGrid) {
      const PExponent p(pv);
      for (int n = 0; n <= M; ++n) {
        const auto ei = op_norm(t.iota[std::size_t(n)], p);
        if (ei.lower > 1.0 + 1e-9 || ei.upper < 1.0 - 1e-9) {
          note << "iota_" << n << " not an isometry at p=" << pv;
          return false;
        }
        if (op_norm(t.pi[std::size_t(n)], p).upper > 1.0 + 1e-9) {
          note << "pi_" << n << " not a contraction at p=" << pv;
          return false;
        }
      }
    }
  }
  note << "4 profiles x 4 exponents";
  return true;
}

bool commutation_lemma(std::ostream& note) {
  int checked = 0;
  for (const auto& dims : kProfiles) {
    const auto t = build_tower(UHFSpecConfig{dims});
    for (int s = 0; s < 20; ++s) {
      detail::Rng rng(detail::Rng::mix(900, std::uint64_t(checked)));
      for (int n = 0; n <= t.levels(); ++n) {
        const auto a = embed_algebra(t, n, random_core(rng, t.level_dim(n)));
        for (int m = n; m <= t.levels(); ++m) {
          const Matrix c =
              a.embedded.entries * t.P[std::size_t(m)].entries -
              t.P[std::size_t(m)].entries * a.embedded.entries;
          if (c.cwiseAbs().maxCoeff() > 1e-12) {
            note << "aP_m != P_ma at dims size " << dims.size() << " n=" << n
                 << " m=" << m;
            return false;
          }
        }
      }
      ++checked;
    }
  }
  note << checked << " seeded cores";
  return true;
}

bool dirac_spectrum(std::ostream& note) {
  const auto t = build_tower(UHFSpecConfig{{1, 2, 2}});
  const auto d = dirac(t, AlphaSeq({0.0, 1.0, 2.0}));
  RealVector eig = hermitian_eigenvalues(d);
  std::vector<double> got(eig.data(), eig.data() + eig.size());
  std::sort(got.begin(), got.end());
  const std::vector<double> want = {0.0, 1.0, 2.0, 2.0};
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (std::abs(got[i] - want[i]) > 1e-8) {
      note << "eigenvalue " << i << " = " << got[i];
      return false;
    }
  }
  for (const auto& dims : kProfiles) {
    const auto tw = build_tower(UHFSpecConfig{dims});
    std::vector<double> av(dims.size(), 0.0);
    for (std::size_t i = 1; i < av.size(); ++i) av[i] = 0.5 + double(i);
    const AlphaSeq alpha(av);
    const auto dd = dirac(tw, alpha);
    const auto rr = resolvent_inverse(tw, alpha);
    const Eigen::Index n = tw.total_dim();
    const Matrix lhs =
        (Matrix::Identity(n, n) + dd.entries * dd.entries) * rr.entries;
    if ((lhs - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
      note << "(I+D^2)R != I on profile of size " << dims.size();
      return false;
    }
  }
  note << "spectrum {0,1,2,2}; inverses verified";
  return true;
}

bool tensor_multiplicativity(std::ostream& note) {
  const auto c2 = WeightedPointSpace::counting(2);
  const auto c3 = WeightedPointSpace::counting(3);
  for (int s = 0; s < 50; ++s) {
    detail::Rng rng(detail::Rng::mix(1200, std::uint64_t(s)));
    const OperatorMatrix a(c2, c2, random_core(rng, 2));
    const OperatorMatrix b(c3, c3, random_core(rng, 3));
    const auto ab = kron(a, b);
    const PExponent two(2);
    const double lhs = op_norm(ab, two).lower;
    const double rhs = op_norm(a, two).lower * op_norm(b, two).lower;
    if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, rhs)) {
      note << "p=2 multiplicativity off by " << std::abs(lhs - rhs);
      return false;
    }
    for (double pv : {1.5, 3.0}) {
      const PExponent p(pv);
      const auto ea = op_norm(a, p);
      const auto eb = op_norm(b, p);
      const auto eab = op_norm(ab, p);
      if (ea.lower * eb.lower > eab.upper + 1e-9 ||
          eab.lower > ea.upper * eb.upper + 1e-9) {
        note << "interval containment fails at p=" << pv;
        return false;
      }
    }
  }
  note << "50 seeded pairs";
  return true;
}

bool group_triple(std::ostream& note) {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  const GroupAlgElem d1(z, {{z.parse("1"), 1.0}});
  const auto est3 =
      commutator_norm_est(z, d1, ball(z, lz, 3.0), lz, PExponent(2));
  if (std::abs(est3.lower - 1.0) > 1e-8) {
    note << "delta_1 commutator lower = " << est3.lower;
    return false;
  }
  double prev = 0.0;
  for (double r = 2.0; r <= 8.0; r += 1.0) {
    const double cur =
        commutator_norm_est(z, d1, ball(z, lz, r), lz, PExponent(2)).lower;
    if (cur < prev - 1e-12) {
      note << "lower bound not monotone at R=" << r;
      return false;
    }
    prev = cur;
  }
  const std::vector<GroupModel> groups = {z, GroupModel::free_group(2),
                                          GroupModel::cyclic(6)};
  int tested = 0;
  for (const auto& g : groups) {
    const auto len = LengthFn::builtin(g);
    const auto trunc = ball(g, len, 3.0);
    for (int s = 0; s < 10; ++s) {
      detail::Rng rng(detail::Rng::mix(1500, std::uint64_t(tested)));
      std::vector<std::pair<GroupElement, Complex>> terms;
      const int nsupp = 1 + int(rng.uniform() * 4.0);
      for (int k = 0; k < nsupp; ++k) {
        const auto& e = trunc.elements[std::size_t(
            rng.uniform() * double(trunc.elements.size()))];
        terms.emplace_back(e, rng.complex_normal());
      }
      const GroupAlgElem a(g, std::move(terms));
      for (double pv : {1.0, 2.0, 3.0}) {
        const PExponent p(pv);
        const auto est = commutator_norm_est(g, a, trunc, len, p);
        if (est.lower > commutator_bound(a, len, p) + 1e-9) {
          note << "lower exceeds analytic bound at p=" << pv;
          return false;
        }
      }
      ++tested;
    }
  }
  for (double r = 2.0; r <= 6.0; r += 1.0) {
    const auto [k, resid] =
        resolvent_approx(ball(z, lz, r), lz, ResolventMode::Squared);
    (void)k;
    if (resid != 1.0 / (1.0 + (r + 1.0) * (r + 1.0))) {
      note << "squared residual wrong at R=" << r;
      return false;
    }
  }
  note << tested << " random elements across 3 groups";
  return true;
}

bool key_estimate_identity(std::ostream& note) {
  int done = 0;
  for (const auto& dims : kProfiles) {
    const auto t = build_tower(UHFSpecConfig{dims});
    std::vector<double> av(dims.size(), 0.0);
    for (std::size_t i = 1; i < av.size(); ++i) av[i] = 1.0 + 0.5 * double(i);
    const AlphaSeq alpha(av);
    for (int s = 0; s < 8 && done < 30; ++s) {
      detail::Rng rng(detail::Rng::mix(1800, std::uint64_t(done)));
      const int level = t.levels();
      const auto a = embed_algebra(t, level, random_core(rng, t.level_dim(level)));
      for (int n = 1; n <= t.levels(); ++n) {
        for (double pv : {1.0, 2.0, 3.0}) {
          const auto [lhs, rhs] = key_estimate(t, alpha, a, n, PExponent(pv));
          if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, rhs)) {
            note << "lhs != rhs at n=" << n << " p=" << pv;
            return false;
          }
        }
      }
      ++done;
    }
  }
  note << done << " configurations";
  return true;
}

bool metric_oracle_agreement(std::ostream& note) {
  const auto t = build_tower(UHFSpecConfig{{1, 2}});
  const AlphaSeq alpha({0.0, 1.0});
  const auto p0 = State::point(t, 0);
  const auto p1 = State::point(t, 1);
  const PExponent two(2);

  const double oracle = metric_grid_oracle_12(1.0);
  const auto est = mk_lower(t, alpha, p0, p1, two);
  if (std::abs(est.lower - oracle) > 5e-3) {
    note << "search " << est.lower << " vs oracle " << oracle;
    return false;
  }
  const auto same = mk_lower(t, alpha, p0, p0, two);
  if (same.lower > 1e-9) {
    note << "mk(omega, omega) = " << same.lower;
    return false;
  }
  const auto scaled = mk_lower(t, AlphaSeq({0.0, 2.0}), p0, p1, two);
  if (std::abs(2.0 * scaled.lower - est.lower) > 2e-2) {
    note << "homogeneity violated: " << 2.0 * scaled.lower << " vs "
         << est.lower;
    return false;
  }
  note << "search vs grid oracle within 5e-3";
  return true;
}

bool degeneracy_documented(std::ostream& note) {
  const auto t = build_tower(UHFSpecConfig{{1, 2}});
  const auto report = degeneracy_probe(t, AlphaSeq({0.0, 1.0}));
  if (report.dimension < 2) {
    note << "kernel dimension " << report.dimension;
    return false;
  }
  Matrix w(2, 2);
  w << 1, -1, -1, 1;
  Matrix b(4, Eigen::Index(report.witnesses.size()));
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    b.col(Eigen::Index(i)) =
        Eigen::Map<const Vector>(report.witnesses[i].data(), 4);
  }
  const Vector target = Eigen::Map<const Vector>(w.data(), 4);
  const Vector coef = b.completeOrthogonalDecomposition().solve(target);
  if ((b * coef - target).norm() / target.norm() > 1e-10) {
    note << "explicit witness not reproduced";
    return false;
  }
  const auto cn = cn_constants(t, PExponent(2));
  if (cn.kernel_ok.at(0)) {
    note << "kernel flag unexpectedly true at n=1";
    return false;
  }
  note << "kernel dim " << report.dimension << ", flag false at n=1";
  return true;
}

bool alpha_rule(std::ostream& note) {
  CnTable cn;
  cn.c = {1.0, 1.0, 1.0};
  cn.kernel_ok = {true, true, true};
  const auto alpha = alpha_auto(cn);
  const std::vector<double> want = {0.0, 2.0, 4.0, 8.0};
  if (alpha.values != want) {
    note << "alpha_auto mismatch";
    return false;
  }
  const double upper = mk_upper(alpha, cn);
  if (upper > 2.0) {
    note << "mk_upper = " << upper;
    return false;
  }
  note << "alpha (0,2,4,8), upper " << upper;
  return true;
}

bool determinism(std::ostream& note) {
#ifdef LPLAB_PATH
  namespace fs = std::filesystem;
  const fs::path tmp =
      fs::temp_directory_path() / ("acc_det_" + std::to_string(std::rand()));
  fs::create_directories(tmp);
  const std::string base = std::string(LPLAB_PATH) +
                           " check --seed 0 --out ";
  auto run_to = [&](const std::string& dir) {
    const std::string cmd =
        base + (tmp / dir).string() + " > /dev/null 2> /dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };
  const bool ok = run_to("a") && run_to("b") &&
                  slurp(tmp / "a" / "check_report.csv") ==
                      slurp(tmp / "b" / "check_report.csv") &&
                  !slurp(tmp / "a" / "check_report.csv").empty() &&
                  slurp(tmp / "a" / "check_report.json") ==
                      slurp(tmp / "b" / "check_report.json");
  fs::remove_all(tmp);
  if (!ok) {
    note << "reports differ between identical runs";
    return false;
  }
  note << "byte-identical check reports";
  return true;
#else
  note << "driver binary unavailable";
  return false;
#endif
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*body)(std::ostream&);
  };
  const Criterion criteria[] = {
      {"tower identity suite", tower_identity_suite},
      {"commutation lemma", commutation_lemma},
      {"dirac spectrum and resolvent", dirac_spectrum},
      {"tensor multiplicativity", tensor_multiplicativity},
      {"group triple estimates", group_triple},
      {"key estimate identity", key_estimate_identity},
      {"metric oracle agreement", metric_oracle_agreement},
      {"degeneracy documented", degeneracy_documented},
      {"alpha selection rule", alpha_rule},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    std::ostringstream note;
    bool ok = false;
    try {
      ok = c.body(note);
    } catch (const std::exception& e) {
      note << "exception: " << e.what();
    }
    if (!ok) ++failures;
    std::cout << "criterion " << index << " (" << c.name << "): "
              << (ok ? "pass" : "FAIL") << " — " << note.str() << '\n';
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << '\n';
  return failures == 0 ? 0 : 1;
}
