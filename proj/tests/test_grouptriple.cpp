#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lptriple/grouptriple.hpp"

using namespace lpt;

namespace {

GroupAlgElem delta(const GroupModel& g, const GroupElement& e,
                   Complex c = Complex(1)) {
  return GroupAlgElem(g, {{e, c}});
}

std::vector<double> sorted_lengths(const OperatorMatrix& d) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < d.entries.rows(); ++i) {
    out.push_back(d.entries(i, i).real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("group model arithmetic and encoding") {
  const auto z = GroupModel::integers();
  CHECK(z.encode(z.identity()) == "0");
  CHECK(GroupModel::free_group(2).encode(GroupModel::free_group(2).identity()) ==
        "e");
  CHECK(z.multiply(z.parse("3"), z.parse("-5")) == z.parse("-2"));
  CHECK(z.invert(z.parse("4")) == z.parse("-4"));

  const auto l2 = GroupModel::lattice(2);
  CHECK(l2.multiply(l2.parse("1,-2"), l2.parse("-1,5")) == l2.parse("0,3"));

  const auto f2 = GroupModel::free_group(2);
  // aB * b = a after reduction
  CHECK(f2.encode(f2.multiply(f2.parse("aB"), f2.parse("b"))) == "a");
  CHECK(f2.multiply(f2.parse("aBa"), f2.invert(f2.parse("aBa"))) ==
        f2.identity());

  const auto c6 = GroupModel::cyclic(6);
  CHECK(c6.multiply(c6.parse("4"), c6.parse("5")) == c6.parse("3"));
  CHECK(c6.invert(c6.parse("2")) == c6.parse("4"));
}

TEST_CASE("builtin length functions") {
  const auto z = GroupModel::integers();
  CHECK(LengthFn::builtin(z)(z.parse("-7")) == 7.0);
  const auto l2 = GroupModel::lattice(2);
  CHECK(LengthFn::builtin(l2)(l2.parse("1,-2")) == 3.0);
  const auto f2 = GroupModel::free_group(2);
  CHECK(LengthFn::builtin(f2)(f2.parse("aBa")) == 3.0);
  const auto c6 = GroupModel::cyclic(6);
  CHECK(LengthFn::builtin(c6)(c6.parse("4")) == 2.0);
  // symmetry and subadditivity on a few samples
  detail::Rng rng(4);
  const auto len = LengthFn::builtin(f2);
  const auto ballf = ball(f2, len, 3.0);
  for (int s = 0; s < 20; ++s) {
    const auto& x =
        ballf.elements[std::size_t(rng.uniform() * ballf.elements.size())];
    const auto& y =
        ballf.elements[std::size_t(rng.uniform() * ballf.elements.size())];
    CHECK(len(f2.invert(x)) == len(x));
    CHECK(len(f2.multiply(x, y)) <= len(x) + len(y) + 1e-12);
  }
}

TEST_CASE("ball enumeration") {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  CHECK(ball(z, lz, 3.0).elements.size() == 7);

  const auto f2 = GroupModel::free_group(2);
  CHECK(ball(f2, LengthFn::builtin(f2), 2.0).elements.size() == 17);

  const auto l2 = GroupModel::lattice(2);
  CHECK(ball(l2, LengthFn::builtin(l2), 1.0).elements.size() == 5);

  // identity first, closed under inversion, ordered by length
  const auto b = ball(z, lz, 2.0);
  CHECK(b.elements.front() == z.identity());
  for (const auto& e : b.elements) {
    CHECK(b.find(z, z.invert(e)) >= 0);
    CHECK(lz(e) <= 2.0);
  }
  for (std::size_t i = 1; i < b.elements.size(); ++i) {
    CHECK(lz(b.elements[i - 1]) <= lz(b.elements[i]));
  }
}

TEST_CASE("ball cap signals resource exhaustion") {
  const auto f2 = GroupModel::free_group(2);
  CHECK_THROWS_AS(ball(f2, LengthFn::builtin(f2), 10.0, 100), ResourceError);
}

TEST_CASE("regular representation compression") {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  const auto b2 = ball(z, lz, 2.0);

  const auto id = lambda_matrix(z, delta(z, z.identity()), b2);
  CHECK((id.entries - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);

  // delta_1 compresses to the shift: entry (n, n-1) = 1
  const auto sh = lambda_matrix(z, delta(z, z.parse("1")), b2);
  int ones = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const auto gi = b2.elements[std::size_t(i)];
      const auto gj = b2.elements[std::size_t(j)];
      const bool expect = gi[0] == gj[0] + 1;
      CHECK(sh.entries(i, j) == Complex(expect ? 1.0 : 0.0));
      ones += expect;
    }
  }
  CHECK(ones == 4);

  // compressions of group translations are contractions
  for (double pv : {1.0, 1.5, 2.0, 3.0}) {
    CHECK(op_norm(sh, PExponent(pv)).upper <= 1.0 + 1e-10);
  }
}

TEST_CASE("convolution matches the matrix product on the interior") {
  const auto z = GroupModel::integers();
  const auto a = delta(z, z.parse("1"), Complex(2, 1));
  const auto b = delta(z, z.parse("1"), Complex(0, 1));
  const auto ab = convolve(z, a, b);
  REQUIRE(ab.support().size() == 1);
  CHECK(ab.support()[0].first == z.parse("2"));
  CHECK(ab.support()[0].second == Complex(2, 1) * Complex(0, 1));

  const auto lz = LengthFn::builtin(z);
  const auto big = ball(z, lz, 6.0);
  const auto inner = ball(z, lz, 3.0);
  const Matrix prod =
      (lambda_matrix(z, a, big) * lambda_matrix(z, b, big)).entries;
  const Matrix conv = lambda_matrix(z, ab, big).entries;
  for (const auto& g : inner.elements) {
    for (const auto& h : inner.elements) {
      const auto i = big.find(z, g);
      const auto j = big.find(z, h);
      CHECK(std::abs(prod(i, j) - conv(i, j)) <= 1e-12);
    }
  }
}

TEST_CASE("dirac matrix spectra") {
  const auto z = GroupModel::integers();
  const auto bz = ball(z, LengthFn::builtin(z), 2.0);
  const auto dz = dirac_matrix(bz, LengthFn::builtin(z));
  CHECK(dz.entries(0, 0) == Complex(0));  // identity element listed first
  CHECK(sorted_lengths(dz) == std::vector<double>{0, 1, 1, 2, 2});

  const auto f2 = GroupModel::free_group(2);
  const auto bf = ball(f2, LengthFn::builtin(f2), 1.0);
  CHECK(sorted_lengths(dirac_matrix(bf, LengthFn::builtin(f2))) ==
        std::vector<double>{0, 1, 1, 1, 1});

  const auto c4 = GroupModel::cyclic(4);
  const auto bc = ball(c4, LengthFn::builtin(c4), 2.0);
  CHECK(sorted_lengths(dirac_matrix(bc, LengthFn::builtin(c4))) ==
        std::vector<double>{0, 1, 1, 2});
}

TEST_CASE("analytic commutator bound") {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  CHECK(commutator_bound(delta(z, z.identity()), lz, PExponent(2)) == 0.0);
  for (double pv : {1.0, 1.5, 2.0, 3.0}) {
    CHECK(commutator_bound(delta(z, z.parse("1")), lz, PExponent(pv)) ==
          doctest::Approx(1.0));
  }
  const GroupAlgElem sym(z, {{z.parse("1"), 1.0}, {z.parse("-1"), 1.0}});
  CHECK(commutator_bound(sym, lz, PExponent(1)) == doctest::Approx(4.0));
}

TEST_CASE("commutator norm estimates") {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  const auto b5 = ball(z, lz, 5.0);

  const auto zero = commutator_norm_est(z, delta(z, z.identity()), b5, lz,
                                        PExponent(2));
  CHECK(zero.lower <= 1e-12);
  CHECK(zero.upper <= 1e-12);

  const auto one =
      commutator_norm_est(z, delta(z, z.parse("1")), b5, lz, PExponent(2));
  CHECK(one.lower == doctest::Approx(1.0).epsilon(1e-8));

  // bilinearity: doubling a doubles both interval ends
  const auto twice = commutator_norm_est(z, delta(z, z.parse("1"), 2.0), b5,
                                         lz, PExponent(2));
  CHECK(twice.lower == doctest::Approx(2.0 * one.lower).epsilon(1e-10));
  CHECK(twice.upper == doctest::Approx(2.0 * one.upper).epsilon(1e-10));

  // support must live inside the ball
  CHECK_THROWS_AS(
      commutator_norm_est(z, delta(z, z.parse("9")), b5, lz, PExponent(2)),
      ValidationError);
}

TEST_CASE("commutator lower bound grows with the radius") {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  const GroupAlgElem a(z, {{z.parse("1"), 1.0}, {z.parse("2"), Complex(0, 1)}});
  double prev = 0.0;
  for (double r = 2.0; r <= 8.0; r += 1.0) {
    const auto est =
        commutator_norm_est(z, a, ball(z, lz, r), lz, PExponent(1.5));
    CHECK(est.lower >= prev - 1e-12);
    CHECK(est.lower <= commutator_bound(a, lz, PExponent(1.5)) + 1e-9);
    prev = est.lower;
  }
}

TEST_CASE("resolvent approximants") {
  const auto z = GroupModel::integers();
  const auto lz = LengthFn::builtin(z);
  const auto b2 = ball(z, lz, 2.0);

  const auto [k, resid] = resolvent_approx(b2, lz, ResolventMode::Squared);
  CHECK(resid == doctest::Approx(0.1));
  CHECK(k.entries(0, 0) == Complex(1.0));  // identity element
  for (int i = 0; i < 5; ++i) {
    const double len = lz(b2.elements[std::size_t(i)]);
    CHECK(k.entries(i, i).real() == doctest::Approx(1.0 / (1.0 + len * len)));
  }

  const auto [j, jresid] =
      resolvent_approx(b2, lz, ResolventMode::Shifted, Complex(-1.0));
  CHECK(jresid == doctest::Approx(0.25));
  for (int i = 0; i < 5; ++i) {
    const double len = lz(b2.elements[std::size_t(i)]);
    CHECK(j.entries(i, i).real() == doctest::Approx(1.0 / (len + 1.0)));
  }
  // (D - lambda I) J = I on the ball block
  const auto d = dirac_matrix(b2, lz);
  const Matrix lhs =
      (d.entries + Matrix::Identity(5, 5)) * j.entries;
  CHECK((lhs - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);

  // shifted mode rejects lambda on the achieved spectrum
  CHECK_THROWS_AS(
      resolvent_approx(b2, lz, ResolventMode::Shifted, Complex(2.0)),
      ValidationError);
}

TEST_CASE("cyclic groups exhaust at finite radius") {
  const auto c6 = GroupModel::cyclic(6);
  const auto lc = LengthFn::builtin(c6);
  const auto b = ball(c6, lc, 3.0);
  CHECK(b.elements.size() == 6);
  // no lengths remain beyond the maximum, so the squared residual is 0
  const auto [k, resid] = resolvent_approx(b, lc, ResolventMode::Squared);
  CHECK(resid == 0.0);
  (void)k;
}
