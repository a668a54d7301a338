#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "latdual/harmonic.hpp"

using namespace latdual;

TEST_CASE("mu2 transform and the dual temperature parameter") {
  auto a = build_group("Z2").abelian();
  double t = 0.37;
  auto f = fourier_abelian_even({1.0, t}, a);
  CHECK(f[0] == doctest::Approx((1 + t) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(f[1] == doctest::Approx((1 - t) / std::sqrt(2.0)).epsilon(1e-14));
  // Normalized dual parameter and its fixed point.
  double dual = f[1] / f[0];
  CHECK(dual == doctest::Approx((1 - t) / (1 + t)).epsilon(1e-14));
  double fixed = std::sqrt(2.0) - 1.0;
  auto ff = fourier_abelian_even({1.0, fixed}, a);
  CHECK(ff[1] / ff[0] == doctest::Approx(fixed).epsilon(1e-12));
}

TEST_CASE("mu5 transform values") {
  auto a = build_group("Z5").abelian();
  const double p = 2 * std::cos(2 * std::numbers::pi / 5);
  const double q = 2 * std::cos(4 * std::numbers::pi / 5);
  double av = 1.0, b = 0.3, c = 0.2;
  auto f = fourier_abelian_even({av, b, c, c, b}, a);
  const double s5 = std::sqrt(5.0);
  CHECK(f[0] == doctest::Approx((av + 2 * b + 2 * c) / s5).epsilon(1e-13));
  CHECK(f[1] == doctest::Approx((av + p * b + q * c) / s5).epsilon(1e-13));
  CHECK(f[2] == doctest::Approx((av + q * b + p * c) / s5).epsilon(1e-13));
  CHECK(f[3] == doctest::Approx(f[2]).epsilon(1e-13));
  CHECK(f[4] == doctest::Approx(f[1]).epsilon(1e-13));
}

TEST_CASE("delta transforms to a constant") {
  auto a = build_group("Z2xZ3").abelian();
  WeightFunction delta(a.order(), 0.0);
  delta[0] = 1.0;
  auto f = fourier_abelian_even(delta, a);
  for (double v : f) CHECK(v == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
}

TEST_CASE("inverse transform and Parseval") {
  auto a = build_group("Z3xZ4").abelian();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<cplx> f(a.order());
  std::vector<cplx> g(a.order());
  for (auto& v : f) v = cplx(d(rng), d(rng));
  for (auto& v : g) v = cplx(d(rng), d(rng));
  auto tf = fourier_abelian(f, a);
  auto tg = fourier_abelian(g, a);
  auto back = fourier_abelian_inverse(tf, a);
  for (int x = 0; x < a.order(); ++x) CHECK(std::abs(back[x] - f[x]) < 1e-12);
  cplx lhs = 0, rhs = 0;
  for (int x = 0; x < a.order(); ++x) lhs += std::conj(f[x]) * g[x];
  for (int x = 0; x < a.order(); ++x) rhs += std::conj(tf[x]) * tg[x];
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("involution: double transform composes with inversion") {
  auto a = build_group("Z2xZ4").abelian();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<cplx> f(a.order());
  for (auto& v : f) v = cplx(d(rng), d(rng));
  auto ff = fourier_abelian(fourier_abelian(f, a), a.dual());
  for (int x = 0; x < a.order(); ++x) CHECK(std::abs(ff[x] - f[a.neg(x)]) < 1e-12);
}

TEST_CASE("nonabelian transform: delta and constant") {
  auto g = build_group("S3");
  auto irr = irreducibles(g);
  WeightFunction delta(g.order(), 0.0);
  delta[g.identity()] = 1.0;
  auto t = fourier_nonabelian(delta, g, irr);
  for (size_t i = 0; i < irr.size(); ++i) {
    Eigen::MatrixXcd want =
        Eigen::MatrixXcd::Identity(irr[i].dim, irr[i].dim) / std::sqrt(6.0);
    CHECK((t.blocks[i] - want).cwiseAbs().maxCoeff() < 1e-12);
  }
  WeightFunction ones(g.order(), 1.0);
  auto tc = fourier_nonabelian(ones, g, irr);
  for (size_t i = 0; i < irr.size(); ++i) {
    bool trivial = irr[i].dim == 1;
    if (trivial)
      for (int c = 0; c < g.num_classes(); ++c)
        if (std::abs(irr[i].char_on_classes[c] - cplx(1, 0)) > 1e-9) trivial = false;
    double want = trivial ? std::sqrt(6.0) : 0.0;
    CHECK((tc.blocks[i] - want * Eigen::MatrixXcd::Identity(irr[i].dim, irr[i].dim))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("S3 indicator of identity plus transpositions") {
  auto g = build_group("S3");
  auto irr = irreducibles(g);
  WeightFunction theta(g.order(), 0.0);
  theta[g.identity()] = 1.0;
  for (int x = 0; x < g.order(); ++x)
    if (x != g.identity() && g.mul(x, x) == g.identity()) theta[x] = 1.0;  // transpositions
  auto t = fourier_nonabelian(theta, g, irr);
  for (size_t i = 0; i < irr.size(); ++i) {
    if (irr[i].dim != 2) continue;
    // Transposition class sum acts as scalar 0 on the 2-dim irrep.
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(6.0);
    CHECK((t.blocks[i] - want).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("mu5 admissibility region") {
  auto g = build_group("Z5");
  const double p = 2 * std::cos(2 * std::numbers::pi / 5);
  const double q = 2 * std::cos(4 * std::numbers::pi / 5);
  auto theta_of = [](double b, double c) { return WeightFunction{1.0, b, c, c, b}; };

  // Extreme points of {b, c >= 0, theta^vee >= 0} at a = 1. Derived from the
  // displayed transform values: the exotic pair is (p, 0) and (0, p), using
  // p * (-q) = 1. (A published coordinate list gives (p/2, q/2) instead, but
  // q < 0 contradicts nonnegativity of theta; see the brute-force hull check
  // in the acceptance suite.)
  CHECK(is_admissible(theta_of(p, 0), g).admissible);
  CHECK(is_admissible(theta_of(0, p), g).admissible);
  CHECK(is_admissible(theta_of(0, 0), g).admissible);
  CHECK(is_admissible(theta_of(1, 1), g).admissible);

  auto neg = is_admissible(theta_of(p / 2, q / 2), g);
  CHECK_FALSE(neg.admissible);
  CHECK(neg.violation == Admissibility::Violation::negative_value);

  auto bad = is_admissible(theta_of(1.2, 0.0), g);
  CHECK_FALSE(bad.admissible);
  CHECK(bad.violation == Admissibility::Violation::negative_dual);
  CHECK(bad.witness >= 0);  // a dual element where 1 + q*b < 0
}

TEST_CASE("mu4 extreme point") {
  auto g = build_group("Z4");
  CHECK(is_admissible({1.0, 0.5, 0.0, 0.5}, g).admissible);
  CHECK_FALSE(is_admissible({1.0, 0.5, -0.1, 0.5}, g).admissible);
  CHECK_FALSE(is_admissible({1.0, 0.5, 0.0, 0.4}, g).admissible);  // not even
}

TEST_CASE("subgroup indicators map to annihilator indicators") {
  // For each subgroup H of A, char(H) is admissible and its transform is a
  // positive multiple of char(Ann(H)); argmax sets correspond.
  for (const char* name : {"Z2", "Z4", "Z2xZ2", "Z6"}) {
    auto g = build_group(name);
    const auto& a = g.abelian();
    // Enumerate subgroups as closures of subsets (desk scale).
    std::set<std::set<int>> subgroups;
    for (int mask = 0; mask < (1 << a.order()); ++mask) {
      std::set<int> gen;
      for (int x = 0; x < a.order(); ++x)
        if (mask & (1 << x)) gen.insert(x);
      std::set<int> h = {a.zero()};
      bool grew = true;
      while (grew) {
        grew = false;
        std::set<int> next = h;
        for (int x : h)
          for (int y : gen) {
            next.insert(a.add(x, y));
          }
        for (int x : next)
          for (int y : next) next.insert(a.add(x, y));
        if (next != h) {
          h = next;
          grew = true;
        }
      }
      subgroups.insert(h);
    }
    for (const auto& h : subgroups) {
      WeightFunction theta(a.order(), 0.0);
      for (int x : h) theta[x] = 1.0;
      auto verdict = is_admissible(theta, g);
      CHECK(verdict.admissible);
      auto f = fourier_abelian_even(theta, a);
      // Annihilator subgroup.
      std::set<int> ann;
      for (int ad = 0; ad < a.order(); ++ad) {
        bool all = true;
        for (int x : h)
          if (std::abs(a.pairing(x, ad) - cplx(1, 0)) > 1e-9) all = false;
        if (all) ann.insert(ad);
      }
      double scale = f[0];
      CHECK(scale > 0);
      for (int ad = 0; ad < a.order(); ++ad) {
        double want = ann.count(ad) ? scale : 0.0;
        CHECK(f[ad] == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("admissible theta peaks at the identity") {
  // Random admissible samples: inverse transforms of nonnegative spectra.
  auto g = build_group("Z6");
  const auto& a = g.abelian();
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> d(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> spec(a.order());
    for (int ad = 0; ad < a.order(); ++ad) {
      double v = d(rng);
      spec[ad] = v;
    }
    // Symmetrize to make theta even and real.
    for (int ad = 0; ad < a.order(); ++ad)
      spec[a.neg(ad)] = spec[ad];
    auto theta_c = fourier_abelian_inverse(spec, a);
    WeightFunction theta(a.order());
    for (int x = 0; x < a.order(); ++x) theta[x] = theta_c[x].real();
    if (!is_admissible(theta, g).admissible) continue;
    for (int x = 0; x < a.order(); ++x) CHECK(theta[0] >= theta[x] - 1e-12);
  }
}
