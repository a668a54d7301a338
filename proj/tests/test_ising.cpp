#include <doctest.h>

#include <cmath>
#include <random>

#include "latdual/ising.hpp"
#include "latdual/surface.hpp"

using namespace latdual;

namespace {

// Independent brute-force reference for the torus(2,2), Z2 partition sum:
// explicit 16-state, 8-edge enumeration with hand-placed couplings, coded
// without the Lattice2 incidence machinery.
double oracle_torus22_z2(double theta0, double theta1, const std::vector<int>& hol) {
  auto th = [&](int diff) { return diff == 0 ? theta0 : theta1; };
  double total = 0;
  for (int s = 0; s < 16; ++s) {
    auto spin = [&](int i, int j) { return (s >> (((i & 1) * 2) + (j & 1))) & 1; };
    double w = 1;
    int e = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j, ++e)
        w *= th(spin(i, j) ^ spin(i, (j + 1) % 2) ^ hol[e]);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j, ++e)
        w *= th(spin(i, j) ^ spin((i + 1) % 2, j) ^ hol[e]);
    total += w;
  }
  return total;
}

WeightFunction random_admissible(const FiniteGroup& g, std::mt19937& rng) {
  const auto& a = g.abelian();
  std::uniform_real_distribution<double> d(0.0, 1.0);
  while (true) {
    std::vector<cplx> spec(a.order());
    for (int x = 0; x < a.order(); ++x) spec[x] = d(rng);
    for (int x = 0; x < a.order(); ++x) spec[a.neg(x)] = spec[x];
    auto theta_c = fourier_abelian_inverse(spec, a);
    WeightFunction theta(a.order());
    for (int x = 0; x < a.order(); ++x) theta[x] = theta_c[x].real();
    if (is_admissible(theta, g).admissible) return theta;
  }
}

}  // namespace

TEST_CASE("spin partition basics") {
  auto lat = torus_lattice(2, 2);
  auto g = build_group("Z3");
  auto bg = FlatBackground::trivial(g, lat);

  SUBCASE("constant weight counts all sections") {
    WeightFunction ones(g.order(), 1.0);
    CHECK(spin_partition(lat, g, ones, bg, {}) == doctest::Approx(81.0));  // #G^V
  }
  SUBCASE("delta weight counts constant sections") {
    WeightFunction delta(g.order(), 0.0);
    delta[g.identity()] = 1.0;
    CHECK(spin_partition(lat, g, delta, bg, {}) == doctest::Approx(3.0));
    // Nontrivial holonomy kills all flat sections: twist one edge and record
    // the resulting face classes as the background's constraints.
    auto bg2 = bg;
    bg2.hol[0] = 1;
    for (int f = 0; f < lat.num_faces(); ++f)
      bg2.face_class[f] = g.class_of(bg2.face_holonomy(lat, f));
    CHECK(spin_partition(lat, g, delta, bg2, {}) == doctest::Approx(0.0));
  }
}

TEST_CASE("spin partition matches the independent torus oracle") {
  auto lat = torus_lattice(2, 2);
  auto g = build_group("Z2");
  double t = 0.35;
  WeightFunction theta = {1.0, t};

  SUBCASE("trivial background") {
    auto bg = FlatBackground::trivial(g, lat);
    CHECK(spin_partition(lat, g, theta, bg, {}) ==
          doctest::Approx(oracle_torus22_z2(1.0, t, std::vector<int>(8, 0))).epsilon(1e-12));
  }
  SUBCASE("nontrivial flat background") {
    auto bg = FlatBackground::trivial(g, lat);
    std::vector<int> hol(8, 0);
    hol[0] = hol[2] = 1;  // both horizontal edges of one column: a cocycle
    bg.hol = hol;
    REQUIRE(bg.check(lat));
    CHECK(spin_partition(lat, g, theta, bg, {}) ==
          doctest::Approx(oracle_torus22_z2(1.0, t, hol)).epsilon(1e-12));
  }
}

TEST_CASE("gauge invariance of the spin sum") {
  auto lat = torus_lattice(2, 3);
  auto g = build_group("S3");
  std::mt19937 rng(17);
  WeightFunction theta(g.order());
  for (int x = 0; x < g.order(); ++x) theta[x] = 0.2 + 0.1 * ((x * 7) % 5);
  for (int x = 0; x < g.order(); ++x) theta[x] = 0.5 * (theta[x] + theta[g.inv(x)]);

  auto bg = FlatBackground::trivial(g, lat);
  double base = spin_partition(lat, g, theta, bg, {});
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<int> t(lat.num_vertices);
    for (auto& v : t) v = static_cast<int>(rng() % g.order());
    auto bg2 = bg;
    for (int e = 0; e < lat.num_edges(); ++e)
      bg2.hol[e] = g.mul(t[lat.edges[e].head], g.mul(bg.hol[e], g.inv(t[lat.edges[e].tail])));
    REQUIRE(bg2.check(lat));
    CHECK(spin_partition(lat, g, theta, bg2, {}) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("orientation independence for even weights") {
  auto lat = torus_lattice(2, 3);
  auto rev = reverse_all_edges(lat);
  auto g = build_group("Z4");
  WeightFunction theta = {1.0, 0.4, 0.2, 0.4};
  auto bg1 = FlatBackground::trivial(g, lat);
  auto bg2 = FlatBackground::trivial(g, rev);
  CHECK(spin_partition(lat, g, theta, bg1, {}) ==
        doctest::Approx(spin_partition(rev, g, theta, bg2, {})).epsilon(1e-12));
}

TEST_CASE("partition vector basics") {
  auto lat = torus_lattice(3, 3);
  auto a = build_group("Z3").abelian();
  auto g = build_group("Z3");

  SUBCASE("trivial class equals the plain spin sum") {
    WeightFunction theta = {1.0, 0.45, 0.45};
    auto pv = partition_vector(lat, a, theta, {});
    REQUIRE(pv.values.size() == 9);
    auto bg = FlatBackground::trivial(g, lat);
    CHECK(pv.values[0].real() ==
          doctest::Approx(spin_partition(lat, g, theta, bg, {})).epsilon(1e-10));
    CHECK(std::abs(pv.values[0].imag()) < 1e-10);
  }
  SUBCASE("full-group indicator gives a constant vector") {
    WeightFunction ones(a.order(), 1.0);
    auto pv = partition_vector(lat, a, ones, {});
    for (const cplx& v : pv.values) CHECK(std::abs(v - pv.values[0]) <= 1e-12 * std::abs(pv.values[0]));
  }
  SUBCASE("per-class values match direct enumeration over backgrounds") {
    std::mt19937 rng(5);
    WeightFunction theta = random_admissible(g, rng);
    auto pv = partition_vector(lat, a, theta, {});
    for (size_t k = 0; k < pv.values.size(); ++k) {
      FlatBackground bg;
      bg.group = &g;
      bg.hol = pv.class_reps[k];
      bg.face_class.assign(lat.num_faces(), -1);
      REQUIRE(bg.check(lat));
      CHECK(pv.values[k].real() ==
            doctest::Approx(spin_partition(lat, g, theta, bg, {})).epsilon(1e-10));
    }
  }
}

TEST_CASE("selection rule zeroes the vector") {
  auto lat = torus_lattice(2, 2);
  auto a = build_group("Z3").abelian();
  WeightFunction theta = {1.0, 0.3, 0.3};
  Insertions ins;
  ins.order.push_back({0, 1});  // single character: product nontrivial
  auto pv = partition_vector(lat, a, theta, ins);
  for (const cplx& v : pv.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("kw duality on tori without insertions") {
  std::mt19937 rng(31);
  for (auto [m, n] : {std::pair{3, 3}, {3, 4}}) {
    auto lat = torus_lattice(m, n);
    for (const char* gname : {"Z2", "Z3"}) {
      auto g = build_group(gname);
      WeightFunction theta = random_admissible(g, rng);
      auto rep = kw_dual_check(lat, g.abelian(), theta, {});
      CHECK(rep.factor == doctest::Approx(1.0));
      CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));
    }
  }
}

TEST_CASE("kw duality fixes the factor on a lattice with V != F") {
  // Split one face of torus(2,2) by a diagonal: V=4, E=9, F=5, still genus 1.
  auto lat = torus_lattice(2, 2);
  lat.edges.push_back({0, 3});
  int diag = lat.num_edges() - 1;
  auto f0 = lat.faces[0];
  REQUIRE(f0.size() == 4);
  lat.faces[0] = {f0[0], f0[1], {diag, -1}};
  lat.faces.push_back({{diag, 1}, f0[2], f0[3]});
  REQUIRE(validate(lat).valid);

  auto g = build_group("Z2");
  WeightFunction theta = {1.0, 0.4};
  auto rep = kw_dual_check(lat, g.abelian(), theta, {});
  CHECK(rep.factor == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));

  auto norm = kw_dual_check(lat, g.abelian(), theta, {}, {}, /*normalize_vertices=*/true);
  CHECK(norm.factor == doctest::Approx(1.0));
  CHECK(norm.max_abs_err <= 1e-10);
}

TEST_CASE("kw duality with order and disorder insertions") {
  auto lat = torus_lattice(3, 3);
  auto g = build_group("Z2");
  WeightFunction theta = {1.0, 0.4};

  SUBCASE("one order pair vs dual disorder pair") {
    Insertions ins;
    ins.order.push_back({0, 1});
    ins.order.push_back({4, 1});
    auto rep = kw_dual_check(lat, g.abelian(), theta, ins);
    CHECK_FALSE(rep.selection_rule_zero);
    CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));
  }
  SUBCASE("one disorder pair") {
    Insertions ins;
    ins.disorder.push_back({0, 1});
    ins.disorder.push_back({4, 1});
    auto rep = kw_dual_check(lat, g.abelian(), theta, ins);
    CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));
  }
  SUBCASE("order pair and disorder pair together") {
    Insertions ins;
    ins.order.push_back({1, 1});
    ins.order.push_back({5, 1});
    ins.disorder.push_back({0, 1});
    ins.disorder.push_back({4, 1});
    auto rep = kw_dual_check(lat, g.abelian(), theta, ins);
    CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));
  }
  SUBCASE("Z3 with an inverse order pair") {
    auto g3 = build_group("Z3");
    WeightFunction t3 = {1.0, 0.35, 0.35};
    Insertions ins;
    ins.order.push_back({0, 1});
    ins.order.push_back({4, 2});
    auto rep = kw_dual_check(lat, g3.abelian(), t3, ins);
    CHECK_FALSE(rep.selection_rule_zero);
    CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));
  }
  SUBCASE("unsolvable disorder propagates NotABoundary") {
    Insertions ins;
    ins.disorder.push_back({0, 1});
    CHECK_THROWS_AS(kw_dual_check(lat, g.abelian(), theta, ins), NotABoundary);
  }
  SUBCASE("selection-rule violating order data reports both sides zero") {
    Insertions ins;
    ins.order.push_back({0, 1});
    auto rep = kw_dual_check(lat, g.abelian(), theta, ins);
    CHECK(rep.selection_rule_zero);
    CHECK(rep.max_abs_err <= 1e-12);
  }
}

TEST_CASE("base point choice does not affect the kw check") {
  auto lat = torus_lattice(3, 3);
  auto g = build_group("Z2");
  WeightFunction theta = {1.0, 0.55};
  for (auto faces : {std::pair{0, 4}, {1, 5}, {2, 7}}) {
    Insertions ins;
    ins.disorder.push_back({faces.first, 1});
    ins.disorder.push_back({faces.second, 1});
    auto rep = kw_dual_check(lat, g.abelian(), theta, ins);
    CHECK(rep.max_abs_err <= 1e-8 * std::max(1.0, rep.scale));
  }
}

TEST_CASE("mu2 duality reproduces the sinh identity") {
  auto a = build_group("Z2").abelian();
  for (double beta = 0.1; beta <= 2.0; beta += 0.1) {
    double t = std::exp(-2 * beta);
    auto f = fourier_abelian_even({1.0, t}, a);
    CHECK(f[0] / f[1] == doctest::Approx(1.0 / std::tanh(beta)).epsilon(1e-12));
    double beta_dual = -0.5 * std::log(f[1] / f[0]);
    CHECK(std::sinh(2 * beta) * std::sinh(2 * beta_dual) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transfer matrix structure") {
  auto g = build_group("Z2");

  SUBCASE("constant weight is rank one") {
    for (int n = 2; n <= 4; ++n) {
      auto t = transfer_matrix({n}, g, {1.0, 1.0}, g.identity());
      auto s = transfer_spectrum(t);
      CHECK(s.rank == 1);
      auto tw = transfer_matrix({n}, g, {1.0, 1.0}, 1);
      CHECK(transfer_spectrum(tw).rank == 1);
    }
  }
  SUBCASE("delta weight projects onto constants; twisted sector vanishes") {
    for (int n = 2; n <= 5; ++n) {
      auto t = transfer_matrix({n}, g, {1.0, 0.0}, g.identity());
      auto s = transfer_spectrum(t);
      CHECK(s.top == doctest::Approx(1.0));
      CHECK(s.top_multiplicity == 2);
      CHECK(s.rank == 2);
      auto tw = transfer_matrix({n}, g, {1.0, 0.0}, 1);
      CHECK(tw.cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("subgroup indicators give scaled projectors") {
    for (int n = 2; n <= 5; ++n) {
      for (auto theta : {WeightFunction{1.0, 0.0}, WeightFunction{1.0, 1.0}}) {
        auto t = transfer_matrix({n}, g, theta, g.identity());
        double c = transfer_spectrum(t).top;
        CHECK((t * t - c * t).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, c));
      }
    }
  }
  SUBCASE("caps") {
    CHECK_THROWS_AS(transfer_matrix({2}, g, {1.0, 1.0}, 0, 2), CapExceeded);
  }
}

TEST_CASE("threaded configuration sums agree with serial runs") {
  auto lat = torus_lattice(3, 3);
  auto g = build_group("Z3");
  WeightFunction theta = {1.0, 0.45, 0.45};
  auto bg = FlatBackground::trivial(g, lat);
  double serial = spin_partition(lat, g, theta, bg, {}, SpinCaps{1 << 24, 1});
  double threaded = spin_partition(lat, g, theta, bg, {}, SpinCaps{1 << 24, 2});
  CHECK(std::abs(serial - threaded) <= 1e-10 * std::max(1.0, std::abs(serial)));

  auto pv1 = partition_vector(lat, g.abelian(), theta, {}, SpinCaps{1 << 24, 1});
  auto pv2 = partition_vector(lat, g.abelian(), theta, {}, SpinCaps{1 << 24, 2});
  for (size_t k = 0; k < pv1.values.size(); ++k)
    CHECK(std::abs(pv1.values[k] - pv2.values[k]) <=
          1e-10 * std::max(1.0, std::abs(pv1.values[k])));
}
