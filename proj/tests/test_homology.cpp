#include <doctest.h>

#include <random>
#include <set>

#include "latdual/homology.hpp"
#include "latdual/surface.hpp"

using namespace latdual;

TEST_CASE("smith normal form invariants") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 1 + trial % 5, n = 1 + (trial / 5) % 5;
    MatZ a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = d(rng);
    auto f = smith_normal_form(a);
    CHECK((f.u * a * f.v - f.s).isZero());
    CHECK((f.u * f.uinv).isIdentity());
    CHECK((f.v * f.vinv).isIdentity());
    for (int i = 0; i + 1 < static_cast<int>(f.diag.size()); ++i) {
      if (f.diag[i + 1] != 0) {
        REQUIRE(f.diag[i] != 0);
        CHECK(f.diag[i + 1] % f.diag[i] == 0);
      }
    }
  }
}

TEST_CASE("incidence matrices satisfy d1*d0 = 0") {
  auto a = build_group("Z2").abelian();
  for (auto lat : {torus_lattice(2, 2), sphere_cube(), genus_lattice(2)}) {
    auto c = coboundaries(lat, a);
    CHECK((c.d1 * c.d0).isZero());
  }
}

TEST_CASE("dual incidence matrices are transposes") {
  auto t = torus_lattice(2, 3);
  auto d = dual_lattice(t);
  auto a = build_group("Z2").abelian();
  auto c = coboundaries(t, a);
  auto cd = coboundaries(d.lat, a);
  CHECK((cd.d0 - c.d1.transpose()).isZero());
  CHECK((cd.d1 - c.d0.transpose()).isZero());
}

TEST_CASE("torus cohomology orders") {
  for (auto [m, n] : {std::pair{2, 2}, {3, 3}, {3, 4}}) {
    auto lat = torus_lattice(m, n);
    for (const char* gname : {"Z2", "Z3", "Z4", "Z2xZ2"}) {
      auto a = build_group(gname).abelian();
      auto coh = cohomology(coboundaries(lat, a));
      long long k = a.order();
      CHECK(coh.order[0] == k);
      CHECK(coh.order[1] == k * k);
      CHECK(coh.order[2] == k);
    }
  }
}

TEST_CASE("sphere cohomology is trivial in degree 1") {
  for (const char* gname : {"Z2", "Z3", "Z2xZ4"}) {
    auto a = build_group(gname).abelian();
    auto coh = cohomology(coboundaries(sphere_cube(), a));
    CHECK(coh.order[1] == 1);
    CHECK(coh.order[0] == a.order());
    CHECK(coh.order[2] == a.order());
  }
}

TEST_CASE("genus 2 with Z3 coefficients has #H1 = 81") {
  auto a = build_group("Z3").abelian();
  auto coh = cohomology(coboundaries(genus_lattice(2), a));
  CHECK(coh.order[1] == 81);
}

TEST_CASE("H1 representatives are pairwise non-cohomologous cocycles") {
  auto lat = torus_lattice(2, 2);
  for (const char* gname : {"Z2", "Z6"}) {
    auto a = build_group(gname).abelian();
    auto c = coboundaries(lat, a);
    auto coh = cohomology(c);
    REQUIRE(coh.reps_available);
    REQUIRE(static_cast<long long>(coh.h1_reps.size()) == coh.order[1]);

    // Oracle: the set of coboundaries by enumeration of A^V.
    std::set<Cochain> coboundary_set;
    std::vector<int> s(lat.num_vertices, 0);
    long long total = 1;
    for (int v = 0; v < lat.num_vertices; ++v) total *= a.order();
    for (long long idx = 0; idx < total; ++idx) {
      long long rem = idx;
      for (int v = 0; v < lat.num_vertices; ++v) {
        s[v] = static_cast<int>(rem % a.order());
        rem /= a.order();
      }
      coboundary_set.insert(c.apply_d0(s));
    }
    Cochain zero_faces(lat.num_faces(), a.zero());
    for (size_t i = 0; i < coh.h1_reps.size(); ++i) {
      CHECK(c.apply_d1(coh.h1_reps[i]) == zero_faces);
      for (size_t j = i + 1; j < coh.h1_reps.size(); ++j) {
        Cochain diff(lat.num_edges());
        for (int e = 0; e < lat.num_edges(); ++e)
          diff[e] = a.sub(coh.h1_reps[i][e], coh.h1_reps[j][e]);
        CHECK_FALSE(coboundary_set.count(diff));
      }
    }
  }
}

TEST_CASE("counting identity #C1 = #Z1 * #B2") {
  auto lat = torus_lattice(2, 3);
  auto a = build_group("Z4").abelian();
  auto c = coboundaries(lat, a);
  auto d = dual_lattice(lat);
  auto cd = coboundaries(d.lat, a.dual());
  auto sq = build_subquotient(c, cd);
  CHECK(sq.num_m == sq.num_k * sq.num_m2);
  CHECK(sq.num_h == sq.num_h_dual);
}

TEST_CASE("disorder torsor solving") {
  auto lat = torus_lattice(3, 3);
  auto a = build_group("Z2").abelian();
  auto c = coboundaries(lat, a);

  SUBCASE("zero data gives the zero base point") {
    Cochain eta(lat.num_faces(), 0);
    auto t = solve_disorder_torsor(c, eta);
    for (int v : t.base) CHECK(v == 0);
    CHECK(t.torsor_size == 1024);  // #Z1 = #B1 * #H1 = 2^8 * 4
  }
  SUBCASE("two marked faces are solvable") {
    Cochain eta(lat.num_faces(), 0);
    eta[0] = 1;
    eta[4] = 1;
    auto t = solve_disorder_torsor(c, eta);
    CHECK(c.apply_d1(t.base) == eta);
    int support = 0;
    for (int v : t.base) support += v != 0;
    CHECK(support > 0);
  }
  SUBCASE("one marked face is obstructed") {
    Cochain eta(lat.num_faces(), 0);
    eta[3] = 1;
    CHECK_THROWS_AS(solve_disorder_torsor(c, eta), NotABoundary);
  }
}

TEST_CASE("poincare pairing on the torus") {
  auto lat = torus_lattice(2, 2);
  auto a = build_group("Z2").abelian();
  auto c = coboundaries(lat, a);
  auto dual = dual_lattice(lat);
  auto cd = coboundaries(dual.lat, a.dual());

  auto coh = cohomology(c);
  auto cohd = cohomology(cd);
  REQUIRE(coh.order[1] == 4);
  REQUIRE(cohd.order[1] == 4);

  SUBCASE("pairing with zero is one") {
    for (const auto& u : coh.h1_reps)
      CHECK(std::abs(poincare_pairing(c, u, Cochain(lat.num_edges(), 0)) - cplx(1, 0)) < 1e-12);
  }
  SUBCASE("transverse generators pair to -1") {
    bool found = false;
    for (const auto& u : coh.h1_reps)
      for (const auto& w : cohd.h1_reps)
        if (std::abs(poincare_pairing(c, u, w) - cplx(-1, 0)) < 1e-12) found = true;
    CHECK(found);
  }
  SUBCASE("pairing matrix is unitary up to scale") {
    Eigen::MatrixXcd p(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) p(i, j) = poincare_pairing(c, coh.h1_reps[i], cohd.h1_reps[j]);
    CHECK((p * p.adjoint() / 4.0 - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("class pairing is representative independent") {
    auto c2 = coboundaries(lat, a);
    std::mt19937 rng(3);
    for (const auto& u : coh.h1_reps)
      for (const auto& w : cohd.h1_reps) {
        cplx base = poincare_pairing(c, u, w);
        // Shift u by a random coboundary.
        std::vector<int> s(lat.num_vertices);
        for (auto& v : s) v = static_cast<int>(rng() % a.order());
        auto db = c2.apply_d0(s);
        Cochain u2(lat.num_edges());
        for (int e = 0; e < lat.num_edges(); ++e) u2[e] = a.add(u[e], db[e]);
        CHECK(std::abs(poincare_pairing(c, u2, w) - base) < 1e-12);
      }
  }
}

TEST_CASE("simplicial cohomology of standard spaces") {
  auto z2 = build_group("Z2").abelian();
  auto z3 = build_group("Z3").abelian();

  SUBCASE("boundary of the 4-simplex is a 3-sphere") {
    auto x = boundary_of_simplex(4);
    auto h = simplicial_cohomology(x, z2);
    CHECK(h == std::vector<long long>({2, 1, 1, 2}));
  }
  SUBCASE("six-vertex projective plane") {
    auto x = rp2_complex();
    CHECK(simplicial_cohomology(x, z2) == std::vector<long long>({2, 2, 2}));
    CHECK(simplicial_cohomology(x, z3) == std::vector<long long>({3, 1, 1}));
  }
  SUBCASE("three-torus") {
    auto x = torus3_complex();
    CHECK(simplicial_cohomology(x, z2) == std::vector<long long>({2, 8, 8, 2}));
  }
  SUBCASE("json round trip") {
    auto x = rp2_complex();
    auto back = simplicial_from_json(simplicial_to_json(x));
    CHECK(back.dim == x.dim);
    CHECK(back.simplices == x.simplices);
  }
}

TEST_CASE("oriented surface duality of H1 orders") {
  for (auto lat : {torus_lattice(2, 3), genus_lattice(2)}) {
    auto a = build_group("Z2xZ3").abelian();
    auto c = coboundaries(lat, a);
    auto d = dual_lattice(lat);
    auto cd = coboundaries(d.lat, a.dual());
    CHECK(cohomology(c, 1).order[1] == cohomology(cd, 1).order[1]);
  }
}
