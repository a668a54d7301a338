#include <doctest.h>

#include <cmath>
#include <random>

#include "latdual/tqft.hpp"
#include "latdual/turaev_viro.hpp"

using namespace latdual;

namespace {

// A family of admissible nonabelian weights: nonnegative combinations of the
// delta at e, the constant, and squared character moduli.
WeightFunction admissible_sample(const FiniteGroup& g, const std::vector<Irrep>& irr,
                                 std::mt19937& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  WeightFunction theta(g.order(), 0.0);
  double a = d(rng), b = d(rng);
  for (int x = 0; x < g.order(); ++x) theta[x] += b;
  theta[g.identity()] += a;
  for (const auto& rho : irr) {
    double c = d(rng);
    for (int x = 0; x < g.order(); ++x) theta[x] += c * std::norm(rho.character(g, x));
  }
  return theta;
}

// Independent dimension count for a Rep(G) state space: per labeling, the
// face dimension is the averaged character product.
long long oracle_rep_dim(const FiniteGroup& g, const std::vector<Irrep>& irr,
                         const Lattice2& lat) {
  long long total = 0;
  const int ns = static_cast<int>(irr.size());
  std::vector<int> labels(lat.num_edges(), 0);
  long long n_lab = 1;
  for (int e = 0; e < lat.num_edges(); ++e) n_lab *= ns;
  for (long long idx = 0; idx < n_lab; ++idx) {
    long long rem = idx;
    for (int e = 0; e < lat.num_edges(); ++e) {
      labels[e] = static_cast<int>(rem % ns);
      rem /= ns;
    }
    long long dim = 1;
    for (const auto& face : lat.faces) {
      cplx acc = 0;
      for (int h = 0; h < g.order(); ++h) {
        cplx prod = 1;
        for (auto [e, dir] : face) {
          cplx ch = irr[labels[e]].character(g, h);
          prod *= dir == 1 ? ch : std::conj(ch);
        }
        acc += prod;
      }
      double d = acc.real() / g.order();
      long long di = std::llround(d);
      dim *= di;
      if (dim == 0) break;
    }
    total += dim;
  }
  return total;
}

}  // namespace

TEST_CASE("backend basics") {
  auto z2 = build_group("Z2");
  auto bv = FusionBackend::make(BackendKind::vect, z2);
  CHECK(bv.num_simples() == 2);
  CHECK(bv.hom_basis({{0, false}, {0, false}}).dim() == 1);
  CHECK(bv.hom_basis({{1, false}, {1, false}}).dim() == 1);  // 1+1 = 0 in Z2
  CHECK(bv.hom_basis({{1, false}, {0, false}}).dim() == 0);
  CHECK(bv.categorical_dim() == doctest::Approx(2.0));

  auto s3 = build_group("S3");
  auto br = FusionBackend::make(BackendKind::rep, s3);
  CHECK(br.num_simples() == 3);
  for (int i = 0; i < 3; ++i) CHECK(br.dual_simple(i) == i);  // real character table
  int std_idx = -1;
  for (int i = 0; i < 3; ++i)
    if (br.phi_dim(i) == 2) std_idx = i;
  REQUIRE(std_idx >= 0);
  CHECK(br.hom_basis({{std_idx, false}, {std_idx, false}}).dim() == 1);
  CHECK(br.categorical_dim() == doctest::Approx(6.0));
  CHECK(br.sphere_value() == doctest::Approx(1.0 / 6.0));

  auto bvs3 = FusionBackend::make(BackendKind::vect, s3);
  CHECK(bvs3.categorical_dim() == doctest::Approx(6.0));
  CHECK(bvs3.sphere_value() == doctest::Approx(br.sphere_value()));
}

TEST_CASE("verlinde sums") {
  auto s3 = build_group("S3");
  auto br = FusionBackend::make(BackendKind::rep, s3);
  auto bv = FusionBackend::make(BackendKind::vect, s3);
  CHECK(br.verlinde_reduced(1) == doctest::Approx(3.0));    // number of simples
  CHECK(br.verlinde_reduced(0) == doctest::Approx(6.0));    // sum of dims^2
  CHECK(bv.verlinde_reduced(2) == doctest::Approx(6.0));    // all dims one: #G
  CHECK(br.verlinde_reduced(2) == doctest::Approx(1 + 1 + 0.25));
}

TEST_CASE("state space dimensions") {
  SUBCASE("VectZ2 on torus(2,2) has dimension 32") {
    auto g = build_group("Z2");
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto ss = state_space(b, torus_lattice(2, 2));
    CHECK(ss.dim == 32);  // #Z^1
  }
  SUBCASE("dimensions match the enumeration oracle on the tetrahedron") {
    auto s3 = build_group("S3");
    auto br = FusionBackend::make(BackendKind::rep, s3);
    auto lat = sphere_tetra();
    auto ss = state_space(br, lat);
    CHECK(ss.dim == oracle_rep_dim(s3, br.irreps(), lat));
    CHECK(ss.dim == 49);

    auto bv = FusionBackend::make(BackendKind::vect, s3);
    auto sv = state_space(bv, lat);
    CHECK(sv.dim == 216);  // flat labelings of a simply connected surface
  }
  SUBCASE("RepZ2 matches VectZ2 lattice by lattice") {
    auto g = build_group("Z2");
    auto br = FusionBackend::make(BackendKind::rep, g);
    auto bv = FusionBackend::make(BackendKind::vect, g);
    for (auto lat : {torus_lattice(2, 2), sphere_tetra()}) {
      CHECK(state_space(br, lat).dim == state_space(bv, lat).dim);
    }
  }
  SUBCASE("cap") {
    auto g = build_group("S3");
    auto b = FusionBackend::make(BackendKind::vect, g);
    CHECK_THROWS_AS(state_space(b, torus_lattice(2, 2), 100), CapExceeded);
  }
}

TEST_CASE("vertex projectors: generic contraction vs gauge averaging") {
  // The generic state-sum composition must reproduce the Vect[G] shift
  // average exactly.
  for (const char* name : {"Z2", "Z3"}) {
    auto g = build_group(name);
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto lat = torus_lattice(2, 2);
    auto ss = state_space(b, lat);
    for (int v = 0; v < lat.num_vertices; ++v) {
      auto p = vertex_projector(ss, v);
      for (int col = 0; col < ss.dim; ++col) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(ss.dim);
        e[col] = 1.0;
        Eigen::VectorXcd via_shift = apply_vertex_projector(ss, v, e);
        CHECK((p.col(col) - via_shift).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("vertex projectors are idempotent, self-adjoint, commuting") {
  auto check_projectors = [](const StateSpace& ss) {
    const int nv = ss.lat.num_vertices;
    std::vector<Eigen::MatrixXcd> ps;
    for (int v = 0; v < nv; ++v) ps.push_back(vertex_projector(ss, v));
    for (const auto& p : ps) {
      CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    }
    for (size_t i = 0; i < ps.size(); ++i)
      for (size_t j = i + 1; j < ps.size(); ++j)
        CHECK((ps[i] * ps[j] - ps[j] * ps[i]).cwiseAbs().maxCoeff() < 1e-9);
  };

  SUBCASE("VectZ2 torus") {
    auto g = build_group("Z2");
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto ss = state_space(b, torus_lattice(2, 2));
    check_projectors(ss);
  }
  SUBCASE("RepZ2 torus") {
    auto g = build_group("Z2");
    auto b = FusionBackend::make(BackendKind::rep, g);
    auto ss = state_space(b, torus_lattice(2, 2));
    check_projectors(ss);
  }
  SUBCASE("RepS3 tetrahedron") {
    auto g = build_group("S3");
    auto b = FusionBackend::make(BackendKind::rep, g);
    auto ss = state_space(b, sphere_tetra());
    check_projectors(ss);
  }
  SUBCASE("VectZ2 on a one-face-heavy lattice (multi-corner faces)") {
    auto g = build_group("Z2");
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto ss = state_space(b, genus_lattice(1));
    check_projectors(ss);
  }
}

TEST_CASE("projector product rank equals the flat orbit count") {
  SUBCASE("VectZ2 torus: rank 4 by eigenvalue thresholding") {
    auto g = build_group("Z2");
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto lat = torus_lattice(2, 2);
    auto ss = state_space(b, lat);
    Eigen::MatrixXcd prod = vertex_projector(ss, 0);
    for (int v = 1; v < lat.num_vertices; ++v) prod = vertex_projector(ss, v) * prod;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((prod + prod.adjoint()) / 2.0);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 0.5) ++rank;
    CHECK(rank == 4);
    CHECK(flat_orbit_count(lat, g) == 4);
    CHECK(full_projector_trace(ss) == doctest::Approx(4.0));
  }
  SUBCASE("VectZ3 tetra: everything is one orbit") {
    auto g = build_group("Z3");
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto lat = sphere_tetra();
    auto ss = state_space(b, lat);
    CHECK(flat_orbit_count(lat, g) == 1);
    CHECK(full_projector_trace(ss) == doctest::Approx(1.0));
  }
  SUBCASE("VectS3 torus trace matches the commuting-pair orbit count") {
    auto g = build_group("S3");
    auto lat = torus_lattice(2, 2);
    CHECK(flat_orbit_count(lat, g) == 8);
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto ss = state_space(b, lat);
    CHECK(full_projector_trace(ss) == doctest::Approx(8.0));
  }
}

TEST_CASE("VectG ising vector reproduces the partition vector") {
  for (const char* name : {"Z2", "Z3"}) {
    auto g = build_group(name);
    const auto& a = g.abelian();
    auto lat = torus_lattice(2, 2);
    auto b = FusionBackend::make(BackendKind::vect, g);
    auto ss = state_space(b, lat);

    WeightFunction theta(a.order());
    for (int x = 0; x < a.order(); ++x)
      theta[x] = 1.0 / (1.0 + std::min(x, a.order() - x));
    auto action = action_from_weight(b, theta);
    auto projected = ising_vector(ss, action);

    auto pv = partition_vector(lat, a, theta, {});
    double scale = std::pow(static_cast<double>(g.order()), lat.num_vertices);
    for (size_t k = 0; k < pv.class_reps.size(); ++k) {
      auto it = ss.block_of_labels.find(pv.class_reps[k]);
      REQUIRE(it != ss.block_of_labels.end());
      cplx got = projected[ss.blocks[it->second].offset] * scale;
      CHECK(std::abs(got - pv.values[k]) < 1e-10 * std::max(1.0, std::abs(pv.values[k])));
    }
  }
}

TEST_CASE("delta action lands on the trivial class") {
  auto g = build_group("Z3");
  auto lat = torus_lattice(2, 2);
  auto b = FusionBackend::make(BackendKind::vect, g);
  auto ss = state_space(b, lat);
  WeightFunction delta(g.order(), 0.0);
  delta[g.identity()] = 1.0;
  auto values = vect_class_values(ss, ising_vector(ss, action_from_weight(b, delta)));
  for (size_t k = 0; k < values.values.size(); ++k) {
    bool trivial = true;
    for (int e : values.class_reps[k])
      if (e != g.identity()) trivial = false;
    double want = trivial ? static_cast<double>(g.order()) : 0.0;
    CHECK(std::abs(values.values[k] - want) < 1e-9);
  }
}

TEST_CASE("evenness violations are rejected") {
  auto g = build_group("Z3");
  auto b = FusionBackend::make(BackendKind::vect, g);
  auto ss = state_space(b, torus_lattice(2, 2));
  auto action = action_from_weight(b, {1.0, 0.3, 0.7});
  CHECK_THROWS_AS(ising_vector_raw(ss, action), NotEven);

  auto s3 = build_group("S3");
  auto br = FusionBackend::make(BackendKind::rep, s3);
  OperatorTransform t;
  for (const auto& rho : br.irreps()) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rho.dim, rho.dim);
    m(0, 0) = cplx(0, 1);  // not self-adjoint
    t.blocks.push_back(m);
  }
  CHECK_THROWS_AS(check_action_even(br, action_from_transform(br, t)), NotEven);
}

TEST_CASE("duality harness, abelian route") {
  std::mt19937 rng(41);
  SUBCASE("Z2 on torus(3,3)") {
    auto g = build_group("Z2");
    auto rep = duality_harness(g, torus_lattice(3, 3), {{1.0, 0.4}, {1.0, 0.7}});
    REQUIRE(rep.abelian_route);
    for (double err : rep.kw_errors) CHECK(err <= 1e-8);
  }
  SUBCASE("Z3 on torus(2,3)") {
    auto g = build_group("Z3");
    auto rep = duality_harness(g, torus_lattice(2, 3), {{1.0, 0.5, 0.5}});
    for (double err : rep.kw_errors) CHECK(err <= 1e-8);
  }
}

TEST_CASE("duality harness, nonabelian route on the tetrahedron") {
  auto g = build_group("S3");
  auto irr = irreducibles(g);
  std::mt19937 rng(97);
  std::vector<WeightFunction> thetas;
  for (int i = 0; i < 3; ++i) thetas.push_back(admissible_sample(g, irr, rng));
  auto rep = duality_harness(g, sphere_tetra(), thetas);
  REQUIRE_FALSE(rep.abelian_route);
  REQUIRE(rep.ratios.size() == 3);
  for (double s : rep.vect_scalars) CHECK(s > 0);
  for (double s : rep.rep_scalars) CHECK(s > 0);
  CHECK(rep.relative_spread <= 1e-6);
}

TEST_CASE("abelian backend equivalence: dimensions and projector ranks") {
  struct Case {
    const char* group;
    Lattice2 lat;
  };
  std::vector<Case> cases;
  cases.push_back({"Z2", torus_lattice(2, 2)});
  cases.push_back({"Z3", torus_lattice(2, 2)});
  cases.push_back({"Z4", sphere_tetra()});
  for (auto& c : cases) {
    auto g = build_group(c.group);
    auto bv = FusionBackend::make(BackendKind::vect, g);
    auto br = FusionBackend::make(BackendKind::rep, g);
    auto sv = state_space(bv, c.lat);
    auto sr = state_space(br, c.lat);
    CHECK(sv.dim == sr.dim);

    auto rank_of = [](const StateSpace& ss) {
      Eigen::MatrixXcd prod = vertex_projector(ss, 0);
      for (int v = 1; v < ss.lat.num_vertices; ++v) prod = vertex_projector(ss, v) * prod;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((prod + prod.adjoint()) / 2.0);
      int rank = 0;
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] > 0.5) ++rank;
      return rank;
    };
    CHECK(rank_of(sv) == rank_of(sr));
  }
}

TEST_CASE("rep backend projector product counts bundle classes") {
  auto s3 = build_group("S3");
  auto br = FusionBackend::make(BackendKind::rep, s3);
  auto ss_sphere = state_space(br, sphere_tetra());
  CHECK(full_projector_trace(ss_sphere) == doctest::Approx(1.0));  // one class on S^2

  auto z3 = build_group("Z3");
  auto brz = FusionBackend::make(BackendKind::rep, z3);
  auto ss_torus = state_space(brz, torus_lattice(2, 2));
  CHECK(full_projector_trace(ss_torus) == doctest::Approx(9.0));  // #H^1
}
