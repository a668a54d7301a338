#include "latdual/ising.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace latdual {

FlatBackground FlatBackground::trivial(const FiniteGroup& g, const Lattice2& lat) {
  FlatBackground b;
  b.group = &g;
  b.hol.assign(lat.num_edges(), g.identity());
  b.face_class.assign(lat.num_faces(), -1);
  return b;
}

int FlatBackground::face_holonomy(const Lattice2& lat, int f) const {
  const FiniteGroup& g = *group;
  int acc = g.identity();
  for (const auto& [e, dir] : lat.faces[f]) {
    int t = dir == 1 ? hol[e] : g.inv(hol[e]);
    acc = g.mul(t, acc);  // later transports compose on the left
  }
  return acc;
}

bool FlatBackground::check(const Lattice2& lat) const {
  const FiniteGroup& g = *group;
  for (int f = 0; f < lat.num_faces(); ++f) {
    int h = face_holonomy(lat, f);
    int want = f < static_cast<int>(face_class.size()) ? face_class[f] : -1;
    if (want < 0) {
      if (h != g.identity()) return false;
    } else if (g.class_of(h) != want) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spin sums

namespace {

// Per-edge lookup theta(inv(s_head) * hol * s_tail) indexed by s_tail*N+s_head.
std::vector<std::vector<double>> edge_tables(const Lattice2& lat, const FiniteGroup& g,
                                             const WeightFunction& theta,
                                             const std::vector<int>& hol) {
  const int n = g.order();
  std::vector<std::vector<double>> tab(lat.num_edges(), std::vector<double>(n * n));
  for (int e = 0; e < lat.num_edges(); ++e)
    for (int st = 0; st < n; ++st)
      for (int sh = 0; sh < n; ++sh)
        tab[e][st * n + sh] = theta[g.mul(g.inv(sh), g.mul(hol[e], st))];
  return tab;
}

long long checked_pow(long long base, int exp, long long cap) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r) || r > cap)
      throw CapExceeded("configuration count exceeds cap");
  }
  return r;
}

// Sum over sections s: V -> G of omega(s) * prod_e table_e(s_tail, s_head),
// optionally fixing s(v0) = fix_v0 (gauge fixing; caller scales the result).
// The edge tables realize Theta(z - d0 s); summing conj(omega) here therefore
// equals sum_s omega(s) Theta(z + d0 s) after the substitution s -> -s, which
// is the convention the duality bookkeeping uses.
cplx enumerate_sections(const Lattice2& lat, const FiniteGroup& g,
                        const std::vector<std::vector<double>>& tab,
                        const std::vector<std::pair<int, int>>& order_chars,
                        const AbelianGroup* a_for_chars, int fix_v0, bool conj_chars,
                        const SpinCaps& caps) {
  const int n = g.order();
  const int nv = lat.num_vertices;
  const int free_v = fix_v0 >= 0 ? nv - 1 : nv;
  long long total = checked_pow(n, free_v, caps.max_configurations);

  auto run_range = [&](long long begin, long long end) -> cplx {
    std::vector<int> s(nv, 0);
    if (fix_v0 >= 0) s[0] = fix_v0;
    // Kahan-compensated accumulation keeps the absolute error flat across
    // the largest configuration counts.
    cplx acc = 0, comp = 0;
    for (long long idx = begin; idx < end; ++idx) {
      long long rem = idx;
      for (int v = fix_v0 >= 0 ? 1 : 0; v < nv; ++v) {
        s[v] = static_cast<int>(rem % n);
        rem /= n;
      }
      double w = 1.0;
      for (int e = 0; e < lat.num_edges(); ++e)
        w *= tab[e][s[lat.edges[e].tail] * n + s[lat.edges[e].head]];
      if (w == 0.0) continue;
      cplx om(1, 0);
      for (const auto& [v, chi] : order_chars) om *= a_for_chars->pairing(s[v], chi);
      if (conj_chars) om = std::conj(om);
      cplx y = om * w - comp;
      cplx t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    return acc;
  };

  int workers = std::max(1, caps.threads);
  if (workers == 1 || total < 4096) return run_range(0, total);
  std::vector<cplx> partial(workers, 0);
  std::vector<std::thread> pool;
  long long chunk = (total + workers - 1) / workers;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      long long b = t * chunk, e = std::min(total, (t + 1) * chunk);
      if (b < e) partial[t] = run_range(b, e);
    });
  for (auto& th : pool) th.join();
  cplx acc = 0;
  for (const auto& p : partial) acc += p;  // fixed order for determinism
  return acc;
}

}  // namespace

double spin_partition(const Lattice2& lat, const FiniteGroup& g, const WeightFunction& theta,
                      const FlatBackground& background, const Insertions& ins,
                      const SpinCaps& caps) {
  require_valid(lat);
  if (static_cast<int>(theta.size()) != g.order())
    throw ParseError("theta length != group order");
  if (!ins.order.empty() && !g.is_abelian())
    throw UseTuraevViroBackend("order characters on a nonabelian group");

  // Disorder insertions are class constraints on the background holonomy;
  // the background edge labels must already realize them.
  FlatBackground bg = background;
  if (bg.face_class.empty()) bg.face_class.assign(lat.num_faces(), -1);
  for (const auto& [f, klass] : ins.disorder) bg.face_class[f] = klass;
  if (!bg.check(lat)) throw Error("background violates its holonomy constraints");

  auto tab = edge_tables(lat, g, theta, bg.hol);
  const AbelianGroup* a = g.is_abelian() ? &g.abelian() : nullptr;
  cplx val = enumerate_sections(lat, g, tab, ins.order, a, -1, /*conj_chars=*/false, caps);
  return val.real();
}

PartitionVector partition_vector(const Lattice2& lat, const AbelianGroup& a,
                                 const WeightFunction& theta, const Insertions& ins,
                                 const SpinCaps& caps) {
  require_valid(lat);
  if (static_cast<int>(theta.size()) != a.order())
    throw ParseError("theta length != group order");

  CochainComplex c = coboundaries(lat, a);
  Cochain eta(lat.num_faces(), a.zero());
  for (const auto& [f, elem] : ins.disorder) eta[f] = a.add(eta[f], elem);
  DisorderTorsor torsor = solve_disorder_torsor(c, eta);
  CohomologyData coh = cohomology(c);
  if (!coh.reps_available) throw CapExceeded("H^1 enumeration cap exceeded");

  // Selection rule: the sum of the order characters must vanish on the
  // diagonal copy of A, otherwise every class value is exactly zero.
  int total_char = a.zero();
  for (const auto& [v, chi] : ins.order) total_char = a.add(total_char, chi);
  const bool rule_zero = total_char != a.zero();

  // Group used for element arithmetic in the enumerator.
  FiniteGroup g = as_finite_group(a);

  PartitionVector out;
  out.torsor_base = torsor.base;
  for (const auto& rep : coh.h1_reps) {
    Cochain z(lat.num_edges());
    for (int e = 0; e < lat.num_edges(); ++e) z[e] = a.add(torsor.base[e], rep[e]);
    out.class_reps.push_back(z);
    if (rule_zero) {
      out.values.push_back(0.0);
      continue;
    }
    auto tab = edge_tables(lat, g, theta, z);
    cplx val =
        enumerate_sections(lat, g, tab, ins.order, &a, /*fix_v0=*/0, /*conj_chars=*/true, caps);
    out.values.push_back(val * static_cast<double>(a.order()));
  }
  return out;
}

KwReport kw_dual_check(const Lattice2& lat, const AbelianGroup& a, const WeightFunction& theta,
                       const Insertions& ins, const SpinCaps& caps, bool normalize_vertices) {
  require_valid(lat);
  KwReport report;

  const int nv = lat.num_vertices;
  const int nf = lat.num_faces();
  report.factor = normalize_vertices
                      ? 1.0
                      : std::pow(static_cast<double>(a.order()), 0.5 * (nv - nf));

  PartitionVector v = partition_vector(lat, a, theta, ins, caps);

  // Selection-rule degenerate case: the primal vector vanishes identically and
  // the dual disorder data is unsolvable; both sides are zero.
  int total_char = a.zero();
  for (const auto& [vx, chi] : ins.order) total_char = a.add(total_char, chi);
  if (total_char != a.zero()) {
    report.selection_rule_zero = true;
    for (const cplx& x : v.values)
      report.max_abs_err = std::max(report.max_abs_err, std::abs(x));
    return report;
  }

  DualLattice dual = dual_lattice(lat);
  AbelianGroup ad = a.dual();
  WeightFunction theta_dual = fourier_abelian_even(theta, a);

  // Order data (v_i, w_i) becomes disorder -w_i on the dual face v_i; disorder
  // (f_j, eta_j) becomes the order character t -> chi(eta_j, t(f_j)) at the
  // dual vertex f_j.
  Insertions dual_ins;
  for (const auto& [vx, chi] : ins.order) dual_ins.disorder.push_back({vx, ad.neg(chi)});
  for (const auto& [f, elem] : ins.disorder) dual_ins.order.push_back({f, elem});

  PartitionVector w = partition_vector(dual.lat, ad, theta_dual, dual_ins, caps);

  const long long h1 = static_cast<long long>(v.values.size());
  if (h1 != static_cast<long long>(w.values.size()))
    throw Error("primal and dual class counts differ");

  CochainComplex c = coboundaries(lat, a);
  const double norm_v = normalize_vertices ? std::pow(a.order(), -0.5 * nv) : 1.0;
  const double norm_w = normalize_vertices ? std::pow(a.order(), -0.5 * nf) : 1.0;

  const double inv_sqrt_h1 = 1.0 / std::sqrt(static_cast<double>(h1));
  for (long long k = 0; k < h1; ++k) {
    cplx lhs = 0;
    for (long long h = 0; h < h1; ++h)
      lhs += std::conj(poincare_pairing(c, v.class_reps[h], w.class_reps[k])) *
             (v.values[h] * norm_v);
    lhs *= inv_sqrt_h1;
    cplx rhs = report.factor * w.values[k] * norm_w;
    double err = std::abs(lhs - rhs);
    report.rows.push_back({static_cast<int>(k), lhs, rhs, err});
    report.max_abs_err = std::max(report.max_abs_err, err);
    report.scale = std::max(report.scale, std::abs(rhs));
  }
  return report;
}

Eigen::MatrixXd transfer_matrix(const LatticedCircle& circle, const FiniteGroup& g,
                                const WeightFunction& theta, int twist, long long state_cap) {
  const int n = circle.n;
  if (n < 2) throw InvalidLattice("latticed circle needs >= 2 vertices");
  if (static_cast<int>(theta.size()) != g.order())
    throw ParseError("theta length != group order");
  const int ng = g.order();
  long long dim = checked_pow(ng, n, state_cap);
  if (dim > 8192) throw CapExceeded("dense transfer matrix limited to dimension 8192");

  auto digits = [&](long long idx, std::vector<int>& s) {
    for (int i = 0; i < n; ++i) {
      s[i] = static_cast<int>(idx % ng);
      idx /= ng;
    }
  };

  Eigen::MatrixXd t(dim, dim);
  std::vector<int> s(n), sp(n);
  for (long long col = 0; col < dim; ++col) {
    digits(col, s);
    // Horizontal factors on the incoming slice; the twist sits on the
    // wrap-around edge (site n-1 -> site 0).
    double hor = 1.0;
    for (int i = 0; i < n; ++i) {
      int h = (i == n - 1) ? twist : g.identity();
      hor *= theta[g.mul(g.inv(s[(i + 1) % n]), g.mul(h, s[i]))];
    }
    for (long long row = 0; row < dim; ++row) {
      digits(row, sp);
      double vert = 1.0;
      for (int i = 0; i < n; ++i) vert *= theta[g.mul(g.inv(sp[i]), s[i])];
      t(row, col) = hor * vert;
    }
  }
  return t;
}

SpectrumSummary transfer_spectrum(const Eigen::MatrixXd& t, double rel_tol) {
  SpectrumSummary s;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > rel_tol * std::max(1.0, smax)) ++s.rank;

  Eigen::EigenSolver<Eigen::MatrixXd> es(t);
  double top = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    top = std::max(top, es.eigenvalues()[i].real());
  s.top = top;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i] - cplx(top, 0)) <= rel_tol * std::max(1.0, std::abs(top)))
      ++s.top_multiplicity;
  return s;
}

}  // namespace latdual
