#include "latdual/homology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace latdual {

Cochain CochainComplex::apply_d0(const Cochain& s) const {
  Cochain out(num_edges(), 0);
  for (int e = 0; e < num_edges(); ++e) {
    const auto& ed = lat->edges[e];
    out[e] = coeff.sub(s[ed.head], s[ed.tail]);
  }
  return out;
}

Cochain CochainComplex::apply_d1(const Cochain& c) const {
  Cochain out(num_faces(), 0);
  for (int f = 0; f < num_faces(); ++f) {
    int acc = coeff.zero();
    for (const auto& [e, dir] : lat->faces[f])
      acc = coeff.add(acc, dir == 1 ? c[e] : coeff.neg(c[e]));
    out[f] = acc;
  }
  return out;
}

CochainComplex coboundaries(const Lattice2& lat, const AbelianGroup& a) {
  require_valid(lat);
  CochainComplex c{&lat, a, MatZ::Zero(lat.num_edges(), lat.num_vertices),
                   MatZ::Zero(lat.num_faces(), lat.num_edges())};
  for (int e = 0; e < lat.num_edges(); ++e) {
    c.d0(e, lat.edges[e].head) += 1;
    c.d0(e, lat.edges[e].tail) -= 1;
  }
  for (int f = 0; f < lat.num_faces(); ++f)
    for (const auto& [e, dir] : lat.faces[f]) c.d1(f, e) += dir;
  if (!(c.d1 * c.d0).isZero()) throw Error("d1*d0 != 0 (broken lattice incidence)");
  return c;
}

// ---------------------------------------------------------------------------
// Orders and representatives, per cyclic factor

ModKerIm mod_n_ker_im(const MatZ& a, long long n) {
  SmithForm f = smith_normal_form(a);
  ModKerIm r;
  const long long cols = a.cols();
  double log_n = std::log(static_cast<double>(n));
  r.log_ker = (cols - f.rank) * log_n;
  long long ker = 1;
  bool ker_fits = true;
  for (int i = 0; i < f.rank; ++i) {
    long long g = gcd_ll(f.diag[i], n);
    r.log_ker += std::log(static_cast<double>(g));
    if (ker_fits && __builtin_mul_overflow(ker, g, &ker)) ker_fits = false;
  }
  for (long long i = 0; i < cols - f.rank && ker_fits; ++i)
    if (__builtin_mul_overflow(ker, n, &ker)) ker_fits = false;
  r.ker = ker_fits ? ker : 0;
  r.log_im = cols * log_n - r.log_ker;
  long long im = 1;
  bool im_fits = true;
  for (int i = 0; i < f.rank && im_fits; ++i)
    if (__builtin_mul_overflow(im, n / gcd_ll(f.diag[i], n), &im)) im_fits = false;
  r.im = im_fits ? im : 0;
  return r;
}

namespace {

struct FactorH1 {
  long long order = 1;
  // Kernel generators of d1 mod n (columns, entries mod n) and, for each
  // cokernel cyclic factor with modulus > 1, a generator cochain mod n.
  std::vector<long long> moduli;
  std::vector<std::vector<long long>> generators;  // per modulus, length E
};

// H^1 with explicit representatives for coefficients Z/n.
FactorH1 factor_h1(const MatZ& d0, const MatZ& d1, long long n) {
  const int e_cnt = static_cast<int>(d0.rows());
  const int v_cnt = static_cast<int>(d0.cols());

  SmithForm f1 = smith_normal_form(d1);
  // Kernel generators of d1 mod n in y-coordinates, mapped back by V.
  std::vector<VecZ> kernel;
  for (int i = 0; i < static_cast<int>(f1.diag.size()); ++i) {
    if (f1.diag[i] == 0) continue;
    long long g = gcd_ll(f1.diag[i], n);
    if (g == 1) continue;  // the only solution is 0 mod n
    VecZ y = VecZ::Zero(e_cnt);
    y[i] = n / g;
    kernel.push_back(y);
  }
  for (int i = f1.rank; i < e_cnt; ++i) {
    VecZ y = VecZ::Zero(e_cnt);
    y[i] = 1;
    kernel.push_back(y);
  }
  const int k = static_cast<int>(kernel.size());
  MatZ kmat(e_cnt, k);
  for (int c = 0; c < k; ++c) {
    VecZ x = f1.v * kernel[c];
    for (int r = 0; r < e_cnt; ++r) kmat(r, c) = ((x[r] % n) + n) % n;
  }

  FactorH1 out;
  if (k == 0) { out.order = 1; return out; }

  // Express the columns of d0 in kernel coordinates: solve K w = d0col mod n.
  SmithForm fk = smith_normal_form(kmat);
  MatZ w(k, v_cnt);
  for (int col = 0; col < v_cnt; ++col) {
    VecZ b = fk.u * d0.col(col);
    VecZ y = VecZ::Zero(k);
    for (int i = 0; i < k; ++i) {
      long long s = i < static_cast<int>(fk.diag.size()) ? fk.diag[i] : 0;
      long long sol = solve_cyclic(s, b[i], n);
      if (sol < 0) throw Error("coboundary not in cocycle span (broken complex)");
      y[i] = sol;
    }
    for (int i = k; i < static_cast<int>(b.size()); ++i)
      if (((b[i] % n) + n) % n != 0) throw Error("coboundary not in cocycle span");
    VecZ x = fk.v * y;
    for (int r = 0; r < k; ++r) w(r, col) = ((x[r] % n) + n) % n;
  }

  // H1 = Z^k / (im w + n Z^k) = coker [w | nI].
  MatZ m(k, v_cnt + k);
  m.leftCols(v_cnt) = w;
  m.rightCols(k) = MatZ::Identity(k, k) * n;
  SmithForm fm = smith_normal_form(m);

  out.order = 1;
  for (int i = 0; i < k; ++i) {
    long long s = i < static_cast<int>(fm.diag.size()) ? fm.diag[i] : 0;
    if (s == 0) throw Error("unexpected free factor in H1 presentation");
    if (s == 1) continue;
    if (__builtin_mul_overflow(out.order, s, &out.order))
      throw CapExceeded("H1 order overflows");
    // Generator: x = Uinv * e_i, as a cochain K * x mod n.
    VecZ x = fm.uinv.col(i);
    VecZ z = kmat * x;
    std::vector<long long> gen(e_cnt);
    for (int r = 0; r < e_cnt; ++r) gen[r] = ((z[r] % n) + n) % n;
    out.moduli.push_back(s);
    out.generators.push_back(std::move(gen));
  }
  return out;
}

}  // namespace

CohomologyData cohomology(const CochainComplex& c, long long enumeration_cap) {
  const auto& factors = c.coeff.factors();
  CohomologyData out;
  out.order = {1, 1, 1};

  struct PerFactor {
    FactorH1 h1;
    long long n;
  };
  std::vector<PerFactor> pf;

  for (int n : factors) {
    auto k0 = mod_n_ker_im(c.d0, n);
    // #H0 = #ker d0; #H1 = #ker d1 / #im d0; #H2 = n^F / #im d1.
    if (k0.ker == 0) throw CapExceeded("H0 order overflows");
    long long h0 = k0.ker;
    auto h1data = factor_h1(c.d0, c.d1, n);
    long long h2 = 1;
    {
      // n^F / #im = gcd product times n^(F - rank), exactly.
      SmithForm f1 = smith_normal_form(c.d1);
      for (int i = 0; i < f1.rank; ++i) {
        long long g = gcd_ll(f1.diag[i], n);
        if (__builtin_mul_overflow(h2, g, &h2)) throw CapExceeded("H2 order overflows");
      }
      for (int i = f1.rank; i < c.num_faces(); ++i)
        if (__builtin_mul_overflow(h2, n, &h2)) throw CapExceeded("H2 order overflows");
    }
    auto mul_into = [](long long& acc, long long v) {
      if (__builtin_mul_overflow(acc, v, &acc)) throw CapExceeded("cohomology order overflows");
    };
    mul_into(out.order[0], h0);
    mul_into(out.order[1], h1data.order);
    mul_into(out.order[2], h2);
    pf.push_back({std::move(h1data), n});
  }

  // Enumerate H1 representatives as products of the per-factor generators.
  if (out.order[1] <= enumeration_cap) {
    out.reps_available = true;
    const int e_cnt = c.num_edges();
    // Mixed-radix enumeration over all cyclic factors of all coefficients.
    struct Slot {
      int factor_idx;
      long long modulus;
      const std::vector<long long>* gen;
    };
    std::vector<Slot> slots;
    for (size_t j = 0; j < pf.size(); ++j)
      for (size_t i = 0; i < pf[j].h1.moduli.size(); ++i)
        slots.push_back({static_cast<int>(j), pf[j].h1.moduli[i], &pf[j].h1.generators[i]});

    std::vector<long long> counter(slots.size(), 0);
    while (true) {
      // Build the cochain for this tuple.
      std::vector<std::vector<long long>> per_factor(factors.size());
      for (size_t j = 0; j < factors.size(); ++j) per_factor[j].assign(e_cnt, 0);
      for (size_t t = 0; t < slots.size(); ++t) {
        const auto& slot = slots[t];
        long long n = factors[slot.factor_idx];
        for (int e = 0; e < e_cnt; ++e)
          per_factor[slot.factor_idx][e] =
              (per_factor[slot.factor_idx][e] + counter[t] * (*slot.gen)[e]) % n;
      }
      Cochain rep(e_cnt);
      for (int e = 0; e < e_cnt; ++e) {
        std::vector<int> residues(factors.size());
        for (size_t j = 0; j < factors.size(); ++j)
          residues[j] = static_cast<int>(per_factor[j][e]);
        rep[e] = c.coeff.index(residues);
      }
      out.h1_reps.push_back(std::move(rep));

      // Increment mixed-radix counter.
      size_t t = 0;
      while (t < slots.size()) {
        if (++counter[t] < slots[t].modulus) break;
        counter[t] = 0;
        ++t;
      }
      if (t == slots.size()) break;
    }
    if (static_cast<long long>(out.h1_reps.size()) != out.order[1])
      throw Error("H1 representative count mismatch");
  }
  return out;
}

DisorderTorsor solve_disorder_torsor(const CochainComplex& c, const Cochain& eta) {
  const auto& factors = c.coeff.factors();
  const int e_cnt = c.num_edges();
  const int f_cnt = c.num_faces();
  if (static_cast<int>(eta.size()) != f_cnt) throw ParseError("eta length != face count");

  std::vector<std::vector<long long>> sol_per_factor(factors.size());
  SmithForm f1 = smith_normal_form(c.d1);
  for (size_t j = 0; j < factors.size(); ++j) {
    long long n = factors[j];
    VecZ b(f_cnt);
    for (int f = 0; f < f_cnt; ++f) b[f] = c.coeff.residues(eta[f])[j];
    VecZ ub = f1.u * b;
    VecZ y = VecZ::Zero(e_cnt);
    std::ostringstream obstruction;
    bool ok = true;
    for (int i = 0; i < f_cnt; ++i) {
      long long s = i < static_cast<int>(f1.diag.size()) ? f1.diag[i] : 0;
      if (i < e_cnt) {
        long long sol = solve_cyclic(s, ub[i], n);
        if (sol < 0) {
          ok = false;
          obstruction << " factor Z" << n << " row " << i << " residue "
                      << ((ub[i] % n) + n) % n << " vs " << s << ";";
        } else {
          y[i] = sol;
        }
      } else if (((ub[i] % n) + n) % n != 0) {
        ok = false;
        obstruction << " factor Z" << n << " row " << i << " residue "
                    << ((ub[i] % n) + n) % n << ";";
      }
    }
    if (!ok)
      throw NotABoundary("disorder data is not a coboundary; obstruction in H^2:" +
                         obstruction.str());
    VecZ x = f1.v * y;
    sol_per_factor[j].resize(e_cnt);
    for (int e = 0; e < e_cnt; ++e) sol_per_factor[j][e] = ((x[e] % n) + n) % n;
  }

  DisorderTorsor out;
  out.base.resize(e_cnt);
  for (int e = 0; e < e_cnt; ++e) {
    std::vector<int> residues(factors.size());
    for (size_t j = 0; j < factors.size(); ++j)
      residues[j] = static_cast<int>(sol_per_factor[j][e]);
    out.base[e] = c.coeff.index(residues);
  }
  // Sanity: d1 base = eta exactly.
  if (c.apply_d1(out.base) != eta) throw Error("torsor base point does not solve d1 z = eta");

  long long z1 = 1;
  for (int n : factors) {
    auto ki = mod_n_ker_im(c.d1, n);
    if (ki.ker == 0 || __builtin_mul_overflow(z1, ki.ker, &z1)) z1 = 0;
  }
  out.torsor_size = z1;
  return out;
}

cplx poincare_pairing(const CochainComplex& c, const Cochain& u, const Cochain& w,
                      bool conjugate) {
  if (u.size() != w.size()) throw RequiresDual("cochain sizes differ (dual structure missing?)");
  cplx out(1, 0);
  for (size_t e = 0; e < u.size(); ++e) out *= c.coeff.pairing(u[e], w[e]);
  return conjugate ? std::conj(out) : out;
}

SubquotientDiagram build_subquotient(const CochainComplex& c, const CochainComplex& c_dual) {
  auto safe_pow = [](long long base, int exp) -> long long {
    long long r = 1;
    for (int i = 0; i < exp; ++i)
      if (__builtin_mul_overflow(r, base, &r)) return 0;  // 0 marks "does not fit"
    return r;
  };
  auto z1_count = [](const CochainComplex& cc) -> long long {
    long long z1 = 1;
    for (int n : cc.coeff.factors()) {
      auto ki = mod_n_ker_im(cc.d1, n);
      if (ki.ker == 0 || __builtin_mul_overflow(z1, ki.ker, &z1)) return 0;
    }
    return z1;
  };

  SubquotientDiagram d;
  d.log_num_m = c.num_edges() * std::log(static_cast<double>(c.coeff.order()));
  d.num_m = safe_pow(c.coeff.order(), c.num_edges());
  d.num_m1 = safe_pow(c.coeff.order(), c.num_vertices());
  d.num_k = z1_count(c);
  d.num_k_dual = z1_count(c_dual);
  // #M'' = #B^2 = #M / #Z^1.
  d.num_m2 = (d.num_m > 0 && d.num_k > 0) ? d.num_m / d.num_k : 0;
  d.num_h = cohomology(c, 1).order[1];
  d.num_h_dual = cohomology(c_dual, 1).order[1];
  return d;
}

// ---------------------------------------------------------------------------
// Simplicial complexes

namespace {

struct CellTable {
  // cells[d] = sorted vertex tuples of dimension d; index maps for lookup.
  std::vector<std::vector<std::vector<int>>> cells;
  std::vector<std::map<std::vector<int>, int>> index;
};

CellTable build_cells(const SimplicialComplex& x, long long cell_cap) {
  CellTable t;
  t.cells.resize(x.dim + 1);
  t.index.resize(x.dim + 1);
  long long total = 0;
  for (const auto& top : x.simplices) {
    if (static_cast<int>(top.size()) != x.dim + 1)
      throw ParseError("top simplex arity does not match dim");
    std::set<int> distinct(top.begin(), top.end());
    if (static_cast<int>(distinct.size()) != x.dim + 1)
      throw ParseError("degenerate simplex (repeated vertex)");
    // All subsets of each top simplex, by dimension.
    const int m = x.dim + 1;
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<int> cell;
      for (int i = 0; i < m; ++i)
        if (mask & (1 << i)) cell.push_back(top[i]);
      std::sort(cell.begin(), cell.end());
      int d = static_cast<int>(cell.size()) - 1;
      if (!t.index[d].count(cell)) {
        t.index[d][cell] = static_cast<int>(t.cells[d].size());
        t.cells[d].push_back(cell);
        if (++total > cell_cap) throw CapExceeded("cell cap exceeded");
      }
    }
  }
  // Top cells must be distinct as vertex sets (simplicial, not Delta, complex).
  if (t.cells[x.dim].size() != x.simplices.size())
    throw ParseError("top simplices with repeated vertex sets: not a simplicial complex");
  return t;
}

}  // namespace

std::vector<long long> simplicial_cohomology(const SimplicialComplex& x, const AbelianGroup& a,
                                             long long cell_cap) {
  CellTable t = build_cells(x, cell_cap);
  // Boundary matrices del_d: cells[d] -> cells[d-1] with alternating signs on
  // sorted tuples. Cochain differential in degree d is del_{d+1}^T.
  std::vector<MatZ> del(x.dim + 1);
  for (int d = 1; d <= x.dim; ++d) {
    del[d] = MatZ::Zero(t.cells[d - 1].size(), t.cells[d].size());
    for (size_t ci = 0; ci < t.cells[d].size(); ++ci) {
      const auto& cell = t.cells[d][ci];
      for (int i = 0; i <= d; ++i) {
        std::vector<int> face;
        for (int j = 0; j <= d; ++j)
          if (j != i) face.push_back(cell[j]);
        del[d](t.index[d - 1].at(face), ci) += (i % 2 == 0 ? 1 : -1);
      }
    }
  }

  std::vector<long long> orders(x.dim + 1, 1);
  // #H^d = #ker(delta^d) / #im(delta^{d-1}) with delta^d = del[d+1]^T; both
  // counts are huge but the quotient is n^(c_d - r_d - r_{d-1}) times small
  // gcd products, so track exponents instead of raw counts.
  std::vector<SmithForm> snf(x.dim + 2);
  for (int d = 1; d <= x.dim; ++d) snf[d] = smith_normal_form(MatZ(del[d].transpose()));
  for (int n : a.factors()) {
    for (int d = 0; d <= x.dim; ++d) {
      long long cells_d = static_cast<long long>(t.cells[d].size());
      long long rank_d = d < x.dim ? snf[d + 1].rank : 0;           // rank of delta^d
      long long rank_prev = d > 0 ? snf[d].rank : 0;                // rank of delta^{d-1}
      long long exponent = cells_d - rank_d - rank_prev;
      if (exponent < 0) throw Error("negative cohomology exponent");
      long long h = 1;
      auto mul_into = [&](long long v) {
        if (__builtin_mul_overflow(h, v, &h)) throw CapExceeded("cohomology order overflows");
      };
      for (long long i = 0; i < exponent; ++i) mul_into(n);
      if (d < x.dim)
        for (int i = 0; i < snf[d + 1].rank; ++i) mul_into(gcd_ll(snf[d + 1].diag[i], n));
      if (d > 0)
        for (int i = 0; i < snf[d].rank; ++i) mul_into(gcd_ll(snf[d].diag[i], n));
      if (__builtin_mul_overflow(orders[d], h, &orders[d]))
        throw CapExceeded("cohomology order overflows");
    }
  }
  return orders;
}

SimplicialComplex boundary_of_simplex(int n) {
  SimplicialComplex x;
  x.dim = n - 1;
  std::vector<int> verts(n + 1);
  std::iota(verts.begin(), verts.end(), 0);
  for (int skip = 0; skip <= n; ++skip) {
    std::vector<int> cell;
    for (int v = 0; v <= n; ++v)
      if (v != skip) cell.push_back(v);
    x.simplices.push_back(cell);
  }
  return x;
}

SimplicialComplex torus3_complex(int L) {
  if (L < 3) throw ParseError("periodic Kuhn triangulation needs >= 3 subdivisions per axis");
  SimplicialComplex x;
  x.dim = 3;
  auto vid = [&](int i, int j, int k) {
    auto m = [&](int t) { return ((t % L) + L) % L; };
    return m(i) * L * L + m(j) * L + m(k);
  };
  const int axes[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::set<std::vector<int>> seen;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      for (int k = 0; k < L; ++k)
        for (const auto& order : axes) {
          int p[3] = {i, j, k};
          std::vector<int> cell = {vid(p[0], p[1], p[2])};
          for (int step = 0; step < 3; ++step) {
            p[order[step]] += 1;
            cell.push_back(vid(p[0], p[1], p[2]));
          }
          std::vector<int> key = cell;
          std::sort(key.begin(), key.end());
          if (!seen.insert(key).second)
            throw ParseError("Kuhn triangulation produced duplicate cells");
          x.simplices.push_back(cell);
        }
  return x;
}

SimplicialComplex rp2_complex() {
  SimplicialComplex x;
  x.dim = 2;
  x.simplices = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                 {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
  return x;
}

std::string simplicial_to_json(const SimplicialComplex& x) {
  nlohmann::ordered_json j;
  j["dim"] = x.dim;
  j["simplices"] = x.simplices;
  return j.dump(2);
}

SimplicialComplex simplicial_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("simplicial JSON parse error: ") + e.what());
  }
  SimplicialComplex x;
  try {
    x.dim = j.at("dim").get<int>();
    for (const auto& s : j.at("simplices")) x.simplices.push_back(s.get<std::vector<int>>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("simplicial JSON missing field: ") + e.what());
  }
  return x;
}

}  // namespace latdual
