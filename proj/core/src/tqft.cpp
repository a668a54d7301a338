#include "latdual/tqft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include <json.hpp>

namespace latdual {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) { num = -num; den = -den; }
  long long g = std::gcd(std::llabs(num), den);
  if (g > 1) { num /= g; den /= g; }
}

// ---------------------------------------------------------------------------
// Presentations

GroupPresentation GroupPresentation::trivial() { return {0, {}}; }

GroupPresentation GroupPresentation::free_group(int k) { return {k, {}}; }

GroupPresentation GroupPresentation::free_abelian(int k) {
  GroupPresentation p{k, {}};
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      p.relators.push_back({i + 1, j + 1, -(i + 1), -(j + 1)});
  return p;
}

GroupPresentation GroupPresentation::surface_group(int genus) {
  GroupPresentation p{2 * genus, {}};
  std::vector<int> relator;
  for (int k = 0; k < genus; ++k) {
    int a = 2 * k + 1, b = 2 * k + 2;
    relator.insert(relator.end(), {a, b, -a, -b});
  }
  if (!relator.empty()) p.relators.push_back(relator);
  return p;
}

std::string presentation_to_json(const GroupPresentation& p) {
  nlohmann::ordered_json j;
  j["generators"] = p.generators;
  j["relators"] = p.relators;
  return j.dump(2);
}

GroupPresentation presentation_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("presentation JSON parse error: ") + e.what());
  }
  GroupPresentation p;
  try {
    p.generators = j.at("generators").get<int>();
    for (const auto& r : j.at("relators")) p.relators.push_back(r.get<std::vector<int>>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("presentation JSON missing field: ") + e.what());
  }
  for (const auto& r : p.relators)
    for (int s : r)
      if (s == 0 || std::abs(s) > p.generators) throw ParseError("relator letter out of range");
  return p;
}

// ---------------------------------------------------------------------------
// Bundle counts

BundleCount count_bundles(const GroupPresentation& p, const FiniteGroup& g, long long search_cap) {
  const int n = g.order();
  long long total = 1;
  for (int i = 0; i < p.generators; ++i) {
    if (__builtin_mul_overflow(total, static_cast<long long>(n), &total) || total > search_cap)
      throw CapExceeded("hom search space exceeds cap");
  }

  auto eval_word = [&](const std::vector<int>& word, const std::vector<int>& img) {
    int acc = g.identity();
    for (int s : word) {
      int x = s > 0 ? img[s - 1] : g.inv(img[-s - 1]);
      acc = g.mul(acc, x);
    }
    return acc;
  };

  long long hom = 0;
  std::vector<int> img(std::max(1, p.generators), g.identity());
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int i = 0; i < p.generators; ++i) {
      img[i] = static_cast<int>(rem % n);
      rem /= n;
    }
    bool ok = true;
    for (const auto& r : p.relators)
      if (eval_word(r, img) != g.identity()) { ok = false; break; }
    if (ok) ++hom;
  }
  return {hom, Rational(hom, n)};
}

// ---------------------------------------------------------------------------
// Loop operators on S^1 x Y

namespace {

// Enumerate flat labelings matching per-face constraints; calls visit(z).
template <typename Visit>
void enumerate_labelings(const Lattice2& y, const FiniteGroup& g,
                         const std::vector<int>& face_class, long long cap, Visit&& visit) {
  const int ne = y.num_edges();
  const int n = g.order();
  long long total = 1;
  for (int e = 0; e < ne; ++e)
    if (__builtin_mul_overflow(total, static_cast<long long>(n), &total) || total > cap)
      throw CapExceeded("labeling search space exceeds cap");
  FlatBackground bg;
  bg.group = &g;
  bg.hol.assign(ne, g.identity());
  bg.face_class = face_class;
  std::vector<int> z(ne, 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int e = 0; e < ne; ++e) {
      z[e] = static_cast<int>(rem % n);
      rem /= n;
    }
    bg.hol = z;
    if (bg.check(y)) visit(z);
  }
}

// Stabilizer of a labeling inside the vertex gauge group: assignments
// t: V -> G with t(head) z(e) t(tail)^{-1} = z(e) for all edges. For a
// connected lattice these are determined by t at a base vertex.
std::vector<std::vector<int>> stabilizer_elements(const Lattice2& y, const FiniteGroup& g,
                                                  const std::vector<int>& z) {
  const int nv = y.num_vertices;
  std::vector<std::vector<int>> out;
  for (int t0 = 0; t0 < g.order(); ++t0) {
    // Propagate t over a spanning structure; t(head) = z t(tail) z^{-1}.
    std::vector<int> t(nv, -1);
    t[0] = t0;
    bool ok = true;
    bool changed = true;
    while (changed && ok) {
      changed = false;
      for (int e = 0; e < y.num_edges() && ok; ++e) {
        int a = y.edges[e].tail, b = y.edges[e].head;
        int he = z[e];
        if (t[a] >= 0) {
          int want = g.mul(he, g.mul(t[a], g.inv(he)));
          if (t[b] < 0) { t[b] = want; changed = true; }
          else if (t[b] != want) ok = false;
        } else if (t[b] >= 0) {
          int want = g.mul(g.inv(he), g.mul(t[b], he));
          t[a] = want;
          changed = true;
        }
      }
    }
    for (int v = 0; v < nv && ok; ++v)
      if (t[v] < 0) ok = false;  // disconnected: not supported here
    if (ok) out.push_back(t);
  }
  return out;
}

}  // namespace

double count_bundles_s1xy(const Lattice2& y, const FiniteGroup& g, long long search_cap) {
  return loop_operator_s1xy(y, g, LoopKind::thooft, g.class_of(g.identity()), 0, 0, search_cap);
}

double loop_operator_s1xy(const Lattice2& y, const FiniteGroup& g, LoopKind kind,
                          int character_or_class, int marked_vertex, int marked_face,
                          long long search_cap) {
  require_valid(y);
  if (kind == LoopKind::wilson && !g.is_abelian())
    throw UseTuraevViroBackend("nonabelian Wilson loop evaluation");

  std::vector<int> face_class(y.num_faces(), -1);
  if (kind == LoopKind::thooft) face_class[marked_face] = character_or_class;

  cplx acc = 0;
  enumerate_labelings(y, g, face_class, search_cap, [&](const std::vector<int>& z) {
    auto stab = stabilizer_elements(y, g, z);
    if (kind == LoopKind::wilson) {
      const AbelianGroup& a = g.abelian();
      for (const auto& t : stab) acc += a.pairing(t[marked_vertex], character_or_class);
    } else {
      acc += static_cast<double>(stab.size());
    }
  });
  double denom = std::pow(static_cast<double>(g.order()), y.num_vertices);
  cplx out = acc / denom;
  if (std::abs(out.imag()) > 1e-9 * std::max(1.0, std::abs(out.real())))
    throw Error("loop operator value has a nonreal residue");
  return out.real();
}

double pair_with_handlebody(const HandlebodyData& h, const FiniteGroup& g,
                            const WeightFunction& theta, const Insertions& ins,
                            const SpinCaps& caps) {
  require_valid(h.boundary);
  const Lattice2& y = h.boundary;

  std::vector<int> face_class(y.num_faces(), -1);
  for (const auto& [f, klass] : ins.disorder) face_class[f] = klass;

  // Meridian walks must be closed.
  for (const auto& walk : h.meridians) {
    if (walk.empty()) throw ParseError("empty meridian walk");
    for (size_t s = 0; s < walk.size(); ++s) {
      auto [e, d] = walk[s];
      auto [e2, d2] = walk[(s + 1) % walk.size()];
      int end_v = d == 1 ? y.edges[e].head : y.edges[e].tail;
      int start_v = d2 == 1 ? y.edges[e2].tail : y.edges[e2].head;
      if (end_v != start_v) throw ParseError("meridian walk is not a closed path");
    }
  }

  auto meridian_trivial = [&](const std::vector<int>& z) {
    for (const auto& walk : h.meridians) {
      int acc = g.identity();
      for (const auto& [e, d] : walk) acc = g.mul(d == 1 ? z[e] : g.inv(z[e]), acc);
      if (acc != g.identity()) return false;
    }
    return true;
  };

  double acc = 0;
  Insertions order_only;
  order_only.order = ins.order;
  enumerate_labelings(y, g, face_class, caps.max_configurations, [&](const std::vector<int>& z) {
    if (!meridian_trivial(z)) return;
    FlatBackground bg;
    bg.group = &g;
    bg.hol = z;
    bg.face_class = face_class;
    acc += spin_partition(y, g, theta, bg, order_only, caps);
  });
  return acc / std::pow(static_cast<double>(g.order()), y.num_vertices);
}

// ---------------------------------------------------------------------------
// Higher theories

Rational higher_partition(const std::vector<long long>& h_orders, int r) {
  if (r < 0 || r >= static_cast<int>(h_orders.size()))
    throw ParseError("degree r outside 0..dim");
  long long num = 1, den = 1;
  for (int i = 0; i <= r; ++i) {
    long long h = h_orders[r - i];
    long long* side = (i % 2 == 0) ? &num : &den;
    if (__builtin_mul_overflow(*side, h, side)) throw CapExceeded("partition value overflows");
  }
  return Rational(num, den);
}

Rational higher_partition(const SimplicialComplex& x, const AbelianGroup& a, int r,
                          long long cell_cap) {
  return higher_partition(simplicial_cohomology(x, a, cell_cap), r);
}

Rational higher_partition(const Lattice2& surface, const AbelianGroup& a, int r) {
  CochainComplex c = coboundaries(surface, a);
  CohomologyData coh = cohomology(c, 1);
  return higher_partition({coh.order[0], coh.order[1], coh.order[2]}, r);
}

EmDualReport em_duality_check(const std::vector<long long>& h_orders, const AbelianGroup& a,
                              int r, int n, long long euler) {
  if (n - 1 - r < 0) throw ParseError("dual degree n-1-r is negative");
  EmDualReport rep;
  rep.z = higher_partition(h_orders, r);
  rep.z_dual = higher_partition(h_orders, n - 1 - r);  // #A^vee = #A orders match
  rep.euler = euler;
  rep.expected_base = a.order();
  rep.ratio = Rational(rep.z.num * rep.z_dual.den, rep.z.den * rep.z_dual.num);
  // Expected exponent: 0 for odd n, -chi for even n (frozen calibration).
  rep.exponent = (n % 2 == 0) ? -euler : 0;
  long long want_num = 1, want_den = 1;
  long long e = rep.exponent;
  for (long long i = 0; i < std::llabs(e); ++i) {
    long long* side = e > 0 ? &want_num : &want_den;
    if (__builtin_mul_overflow(*side, static_cast<long long>(a.order()), side))
      throw CapExceeded("expected ratio overflows");
  }
  rep.ok = rep.ratio == Rational(want_num, want_den);
  return rep;
}

EmDualReport em_duality_check(const SimplicialComplex& x, const AbelianGroup& a, int r,
                              long long cell_cap) {
  auto orders = simplicial_cohomology(x, a, cell_cap);
  // Euler characteristic from the generated cell counts is recovered via the
  // alternating sum of cohomology ranks only for field coefficients, so count
  // cells directly instead.
  long long euler = 0;
  {
    // Rebuild the cell table cheaply by reusing simplicial_cohomology's
    // generation rules: alternating sum over dimensions of cell counts.
    // (The complex is small at desk scale; regenerate.)
    std::vector<std::set<std::vector<int>>> cells(x.dim + 1);
    for (const auto& top : x.simplices) {
      const int m = x.dim + 1;
      for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> cell;
        for (int i = 0; i < m; ++i)
          if (mask & (1 << i)) cell.push_back(top[i]);
        std::sort(cell.begin(), cell.end());
        cells[cell.size() - 1].insert(cell);
      }
    }
    for (int d = 0; d <= x.dim; ++d)
      euler += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(cells[d].size());
  }
  return em_duality_check(orders, a, r, x.dim, euler);
}

EmDualReport em_duality_check(const Lattice2& surface, const AbelianGroup& a, int r) {
  CochainComplex c = coboundaries(surface, a);
  CohomologyData coh = cohomology(c, 1);
  return em_duality_check({coh.order[0], coh.order[1], coh.order[2]}, a, r, 2,
                          surface.euler_characteristic());
}

}  // namespace latdual
