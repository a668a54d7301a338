#include "latdual/groups.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace latdual {

// ---------------------------------------------------------------------------
// AbelianGroup

AbelianGroup::AbelianGroup(std::vector<int> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ParseError("abelian group needs at least one cyclic factor");
  for (int n : factors_)
    if (n < 2) throw ParseError("cyclic factor orders must be >= 2");
  strides_.assign(factors_.size(), 1);
  for (int j = static_cast<int>(factors_.size()) - 2; j >= 0; --j)
    strides_[j] = strides_[j + 1] * factors_[j + 1];
  order_ = strides_[0] * factors_[0];
}

int AbelianGroup::add(int a, int b) const {
  int out = 0;
  for (size_t j = 0; j < factors_.size(); ++j) {
    int aj = (a / strides_[j]) % factors_[j];
    int bj = (b / strides_[j]) % factors_[j];
    out += ((aj + bj) % factors_[j]) * strides_[j];
  }
  return out;
}

int AbelianGroup::neg(int a) const {
  int out = 0;
  for (size_t j = 0; j < factors_.size(); ++j) {
    int aj = (a / strides_[j]) % factors_[j];
    out += ((factors_[j] - aj) % factors_[j]) * strides_[j];
  }
  return out;
}

std::vector<int> AbelianGroup::residues(int a) const {
  std::vector<int> r(factors_.size());
  for (size_t j = 0; j < factors_.size(); ++j) r[j] = (a / strides_[j]) % factors_[j];
  return r;
}

int AbelianGroup::index(const std::vector<int>& residues) const {
  int out = 0;
  for (size_t j = 0; j < factors_.size(); ++j) {
    int aj = ((residues[j] % factors_[j]) + factors_[j]) % factors_[j];
    out += aj * strides_[j];
  }
  return out;
}

cplx AbelianGroup::pairing(int a, int a_dual) const {
  double phase = 0.0;
  for (size_t j = 0; j < factors_.size(); ++j) {
    int aj = (a / strides_[j]) % factors_[j];
    int bj = (a_dual / strides_[j]) % factors_[j];
    phase += static_cast<double>(aj) * bj / factors_[j];
  }
  phase *= 2.0 * std::numbers::pi;
  return {std::cos(phase), std::sin(phase)};
}

std::string AbelianGroup::element_name(int a) const {
  auto r = residues(a);
  std::ostringstream os;
  os << '(';
  for (size_t j = 0; j < r.size(); ++j) os << r[j] << (j + 1 < r.size() ? "," : "");
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::string name, std::vector<std::vector<int>> cayley, int order_cap)
    : name_(std::move(name)), cayley_(std::move(cayley)) {
  n_ = static_cast<int>(cayley_.size());
  if (n_ == 0) throw ParseError("empty Cayley table");
  if (n_ > order_cap)
    throw CapExceeded("group order " + std::to_string(n_) + " exceeds cap " +
                      std::to_string(order_cap));
  for (const auto& row : cayley_)
    if (static_cast<int>(row.size()) != n_) throw ParseError("Cayley table is not square");

  // Identity: the unique e with e*g = g*e = g.
  identity_ = -1;
  for (int e = 0; e < n_; ++e) {
    bool ok = true;
    for (int g = 0; g < n_ && ok; ++g) ok = (cayley_[e][g] == g && cayley_[g][e] == g);
    if (ok) { identity_ = e; break; }
  }
  if (identity_ < 0) throw ParseError("Cayley table has no identity element");

  inverse_.assign(n_, -1);
  for (int g = 0; g < n_; ++g)
    for (int h = 0; h < n_; ++h)
      if (cayley_[g][h] == identity_ && cayley_[h][g] == identity_) { inverse_[g] = h; break; }
  for (int g = 0; g < n_; ++g)
    if (inverse_[g] < 0) throw ParseError("element without inverse in Cayley table");

  // Associativity: exhaustive for small orders, sampled above.
  auto check = [&](int a, int b, int c) {
    if (cayley_[cayley_[a][b]][c] != cayley_[a][cayley_[b][c]])
      throw ParseError("Cayley table is not associative");
  };
  if (n_ <= 64) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c) check(a, b, c);
  } else {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> d(0, n_ - 1);
    for (int t = 0; t < 20000; ++t) check(d(rng), d(rng), d(rng));
  }

  // Conjugacy classes.
  class_of_.assign(n_, -1);
  for (int g = 0; g < n_; ++g) {
    if (class_of_[g] >= 0) continue;
    int c = static_cast<int>(classes_.size());
    std::vector<int> cls;
    for (int t = 0; t < n_; ++t) {
      int h = cayley_[cayley_[t][g]][inverse_[t]];
      if (class_of_[h] < 0) {
        class_of_[h] = c;
        cls.push_back(h);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes_.push_back(std::move(cls));
  }
  for (const auto& cls : classes_)
    if (n_ % static_cast<int>(cls.size()) != 0)
      throw ParseError("conjugacy class size does not divide group order");
}

const AbelianGroup& FiniteGroup::abelian() const {
  if (!abelian_) throw NotAbelian("group " + name_ + " is not abelian");
  return *abelian_;
}

std::string FiniteGroup::element_name(int g) const {
  if (g >= 0 && g < static_cast<int>(element_names_.size())) return element_names_[g];
  return std::to_string(g);
}

// ---------------------------------------------------------------------------
// Descriptor parsing and named groups

namespace {

std::vector<std::vector<int>> cayley_from_abelian(const AbelianGroup& a) {
  int n = a.order();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t[x][y] = a.add(x, y);
  return t;
}

// Permutation groups are listed with a fixed, documented element order; the
// Cayley table index order is frozen by these constructors.
using Perm = std::vector<int>;

Perm compose(const Perm& p, const Perm& q) {  // (p*q)(i) = p(q(i))
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

std::vector<std::vector<int>> cayley_from_perms(const std::vector<Perm>& elems) {
  int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n, -1));
  auto find = [&](const Perm& p) {
    for (int i = 0; i < n; ++i)
      if (elems[i] == p) return i;
    throw ParseError("permutation set not closed under composition");
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = find(compose(elems[i], elems[j]));
  return t;
}

FiniteGroup make_s3(int cap) {
  // Frozen order: e, (01), (02), (12), (012), (021).
  std::vector<Perm> e = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  FiniteGroup g("S3", cayley_from_perms(e), cap);
  return g;
}

FiniteGroup make_d4(int cap) {
  // Square vertices 0..3; r = rotation, s = reflection across a diagonal.
  // Frozen order: e, r, r2, r3, s, rs, r2s, r3s.
  Perm r = {1, 2, 3, 0};
  Perm s = {1, 0, 3, 2};
  std::vector<Perm> e;
  Perm cur = {0, 1, 2, 3};
  for (int i = 0; i < 4; ++i) { e.push_back(cur); cur = compose(r, cur); }
  cur = s;
  for (int i = 0; i < 4; ++i) { e.push_back(cur); cur = compose(r, cur); }
  return FiniteGroup("D4", cayley_from_perms(e), cap);
}

FiniteGroup make_q8(int cap) {
  // Frozen order: 1, -1, i, -i, j, -j, k, -k.
  // Multiplication via signed quaternion units.
  auto idx = [](int unit, int sign) { return 2 * unit + (sign < 0 ? 1 : 0); };
  auto unit_of = [](int x) { return x / 2; };
  auto sign_of = [](int x) { return x % 2 == 0 ? 1 : -1; };
  // unit table for 1,i,j,k: value and sign of u*v
  const int utab[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int stab[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      int u = utab[unit_of(x)][unit_of(y)];
      int s = stab[unit_of(x)][unit_of(y)] * sign_of(x) * sign_of(y);
      t[x][y] = idx(u, s);
    }
  return FiniteGroup("Q8", t, cap);
}

FiniteGroup make_a4(int cap) {
  // Even permutations of {0,1,2,3} listed in lexicographic order.
  std::vector<Perm> e;
  Perm p = {0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inversions;
    if (inversions % 2 == 0) e.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return FiniteGroup("A4", cayley_from_perms(e), cap);
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

FiniteGroup as_finite_group(const AbelianGroup& a) {
  std::string name = "Z" + std::to_string(a.factors()[0]);
  for (size_t j = 1; j < a.factors().size(); ++j)
    name += "xZ" + std::to_string(a.factors()[j]);
  FiniteGroup g(name, cayley_from_abelian(a), std::max(a.order(), FiniteGroup::kDefaultOrderCap));
  std::vector<std::string> names(a.order());
  for (int x = 0; x < a.order(); ++x) names[x] = a.element_name(x);
  g.set_element_names(std::move(names));
  g.set_abelian_view(a);
  return g;
}

FiniteGroup build_group(const std::string& descriptor, int order_cap) {
  std::string s = strip_spaces(descriptor);
  std::string up = s;
  std::transform(up.begin(), up.end(), up.begin(), ::toupper);

  if (up == "S3") return make_s3(order_cap);
  if (up == "D4") return make_d4(order_cap);
  if (up == "Q8") return make_q8(order_cap);
  if (up == "A4") return make_a4(order_cap);

  // Cyclic products: Z2, Z2xZ4, z3 X z3, ...
  std::vector<int> factors;
  size_t i = 0;
  while (i < up.size()) {
    if (up[i] != 'Z') throw ParseError("unknown group descriptor: " + descriptor);
    ++i;
    size_t j = i;
    while (j < up.size() && isdigit(static_cast<unsigned char>(up[j]))) ++j;
    if (j == i) throw ParseError("missing cyclic order in descriptor: " + descriptor);
    factors.push_back(std::stoi(up.substr(i, j - i)));
    i = j;
    if (i < up.size()) {
      if (up[i] != 'X') throw ParseError("expected 'x' separator in descriptor: " + descriptor);
      ++i;
    }
  }
  if (factors.empty()) throw ParseError("unknown group descriptor: " + descriptor);

  AbelianGroup a(factors);
  if (a.order() > order_cap)
    throw CapExceeded("group order " + std::to_string(a.order()) + " exceeds cap " +
                      std::to_string(order_cap));
  FiniteGroup g(s, cayley_from_abelian(a), order_cap);
  std::vector<std::string> names(a.order());
  for (int x = 0; x < a.order(); ++x) names[x] = a.element_name(x);
  g.set_element_names(std::move(names));
  g.set_abelian_view(std::move(a));
  return g;
}

// ---------------------------------------------------------------------------
// Irreducible representations

namespace {

// Characters via simultaneous eigenvectors of class-sum matrices: the class
// sum C_j acts on each irreducible by the scalar w_i(j) = |C_j| chi_i(C_j)/d_i,
// and w_i(j) w_i(c1) = sum_c2 a(j,c1,c2) w_i(c2) with a the structure
// constants of the center. Eigenvectors of a generic combination of the
// matrices B_j[c1][c2] = a(j,c1,c2) recover the central characters.
Eigen::MatrixXcd class_sum_characters(const FiniteGroup& g, double tol, std::mt19937_64& rng) {
  const int k = g.num_classes();
  const auto& classes = g.conjugacy_classes();

  // a(j,c1,c2) = #{x in C_j : x g in C_2, g fixed in C_1} * |C_1|/|C_2|.
  std::vector<Eigen::MatrixXd> b(k, Eigen::MatrixXd::Zero(k, k));
  for (int j = 0; j < k; ++j)
    for (int c1 = 0; c1 < k; ++c1) {
      int rep = classes[c1][0];
      Eigen::VectorXd count = Eigen::VectorXd::Zero(k);
      for (int x : classes[j]) count[g.class_of(g.mul(x, rep))] += 1.0;
      for (int c2 = 0; c2 < k; ++c2)
        b[j](c1, c2) = count[c2] * static_cast<double>(classes[c1].size()) /
                       static_cast<double>(classes[c2].size());
    }

  for (int attempt = 0; attempt < 12; ++attempt) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(k, k);
    for (int j = 0; j < k; ++j) mix += cplx(d(rng), d(rng)) * b[j].cast<cplx>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mix);
    if (es.info() != Eigen::Success) continue;
    // Distinct eigenvalues -> 1-dimensional eigenspaces -> central characters.
    bool degenerate = false;
    for (int a = 0; a < k && !degenerate; ++a)
      for (int c = a + 1; c < k; ++c)
        if (std::abs(es.eigenvalues()[a] - es.eigenvalues()[c]) < 1e-7) { degenerate = true; break; }
    if (degenerate) continue;

    Eigen::MatrixXcd chars(k, k);  // chars(i, j) = chi_i on class j
    bool ok = true;
    int e_class = g.class_of(g.identity());
    for (int i = 0; i < k && ok; ++i) {
      Eigen::VectorXcd u = es.eigenvectors().col(i);
      // Normalize so the identity-class coordinate is 1: u_j = w_i(j).
      if (std::abs(u[e_class]) < 1e-12) { ok = false; break; }
      u /= u[e_class];
      // chi(C_j) = d u_j / |C_j|; d from sum_j |C_j||chi(C_j)|^2 = #G.
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += std::norm(u[j]) / classes[j].size();
      double dim = std::sqrt(static_cast<double>(g.order()) / s);
      double dim_round = std::round(dim);
      if (std::abs(dim - dim_round) > 1e-6) { ok = false; break; }
      for (int j = 0; j < k; ++j)
        chars(i, j) = dim_round * u[j] / static_cast<double>(classes[j].size());
    }
    if (!ok) continue;

    // Row orthogonality sanity before accepting.
    for (int a = 0; a < k && ok; ++a)
      for (int b = 0; b < k && ok; ++b) {
        cplx ip = 0;
        for (int j = 0; j < k; ++j)
          ip += chars(a, j) * std::conj(chars(b, j)) *
                static_cast<double>(classes[j].size());
        ip /= static_cast<double>(g.order());
        if (std::abs(ip - (a == b ? 1.0 : 0.0)) > tol) ok = false;
      }
    if (ok) return chars;
  }
  throw DiagonalizationFailed("class-sum diagonalization failed for " + g.name());
}

}  // namespace

std::vector<Irrep> irreducibles(const FiniteGroup& g, double tol, unsigned seed) {
  const int n = g.order();
  const int k = g.num_classes();
  std::mt19937_64 rng(seed);

  Eigen::MatrixXcd chars = class_sum_characters(g, tol, rng);

  // Sort rows by (dimension, lexicographic character) for a stable output order.
  std::vector<int> rows(k);
  for (int i = 0; i < k; ++i) rows[i] = i;
  int e_class = g.class_of(g.identity());
  std::sort(rows.begin(), rows.end(), [&](int a, int b) {
    double da = chars(a, e_class).real(), db = chars(b, e_class).real();
    if (std::abs(da - db) > 0.5) return da < db;
    for (int j = 0; j < k; ++j) {
      cplx x = chars(a, j), y = chars(b, j);
      if (std::abs(x.real() - y.real()) > 1e-6) return x.real() < y.real();
      if (std::abs(x.imag() - y.imag()) > 1e-6) return x.imag() < y.imag();
    }
    return false;
  });

  // Regular representation as permutation matrices: R(h) e_x = e_{h x}.
  auto reg = [&](int h, const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd out(n, m.cols());
    for (int x = 0; x < n; ++x) out.row(g.mul(h, x)) = m.row(x);
    return out;
  };

  long long dim_sq_sum = 0;
  std::vector<Irrep> result;
  for (int ri = 0; ri < k; ++ri) {
    int i = rows[ri];
    Irrep rep;
    rep.char_on_classes = chars.row(i).transpose();
    int d = static_cast<int>(std::llround(chars(i, e_class).real()));
    rep.dim = d;
    dim_sq_sum += static_cast<long long>(d) * d;

    // Isotypic projector P = (d/#G) sum_h conj(chi(h)) R(h) on the regular rep.
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int h = 0; h < n; ++h) {
      cplx coef = std::conj(chars(i, g.class_of(h))) * (static_cast<double>(d) / n);
      for (int x = 0; x < n; ++x) p(g.mul(h, x), x) += coef;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> pes((p + p.adjoint()) / 2.0);
    // Isotypic block: eigenvalue ~1 eigenvectors, dimension d^2.
    std::vector<int> keep;
    for (int c = 0; c < n; ++c)
      if (pes.eigenvalues()[c] > 0.5) keep.push_back(c);
    if (static_cast<int>(keep.size()) != d * d)
      throw DiagonalizationFailed("isotypic block of unexpected dimension for " + g.name());
    Eigen::MatrixXcd w(n, d * d);
    for (size_t c = 0; c < keep.size(); ++c) w.col(c) = pes.eigenvectors().col(keep[c]);

    // Split one irreducible copy with a random equivariant Hermitian operator:
    // B = avg_h R(h) A R(h)^{-1} restricted to the block has d distinct
    // eigenvalues generically, each eigenspace a single copy.
    bool built = false;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int attempt = 0; attempt < 12 && !built; ++attempt) {
      Eigen::MatrixXcd a(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = cplx(unif(rng), unif(rng));
      a = (a + a.adjoint()).eval();
      Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
      for (int h = 0; h < n; ++h) b += reg(h, reg(h, a.adjoint()).adjoint());
      b /= static_cast<double>(n);
      Eigen::MatrixXcd bw = w.adjoint() * b * w;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> bes((bw + bw.adjoint()) / 2.0);
      // Group eigenvalues into clusters; want a cluster of size exactly d.
      std::vector<std::pair<double, int>> ev(d * d);
      for (int c = 0; c < d * d; ++c) ev[c] = {bes.eigenvalues()[c], c};
      std::sort(ev.begin(), ev.end());
      for (int start = 0; start < d * d && !built;) {
        int stop = start + 1;
        while (stop < d * d && ev[stop].first - ev[stop - 1].first < 1e-7) ++stop;
        if (stop - start == d) {
          Eigen::MatrixXcd basis(n, d);
          for (int c = 0; c < d; ++c)
            basis.col(c) = w * bes.eigenvectors().col(ev[start + c].second);
          // Orthonormalize (numerically already orthonormal) and build matrices.
          Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
          Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, d);
          rep.mats.resize(n);
          bool good = true;
          for (int h = 0; h < n && good; ++h) {
            rep.mats[h] = q.adjoint() * reg(h, q);
            // Unitarity within tolerance.
            double err = (rep.mats[h] * rep.mats[h].adjoint() -
                          Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
            if (err > 1e-7) good = false;
          }
          if (good) {
            // Character consistency.
            for (int j = 0; j < k && good; ++j) {
              cplx tr = rep.mats[g.conjugacy_classes()[j][0]].trace();
              if (std::abs(tr - chars(i, j)) > 1e-6) good = false;
            }
          }
          if (good) built = true;
        }
        start = stop;
      }
    }
    if (!built) throw DiagonalizationFailed("could not split an irreducible copy for " + g.name());
    result.push_back(std::move(rep));
  }

  if (dim_sq_sum != g.order())
    throw DiagonalizationFailed("sum of squared dimensions mismatch for " + g.name());
  return result;
}

}  // namespace latdual
