#include "latdual/turaev_viro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace latdual {

// ---------------------------------------------------------------------------
// FusionBackend

FusionBackend FusionBackend::make(BackendKind kind, const FiniteGroup& g) {
  FusionBackend b;
  b.kind_ = kind;
  b.group_ = &g;
  if (kind == BackendKind::vect) {
    b.dual_.resize(g.order());
    for (int x = 0; x < g.order(); ++x) b.dual_[x] = g.inv(x);
  } else {
    b.irreps_ = irreducibles(g);
    const int k = static_cast<int>(b.irreps_.size());
    b.dual_.assign(k, -1);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        bool match = true;
        for (int c = 0; c < g.num_classes() && match; ++c)
          if (std::abs(std::conj(b.irreps_[i].char_on_classes[c]) -
                       b.irreps_[j].char_on_classes[c]) > 1e-6)
            match = false;
        if (match) {
          b.dual_[i] = j;
          break;
        }
      }
      if (b.dual_[i] < 0) throw Error("no dual irreducible found");
    }
  }
  return b;
}

int FusionBackend::num_simples() const {
  return kind_ == BackendKind::vect ? group_->order() : static_cast<int>(irreps_.size());
}

int FusionBackend::dual_simple(int x) const { return dual_[x]; }

int FusionBackend::phi_dim(int x) const {
  return kind_ == BackendKind::vect ? 1 : irreps_[x].dim;
}

double FusionBackend::qdim(int x) const { return static_cast<double>(phi_dim(x)); }

double FusionBackend::categorical_dim() const {
  double d = 0;
  for (int x = 0; x < num_simples(); ++x) d += qdim(x) * qdim(x);
  return d;
}

double FusionBackend::verlinde_reduced(int genus) const {
  double s = 0;
  for (int x = 0; x < num_simples(); ++x) s += std::pow(qdim(x), 2 - 2 * genus);
  return s;
}

const FusionBackend::HomBasis& FusionBackend::hom_basis(const std::vector<Leg>& word) const {
  auto it = hom_cache_.find(word);
  if (it != hom_cache_.end()) return it->second;

  HomBasis hb;
  for (const auto& leg : word) hb.leg_dims.push_back(phi_dim(leg.simple));

  if (kind_ == BackendKind::vect) {
    // Nonzero iff the composite transport around the word is the identity;
    // transports compose right-to-left in word order, matching face holonomy.
    const FiniteGroup& g = *group_;
    int acc = g.identity();
    for (const auto& leg : word) {
      int t = leg.dualized ? g.inv(leg.simple) : leg.simple;
      acc = g.mul(t, acc);
    }
    if (acc == g.identity()) {
      Tensor one(hb.leg_dims);
      one.data[0] = 1.0;
      hb.vecs.push_back(std::move(one));
    }
  } else {
    const FiniteGroup& g = *group_;
    long long d = 1;
    for (int x : hb.leg_dims) d *= x;
    if (d > 4096) throw CapExceeded("hom space tensor dimension too large");
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(d, d);
    for (int h = 0; h < g.order(); ++h) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
      for (const auto& leg : word) {
        const Eigen::MatrixXcd& rho = irreps_[leg.simple].mats[h];
        Eigen::MatrixXcd factor = leg.dualized ? rho.conjugate() : rho;
        Eigen::MatrixXcd next(m.rows() * factor.rows(), m.cols() * factor.cols());
        for (int i = 0; i < m.rows(); ++i)
          for (int j = 0; j < m.cols(); ++j)
            next.block(i * factor.rows(), j * factor.cols(), factor.rows(), factor.cols()) =
                m(i, j) * factor;
        m = std::move(next);
      }
      proj += m;
    }
    proj /= static_cast<double>(g.order());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((proj + proj.adjoint()) / 2.0);
    for (long long c = 0; c < d; ++c) {
      if (es.eigenvalues()[c] < 0.5) continue;
      Tensor t(hb.leg_dims);
      for (long long i = 0; i < d; ++i) t.data[i] = es.eigenvectors()(i, c);
      hb.vecs.push_back(std::move(t));
    }
  }
  return hom_cache_.emplace(word, std::move(hb)).first->second;
}

// ---------------------------------------------------------------------------
// Actions

IsingAction action_from_weight(const FusionBackend& b, const WeightFunction& theta) {
  if (b.kind() != BackendKind::vect)
    throw ParseError("weight-function actions are the Vect[G] form; use the operator transform");
  if (static_cast<int>(theta.size()) != b.group().order())
    throw ParseError("theta length != group order");
  IsingAction a;
  for (int x = 0; x < b.num_simples(); ++x) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = theta[x];
    a.blocks.push_back(m);
  }
  return a;
}

IsingAction action_from_transform(const FusionBackend& b, const OperatorTransform& t) {
  if (b.kind() != BackendKind::rep)
    throw ParseError("operator transforms are the Rep(G) action form");
  if (t.blocks.size() != static_cast<size_t>(b.num_simples()))
    throw ParseError("transform block count != number of irreducibles");
  IsingAction a;
  a.blocks = t.blocks;
  return a;
}

IsingAction antipode(const IsingAction& a) {
  IsingAction out;
  for (const auto& m : a.blocks) out.blocks.push_back(m.transpose());
  return out;
}

void check_action_even(const FusionBackend& b, const IsingAction& a, double tol) {
  if (a.blocks.size() != static_cast<size_t>(b.num_simples()))
    throw ParseError("action block count mismatch");
  double scale = 0;
  for (const auto& m : a.blocks) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  const double eps = tol * std::max(1.0, scale);
  if (b.kind() == BackendKind::vect) {
    for (int x = 0; x < b.num_simples(); ++x)
      if (std::abs(a.blocks[x](0, 0) - a.blocks[b.dual_simple(x)](0, 0)) > eps)
        throw NotEven("action is not symmetric under the duality involution");
  } else {
    for (const auto& m : a.blocks)
      if ((m - m.adjoint()).cwiseAbs().maxCoeff() > eps)
        throw NotEven("action block is not self-adjoint");
  }
}

// ---------------------------------------------------------------------------
// State space

std::vector<FusionBackend::Leg> StateSpace::face_word(int f, const std::vector<int>& labels) const {
  std::vector<FusionBackend::Leg> word;
  for (const auto& [e, dir] : lat.faces[f]) word.push_back({labels[e], dir == -1});
  return word;
}

StateSpace state_space(const FusionBackend& b, const Lattice2& lat, long long dim_cap) {
  require_valid(lat);
  StateSpace ss;
  ss.backend = &b;
  ss.lat = lat;

  const int ne = lat.num_edges();
  const int ns = b.num_simples();
  long long total = 1;
  for (int e = 0; e < ne; ++e)
    if (__builtin_mul_overflow(total, static_cast<long long>(ns), &total))
      throw CapExceeded("labeling space too large");

  std::vector<int> labels(ne, 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int e = 0; e < ne; ++e) {
      labels[e] = static_cast<int>(rem % ns);
      rem /= ns;
    }
    long long dim = 1;
    std::vector<int> fdims(lat.num_faces());
    for (int f = 0; f < lat.num_faces() && dim > 0; ++f) {
      const auto& hb = b.hom_basis(ss.face_word(f, labels));
      fdims[f] = hb.dim();
      dim *= fdims[f];
    }
    if (dim == 0) continue;
    StateSpace::Block blk;
    blk.labels = labels;
    blk.face_dims = std::move(fdims);
    blk.offset = ss.dim;
    blk.dim = dim;
    ss.dim += dim;
    if (ss.dim > dim_cap) throw CapExceeded("state-space dimension cap exceeded");
    ss.block_of_labels[labels] = static_cast<int>(ss.blocks.size());
    ss.blocks.push_back(std::move(blk));
  }
  return ss;
}

// ---------------------------------------------------------------------------
// Vertex stars and the labeled mini-network helper

namespace {

struct VertexStar {
  std::vector<int> out_darts;  // outgoing darts at v in rotation order
  struct Corner {
    int face = 0;
    int in_slot = 0;   // slot traversing into v along spoke k
    int out_slot = 0;  // slot traversing out of v along spoke k+1
  };
  std::vector<Corner> corners;
};

VertexStar vertex_star(const Lattice2& lat, int v) {
  const int n_darts = 2 * lat.num_edges();
  std::vector<int> next_in_face(n_darts, -1), face_of(n_darts, -1), slot_of(n_darts, -1);
  for (int f = 0; f < lat.num_faces(); ++f) {
    const auto& walk = lat.faces[f];
    for (size_t s = 0; s < walk.size(); ++s) {
      int d = 2 * walk[s].first + (walk[s].second == -1 ? 1 : 0);
      auto [e2, dir2] = walk[(s + 1) % walk.size()];
      int d2 = 2 * e2 + (dir2 == -1 ? 1 : 0);
      next_in_face[d] = d2;
      face_of[d] = f;
      slot_of[d] = static_cast<int>(s);
    }
  }
  auto source_of = [&](int dart) {
    int e = dart / 2;
    return dart % 2 == 0 ? lat.edges[e].tail : lat.edges[e].head;
  };

  VertexStar star;
  int first = -1;
  for (int d = 0; d < n_darts && first < 0; ++d)
    if (source_of(d) == v) first = d;
  if (first < 0) throw Error("isolated vertex");
  int a = first;
  do {
    star.out_darts.push_back(a);
    a = next_in_face[a ^ 1];
  } while (a != first);
  int deg = 0;
  for (int d = 0; d < n_darts; ++d)
    if (source_of(d) == v) ++deg;
  if (deg != static_cast<int>(star.out_darts.size()))
    throw RequiresClosedSurface("vertex link is not a single circle");

  const int m = static_cast<int>(star.out_darts.size());
  for (int k = 0; k < m; ++k) {
    int ak = star.out_darts[k];
    int anext = star.out_darts[(k + 1) % m];
    VertexStar::Corner c;
    c.face = face_of[ak ^ 1];
    c.in_slot = slot_of[ak ^ 1];
    c.out_slot = slot_of[anext];
    if (face_of[anext] != c.face) throw Error("corner bookkeeping mismatch");
    star.corners.push_back(c);
  }
  return star;
}

// Stacked basis tensor: leg 0 is the basis index, then the word legs.
Tensor stacked_basis(const FusionBackend::HomBasis& hb) {
  std::vector<int> dims;
  dims.push_back(hb.dim());
  for (int d : hb.leg_dims) dims.push_back(d);
  Tensor t(dims);
  long long leg_sz = 1;
  for (int d : hb.leg_dims) leg_sz *= d;
  for (int b = 0; b < hb.dim(); ++b)
    for (long long i = 0; i < leg_sz; ++i) t.data[b * leg_sz + i] = hb.vecs[b].data[i];
  return t;
}

struct Labeled {
  Tensor t;
  std::vector<long long> labels;
};

Labeled contract_labeled(const Labeled& a, const Labeled& b) {
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < a.labels.size(); ++i)
    for (size_t j = 0; j < b.labels.size(); ++j)
      if (a.labels[i] == b.labels[j]) pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
  Labeled out;
  out.t = contract(a.t, b.t, pairs);
  std::vector<char> au(a.labels.size(), 0), bu(b.labels.size(), 0);
  for (auto [i, j] : pairs) {
    au[i] = 1;
    bu[j] = 1;
  }
  for (size_t i = 0; i < a.labels.size(); ++i)
    if (!au[i]) out.labels.push_back(a.labels[i]);
  for (size_t j = 0; j < b.labels.size(); ++j)
    if (!bu[j]) out.labels.push_back(b.labels[j]);
  return out;
}

Labeled resolve_self_contractions(Labeled x) {
  bool again = true;
  while (again) {
    again = false;
    for (size_t i = 0; i < x.labels.size() && !again; ++i)
      for (size_t j = i + 1; j < x.labels.size() && !again; ++j)
        if (x.labels[i] == x.labels[j]) {
          x.t = self_contract(x.t, static_cast<int>(i), static_cast<int>(j));
          x.labels.erase(x.labels.begin() + j);
          x.labels.erase(x.labels.begin() + i);
          again = true;
        }
  }
  return x;
}

// Leg label codes: alpha legs per face (old/new side), beta bonds per spoke,
// phi(z) bonds per corner, and word-slot legs per face slot (old/new side).
long long lab_alpha_old(int f) { return (1LL << 40) + f; }
long long lab_alpha_new(int f) { return (2LL << 40) + f; }
long long lab_beta(int k) { return (3LL << 40) + k; }
long long lab_zbond(int k) { return (4LL << 40) + k; }
long long lab_slot(int f, int s, int side) {
  return (5LL << 40) + ((static_cast<long long>(f) * 4096 + s) * 2 + side);
}

}  // namespace

// ---------------------------------------------------------------------------
// Vertex projector

Eigen::MatrixXcd vertex_projector(const StateSpace& ss, int v) {
  const FusionBackend& b = *ss.backend;
  const Lattice2& lat = ss.lat;
  if (ss.dim > 4096) throw CapExceeded("dense vertex projector limited to dimension 4096");

  VertexStar star = vertex_star(lat, v);
  const int m = static_cast<int>(star.out_darts.size());

  std::vector<int> spoke_edge(m);
  std::vector<bool> out_pos(m);
  for (int k = 0; k < m; ++k) {
    spoke_edge[k] = star.out_darts[k] / 2;
    out_pos[k] = star.out_darts[k] % 2 == 0;
  }
  std::vector<int> faces_at_v;
  for (const auto& c : star.corners)
    if (std::find(faces_at_v.begin(), faces_at_v.end(), c.face) == faces_at_v.end())
      faces_at_v.push_back(c.face);
  auto at_v = [&](int f) {
    return std::find(faces_at_v.begin(), faces_at_v.end(), f) != faces_at_v.end();
  };

  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(ss.dim, ss.dim);
  const double inv_d = 1.0 / b.categorical_dim();
  const int ns = b.num_simples();
  const int nf = lat.num_faces();

  for (const auto& blk : ss.blocks) {
    std::vector<long long> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * blk.face_dims[f + 1];

    std::vector<int> new_labels = blk.labels;
    std::vector<int> tilde(m, 0);
    long long tilde_total = 1;
    for (int k = 0; k < m; ++k) tilde_total *= ns;

    for (long long tidx = 0; tidx < tilde_total; ++tidx) {
      long long rem = tidx;
      for (int k = 0; k < m; ++k) {
        tilde[k] = static_cast<int>(rem % ns);
        rem /= ns;
      }
      for (int k = 0; k < m; ++k) new_labels[spoke_edge[k]] = tilde[k];
      auto it = ss.block_of_labels.find(new_labels);
      if (it == ss.block_of_labels.end()) continue;
      const auto& nblk = ss.blocks[it->second];
      std::vector<long long> nstride(nf, 1);
      for (int f = nf - 2; f >= 0; --f) nstride[f] = nstride[f + 1] * nblk.face_dims[f + 1];

      for (int z = 0; z < ns; ++z) {
        // Quantum-dimension amplitude of the summand: d(z) for the shared
        // middle label and sqrt(d(x) d(x~)) per spoke. With orthonormal hom
        // bases these weights realize the categorical coevaluations; they make
        // the operator self-adjoint and exactly idempotent, and reduce to the
        // plain gauge average for Vect[G].
        double weight = b.qdim(z);
        for (int k = 0; k < m; ++k)
          weight *= std::sqrt(b.qdim(tilde[k]) * b.qdim(blk.labels[spoke_edge[k]]));
        // Coevaluation stacks per spoke: A in <x, x~^vee, z>, B its dual basis
        // (conjugate, word reversed), with the basis leg kept first.
        std::vector<Tensor> a_stack(m), b_stack(m);
        bool zero = false;
        for (int k = 0; k < m; ++k) {
          int e = spoke_edge[k];
          std::vector<FusionBackend::Leg> aw = {{blk.labels[e], !out_pos[k]},
                                                {tilde[k], out_pos[k]},
                                                {z, false}};
          const auto& hb = b.hom_basis(aw);
          if (hb.dim() == 0) {
            zero = true;
            break;
          }
          a_stack[k] = stacked_basis(hb);
          b_stack[k] = a_stack[k].conjugate().permute({0, 3, 2, 1});
        }
        if (zero) continue;

        // Per-face maps with labeled legs.
        std::vector<Labeled> face_maps;
        bool dead = false;
        for (int f : faces_at_v) {
          const auto& walk = lat.faces[f];
          const int len = static_cast<int>(walk.size());
          const auto& old_hb = b.hom_basis(ss.face_word(f, blk.labels));
          const auto& new_hb = b.hom_basis(ss.face_word(f, new_labels));
          if (new_hb.dim() == 0) {
            dead = true;
            break;
          }

          // Which slots get replaced at this face.
          std::vector<char> replaced(len, 0);
          for (int k = 0; k < m; ++k) {
            const auto& c = star.corners[k];
            if (c.face != f) continue;
            replaced[c.in_slot] = 1;
            replaced[c.out_slot] = 1;
          }

          Labeled r;
          r.t = stacked_basis(old_hb);
          r.labels.assign(1 + len, 0);
          r.labels[0] = lab_alpha_old(f);
          for (int s = 0; s < len; ++s) r.labels[1 + s] = lab_slot(f, s, 0);

          for (int k = 0; k < m; ++k) {
            const auto& c = star.corners[k];
            if (c.face != f) continue;
            int kn = (k + 1) % m;
            Labeled a{a_stack[k],
                      {lab_beta(k), lab_slot(f, c.in_slot, 0), lab_slot(f, c.in_slot, 1),
                       lab_zbond(k)}};
            r = resolve_self_contractions(contract_labeled(r, a));
            Labeled bb{b_stack[kn],
                       {lab_beta(kn), lab_zbond(k), lab_slot(f, c.out_slot, 1),
                        lab_slot(f, c.out_slot, 0)}};
            r = resolve_self_contractions(contract_labeled(r, bb));
          }

          Labeled nb;
          nb.t = stacked_basis(new_hb).conjugate();
          nb.labels.assign(1 + len, 0);
          nb.labels[0] = lab_alpha_new(f);
          for (int s = 0; s < len; ++s) nb.labels[1 + s] = lab_slot(f, s, replaced[s] ? 1 : 0);
          r = resolve_self_contractions(contract_labeled(r, nb));
          face_maps.push_back(std::move(r));
        }
        if (dead) continue;

        Labeled net = face_maps[0];
        for (size_t i = 1; i < face_maps.size(); ++i)
          net = resolve_self_contractions(contract_labeled(net, face_maps[i]));
        net = resolve_self_contractions(std::move(net));

        // Remaining legs are alpha_old/alpha_new per face at v.
        struct LegInfo {
          bool is_new;
          int face;
        };
        std::vector<LegInfo> info(net.labels.size());
        for (size_t i = 0; i < net.labels.size(); ++i) {
          long long l = net.labels[i];
          if (l >= (2LL << 40) && l < (3LL << 40))
            info[i] = {true, static_cast<int>(l - (2LL << 40))};
          else if (l >= (1LL << 40) && l < (2LL << 40))
            info[i] = {false, static_cast<int>(l - (1LL << 40))};
          else
            throw Error("unexpected open leg in vertex projector network");
        }

        long long rest_total = 1;
        for (int f = 0; f < nf; ++f)
          if (!at_v(f)) rest_total *= blk.face_dims[f];

        std::vector<int> net_idx(net.labels.size(), 0);
        for (long long lin = 0; lin < net.t.size(); ++lin) {
          long long remn = lin;
          for (int d = static_cast<int>(net.labels.size()) - 1; d >= 0; --d) {
            net_idx[d] = static_cast<int>(remn % net.t.dims[d]);
            remn /= net.t.dims[d];
          }
          cplx coef = net.t.data[lin] * inv_d * weight;
          if (coef == cplx(0, 0)) continue;
          long long row0 = 0, col0 = 0;
          for (size_t d = 0; d < net_idx.size(); ++d) {
            if (info[d].is_new) row0 += nstride[info[d].face] * net_idx[d];
            else col0 += stride[info[d].face] * net_idx[d];
          }
          for (long long rr = 0; rr < rest_total; ++rr) {
            long long remr = rr, row = row0, col = col0;
            for (int f = 0; f < nf; ++f) {
              if (at_v(f)) continue;
              long long i = remr % blk.face_dims[f];
              remr /= blk.face_dims[f];
              row += nstride[f] * i;
              col += stride[f] * i;
            }
            p(nblk.offset + row, blk.offset + col) += coef;
          }
        }
      }
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Projector application

namespace {

// Gauge shift of a Vect[G] labeling at vertex v by t: outgoing labels are
// right-multiplied by t.
std::vector<int> vect_shift(const Lattice2& lat, const FiniteGroup& g,
                            const std::vector<int>& labels, int v, int t) {
  std::vector<int> out = labels;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (lat.edges[e].tail == v) out[e] = g.mul(out[e], t);
    else if (lat.edges[e].head == v) out[e] = g.mul(g.inv(t), out[e]);
  }
  return out;
}

// Dense-projector cache for the rep backend, keyed per state space instance.
struct DenseCache {
  const StateSpace* ss = nullptr;
  std::vector<Eigen::MatrixXcd> p;
};

Eigen::MatrixXcd& dense_projector(const StateSpace& ss, int v) {
  static thread_local DenseCache cache;
  if (cache.ss != &ss) {
    cache.ss = &ss;
    cache.p.assign(ss.lat.num_vertices, Eigen::MatrixXcd());
  }
  if (cache.p[v].size() == 0) cache.p[v] = vertex_projector(ss, v);
  return cache.p[v];
}

}  // namespace

Eigen::VectorXcd apply_vertex_projector(const StateSpace& ss, int v, const Eigen::VectorXcd& x) {
  const FusionBackend& b = *ss.backend;
  if (b.kind() == BackendKind::vect) {
    const FiniteGroup& g = b.group();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ss.dim);
    const double w = 1.0 / g.order();
    for (const auto& blk : ss.blocks) {
      for (int t = 0; t < g.order(); ++t) {
        auto shifted = vect_shift(ss.lat, g, blk.labels, v, t);
        auto it = ss.block_of_labels.find(shifted);
        if (it == ss.block_of_labels.end()) throw Error("gauge shift left the flat set");
        out[ss.blocks[it->second].offset] += w * x[blk.offset];
      }
    }
    return out;
  }
  return dense_projector(ss, v) * x;
}

Eigen::VectorXcd apply_full_projector(const StateSpace& ss, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out = x;
  for (int v = 0; v < ss.lat.num_vertices; ++v) out = apply_vertex_projector(ss, v, out);
  return out;
}

double full_projector_trace(const StateSpace& ss) {
  const FusionBackend& b = *ss.backend;
  if (b.kind() == BackendKind::vect) {
    // trace = sum over labelings of the probability of returning to itself
    // under the per-vertex averages; equals the orbit count for a product of
    // commuting gauge averages (computed exactly below via the permutations).
    const FiniteGroup& g = b.group();
    const int nv = ss.lat.num_vertices;
    // Precompute shift permutations per vertex and group element.
    std::vector<std::vector<std::vector<int>>> perm(
        nv, std::vector<std::vector<int>>(g.order(), std::vector<int>(ss.blocks.size())));
    for (int v = 0; v < nv; ++v)
      for (int t = 0; t < g.order(); ++t)
        for (size_t bi = 0; bi < ss.blocks.size(); ++bi) {
          auto shifted = vect_shift(ss.lat, g, ss.blocks[bi].labels, v, t);
          perm[v][t][bi] = ss.block_of_labels.at(shifted);
        }
    double tr = 0;
    Eigen::VectorXd cur(ss.blocks.size()), nxt(ss.blocks.size());
    for (size_t bi = 0; bi < ss.blocks.size(); ++bi) {
      cur.setZero();
      cur[bi] = 1.0;
      for (int v = 0; v < nv; ++v) {
        nxt.setZero();
        for (size_t src = 0; src < ss.blocks.size(); ++src) {
          if (cur[src] == 0.0) continue;
          double w = cur[src] / g.order();
          for (int t = 0; t < g.order(); ++t) nxt[perm[v][t][src]] += w;
        }
        cur.swap(nxt);
      }
      tr += cur[bi];
    }
    return tr;
  }
  // Dense path.
  Eigen::MatrixXcd prod = dense_projector(ss, 0);
  for (int v = 1; v < ss.lat.num_vertices; ++v) prod = dense_projector(ss, v) * prod;
  return prod.trace().real();
}

// ---------------------------------------------------------------------------
// Ising vectors

Eigen::VectorXcd ising_vector_raw(const StateSpace& ss, const IsingAction& action) {
  const FusionBackend& b = *ss.backend;
  const Lattice2& lat = ss.lat;
  check_action_even(b, action);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ss.dim);
  const int nf = lat.num_faces();

  for (const auto& blk : ss.blocks) {
    // Fold faces one by one; legs for an edge stay open until both sides have
    // appeared, then contract through the action block theta[a, b] with a on
    // the dir=+1 side and b on the dir=-1 side.
    Labeled r{Tensor::scalar(1.0), {}};
    std::vector<char> seen_edge(lat.num_edges(), 0);
    for (int f = 0; f < nf; ++f) {
      const auto& hb = b.hom_basis(ss.face_word(f, blk.labels));
      Labeled s{stacked_basis(hb).conjugate(), {}};
      s.labels.assign(1 + lat.faces[f].size(), 0);
      s.labels[0] = lab_alpha_old(f);
      for (size_t sl = 0; sl < lat.faces[f].size(); ++sl) {
        auto [e, dir] = lat.faces[f][sl];
        s.labels[1 + sl] = lab_slot(0, e, dir == 1 ? 0 : 1);
      }
      r = contract_labeled(r, s);
      // Contract completed edges through the action.
      for (size_t sl = 0; sl < lat.faces[f].size(); ++sl) {
        int e = lat.faces[f][sl].first;
        if (seen_edge[e]) continue;
        bool plus_open = false, minus_open = false;
        for (auto l : r.labels) {
          if (l == lab_slot(0, e, 0)) plus_open = true;
          if (l == lab_slot(0, e, 1)) minus_open = true;
        }
        if (plus_open && minus_open) {
          seen_edge[e] = 1;
          const auto& blkm = action.blocks[blk.labels[e]];
          Tensor th({static_cast<int>(blkm.rows()), static_cast<int>(blkm.cols())});
          for (int i = 0; i < blkm.rows(); ++i)
            for (int j = 0; j < blkm.cols(); ++j) th.data[i * blkm.cols() + j] = blkm(i, j);
          Labeled thl{th, {lab_slot(0, e, 0), lab_slot(0, e, 1)}};
          r = resolve_self_contractions(contract_labeled(r, thl));
        }
      }
    }
    for (auto l : r.labels)
      if (l < (1LL << 40) || l >= (2LL << 40))
        throw Error("raw Ising vector: unclosed edge leg");

    // Edge amplitude sqrt(d(x)) per edge: the copairing of phi(x) (x) phi(x)*
    // in orthonormal coordinates. All ones for Vect[G].
    double edge_weight = 1.0;
    for (int e = 0; e < lat.num_edges(); ++e)
      edge_weight *= std::sqrt(b.qdim(blk.labels[e]));
    for (auto& v : r.t.data) v *= edge_weight;

    // Map alpha legs into the block's face-major index.
    std::vector<long long> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * blk.face_dims[f + 1];
    std::vector<int> face_of_leg(r.labels.size());
    for (size_t i = 0; i < r.labels.size(); ++i)
      face_of_leg[i] = static_cast<int>(r.labels[i] - (1LL << 40));
    std::vector<int> idx(r.labels.size(), 0);
    for (long long lin = 0; lin < r.t.size(); ++lin) {
      long long rem = lin;
      for (int d = static_cast<int>(r.labels.size()) - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(rem % r.t.dims[d]);
        rem /= r.t.dims[d];
      }
      long long off = 0;
      for (size_t d = 0; d < idx.size(); ++d) off += stride[face_of_leg[d]] * idx[d];
      out[blk.offset + off] = r.t.data[lin];
    }
  }
  return out;
}

Eigen::VectorXcd ising_vector(const StateSpace& ss, const IsingAction& action) {
  return apply_full_projector(ss, ising_vector_raw(ss, action));
}

// ---------------------------------------------------------------------------
// Class values and orbit counts

ClassValues vect_class_values(const StateSpace& ss, const Eigen::VectorXcd& projected) {
  const FusionBackend& b = *ss.backend;
  if (b.kind() != BackendKind::vect) throw ParseError("class values are a Vect[G] notion");
  const FiniteGroup& g = b.group();
  const Lattice2& lat = ss.lat;

  ClassValues out;
  double scale = std::pow(static_cast<double>(g.order()), lat.num_vertices);
  std::vector<char> visited(ss.blocks.size(), 0);
  for (size_t b0 = 0; b0 < ss.blocks.size(); ++b0) {
    if (visited[b0]) continue;
    // BFS over single-vertex shifts.
    std::queue<int> q;
    q.push(static_cast<int>(b0));
    visited[b0] = 1;
    while (!q.empty()) {
      int cur = q.front();
      q.pop();
      for (int v = 0; v < lat.num_vertices; ++v)
        for (int t = 0; t < g.order(); ++t) {
          auto shifted = vect_shift(lat, g, ss.blocks[cur].labels, v, t);
          int nb = ss.block_of_labels.at(shifted);
          if (!visited[nb]) {
            visited[nb] = 1;
            q.push(nb);
          }
        }
    }
    out.class_reps.push_back(ss.blocks[b0].labels);
    out.values.push_back(projected[ss.blocks[b0].offset] * scale);
  }
  return out;
}

long long flat_orbit_count(const Lattice2& lat, const FiniteGroup& g, long long cap) {
  FusionBackend b = FusionBackend::make(BackendKind::vect, g);
  StateSpace ss = state_space(b, lat, cap);
  ClassValues cv = vect_class_values(ss, Eigen::VectorXcd::Zero(ss.dim));
  return static_cast<long long>(cv.class_reps.size());
}

// ---------------------------------------------------------------------------
// Duality harness

HarnessReport duality_harness(const FiniteGroup& g, const Lattice2& lat,
                              const std::vector<WeightFunction>& thetas,
                              [[maybe_unused]] const SpinCaps& caps, bool use_antipode) {
  require_valid(lat);
  HarnessReport rep;
  DualLattice dual = dual_lattice(lat);

  if (g.is_abelian()) {
    rep.abelian_route = true;
    const AbelianGroup& a = g.abelian();
    AbelianGroup ad = a.dual();
    FiniteGroup gd = as_finite_group(ad);

    FusionBackend b1 = FusionBackend::make(BackendKind::vect, g);
    FusionBackend b2 = FusionBackend::make(BackendKind::vect, gd);
    StateSpace ss1 = state_space(b1, lat);
    StateSpace ss2 = state_space(b2, dual.lat);
    CochainComplex c = coboundaries(lat, a);

    const int nv = lat.num_vertices, nfc = lat.num_faces();
    rep.factor = std::pow(static_cast<double>(a.order()), 0.5 * (nv - nfc));

    for (const auto& theta : thetas) {
      IsingAction act = action_from_weight(b1, theta);
      if (use_antipode) act = antipode(act);
      ClassValues v = vect_class_values(ss1, ising_vector(ss1, act));
      WeightFunction theta_dual = fourier_abelian_even(theta, a);
      IsingAction act2 = action_from_weight(b2, theta_dual);
      if (use_antipode) act2 = antipode(act2);
      ClassValues w = vect_class_values(ss2, ising_vector(ss2, act2));

      double h1 = static_cast<double>(v.values.size());
      double max_err = 0;
      for (size_t k = 0; k < w.values.size(); ++k) {
        cplx lhs = 0;
        for (size_t h = 0; h < v.values.size(); ++h)
          lhs += std::conj(poincare_pairing(c, v.class_reps[h], w.class_reps[k])) * v.values[h];
        lhs /= std::sqrt(h1);
        cplx rhs = rep.factor * w.values[k];
        max_err = std::max(max_err, std::abs(lhs - rhs));
      }
      rep.kw_errors.push_back(max_err);
    }
    return rep;
  }

  // Nonabelian route: compare the Vect[G] and Rep(G) partition pairings
  // against a fixed reference action; the ratio must not depend on theta.
  rep.abelian_route = false;
  FusionBackend bv = FusionBackend::make(BackendKind::vect, g);
  FusionBackend br = FusionBackend::make(BackendKind::rep, g);
  StateSpace sv = state_space(bv, lat, 1 << 16);
  StateSpace sr = state_space(br, dual.lat, 1 << 16);

  WeightFunction theta_ref(g.order(), 1.0);
  theta_ref[g.identity()] += 1.0;

  auto vect_projected = [&](const WeightFunction& th) {
    IsingAction a = action_from_weight(bv, th);
    if (use_antipode) a = antipode(a);
    return ising_vector(sv, a);
  };
  auto rep_projected = [&](const WeightFunction& th) {
    OperatorTransform t = fourier_nonabelian(th, g, br.irreps());
    IsingAction a = action_from_transform(br, t);
    if (use_antipode) a = antipode(a);
    return ising_vector(sr, a);
  };

  Eigen::VectorXcd uv_ref = vect_projected(theta_ref);
  Eigen::VectorXcd ur_ref = rep_projected(theta_ref);

  for (const auto& theta : thetas) {
    Eigen::VectorXcd uv = vect_projected(theta);
    Eigen::VectorXcd ur = rep_projected(theta);
    double sv_scalar = uv_ref.dot(uv).real();
    double sr_scalar = ur_ref.dot(ur).real();
    rep.vect_scalars.push_back(sv_scalar);
    rep.rep_scalars.push_back(sr_scalar);
    rep.ratios.push_back(sv_scalar / sr_scalar);
  }
  double mean = 0;
  for (double r : rep.ratios) mean += r;
  mean /= static_cast<double>(rep.ratios.size());
  rep.measured_constant = mean;
  for (double r : rep.ratios)
    rep.relative_spread = std::max(rep.relative_spread, std::abs(r - mean) / std::abs(mean));
  return rep;
}

}  // namespace latdual
