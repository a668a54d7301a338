#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latdual/groups.hpp"
#include "latdual/harmonic.hpp"
#include "latdual/homology.hpp"
#include "latdual/surface.hpp"

namespace latdual {

/// Background gauge field on a lattice: an edge labeling by group elements
/// (canonical edge orientation; the reversed edge carries the inverse) plus an
/// optional per-face constraint class for ramified (disorder) backgrounds.
struct FlatBackground {
  const FiniteGroup* group = nullptr;
  std::vector<int> hol;                       // per edge
  std::vector<int> face_class;                // -1 = trivial holonomy required,
                                              // otherwise a conjugacy class id
  static FlatBackground trivial(const FiniteGroup& g, const Lattice2& lat);
  bool check(const Lattice2& lat) const;      // holonomy constraints hold
  /// Ordered boundary product of edge labels around face f (walk order, using
  /// inverses against the walk direction), based at the walk start.
  int face_holonomy(const Lattice2& lat, int f) const;
};

/// Order and disorder insertions. Order data pairs a vertex with a character
/// of an abelian group (nonabelian order operators live in the fusion-category
/// backends). Disorder data pairs a face with a group element (abelian) or a
/// conjugacy class (nonabelian).
struct Insertions {
  std::vector<std::pair<int, int>> order;     // (vertex, dual element)
  std::vector<std::pair<int, int>> disorder;  // (face, element / class id)
};

struct SpinCaps {
  long long max_configurations = 1 << 24;
  int threads = 1;
};

/// Configuration sum  sum_s prod_i omega_i(s(v_i)) prod_e theta(g(s;e))  with
/// g(s;e) = s(head)^{-1} hol(e) s(tail). Evenness of theta makes the value
/// independent of the orientation convention. Brute force over #G^V.
double spin_partition(const Lattice2& lat, const FiniteGroup& g, const WeightFunction& theta,
                      const FlatBackground& background, const Insertions& ins,
                      const SpinCaps& caps = {});

/// The gauged partition vector: one value per background class in the torsor
/// (d1)^{-1}(delta_eta), enumerated as base + H^1 representative. Values
/// follow sum_s omega(s) Theta(z + d0 s); they are real whenever the order
/// data is closed under conjugation (in particular with no insertions), and
/// complex in general.
struct PartitionVector {
  std::vector<cplx> values;          // one per class
  std::vector<Cochain> class_reps;   // the background cochain used per class
  Cochain torsor_base;               // solves d1 z = eta
};
PartitionVector partition_vector(const Lattice2& lat, const AbelianGroup& a,
                                 const WeightFunction& theta, const Insertions& ins,
                                 const SpinCaps& caps = {});

/// Kramers-Wannier duality check: Fourier-transform the partition vector
/// through the Poincare pairing and compare with factor * dual vector, where
/// factor = #Z^1 / sqrt(#C^1 #H^1) = sqrt(#C^0 / #C^2). Order and disorder
/// data swap roles on the dual lattice.
struct KwReport {
  double factor = 1.0;
  double max_abs_err = 0.0;
  double scale = 0.0;                 // max |rhs| for relative context
  bool selection_rule_zero = false;   // order characters force both sides to 0
  struct Row {
    int klass;
    cplx lhs;
    cplx rhs;
    double abs_err;
  };
  std::vector<Row> rows;
  bool passed(double tol) const { return max_abs_err <= tol * std::max(1.0, scale); }
};
KwReport kw_dual_check(const Lattice2& lat, const AbelianGroup& a, const WeightFunction& theta,
                       const Insertions& ins, const SpinCaps& caps = {},
                       bool normalize_vertices = false);

/// Transfer matrix on Fun(G^n) for a latticed circle with n sites: horizontal
/// factors couple neighbouring sites at the incoming time slice (with the
/// twist inserted on the wrap-around edge), vertical factors couple the two
/// time slices sitewise. Outgoing-slice edges are excluded.
Eigen::MatrixXd transfer_matrix(const LatticedCircle& circle, const FiniteGroup& g,
                                const WeightFunction& theta, int twist,
                                long long state_cap = 1 << 16);

/// Convenience: top eigenvalue and the dimension of its eigenspace (within a
/// relative tolerance), plus the matrix rank at a threshold.
struct SpectrumSummary {
  double top = 0.0;
  int top_multiplicity = 0;
  int rank = 0;
};
SpectrumSummary transfer_spectrum(const Eigen::MatrixXd& t, double rel_tol = 1e-9);

}  // namespace latdual
