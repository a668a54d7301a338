#pragma once

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "latdual/groups.hpp"
#include "latdual/harmonic.hpp"
#include "latdual/ising.hpp"
#include "latdual/surface.hpp"
#include "latdual/tensor.hpp"

namespace latdual {

enum class BackendKind { vect, rep };

/// Fusion-category backend over a finite group: Vect[G] (simples = group
/// elements, skyscraper lines) or Rep(G) (simples = irreducibles). Hom-space
/// bases are orthonormal; a reversed edge carries the conjugate realization of
/// its simple, so no intertwiner bookkeeping is needed.
class FusionBackend {
 public:
  struct Leg {
    int simple = 0;
    bool dualized = false;
    bool operator<(const Leg& o) const {
      return simple != o.simple ? simple < o.simple : dualized < o.dualized;
    }
  };
  struct HomBasis {
    std::vector<int> leg_dims;
    std::vector<Tensor> vecs;  // orthonormal
    int dim() const { return static_cast<int>(vecs.size()); }
  };

  static FusionBackend make(BackendKind kind, const FiniteGroup& g);

  BackendKind kind() const { return kind_; }
  const FiniteGroup& group() const { return *group_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }

  int num_simples() const;
  int dual_simple(int x) const;
  int phi_dim(int x) const;       // fiber functor dimension
  double qdim(int x) const;       // quantum dimension
  double categorical_dim() const; // sum of squared dimensions
  double sphere_value() const { return 1.0 / categorical_dim(); }
  double verlinde_reduced(int genus) const;  // sum_i dim(x_i)^(2-2g)

  /// Orthonormal basis of Hom(1, leg_1 (x) ... (x) leg_n); cached per word.
  const HomBasis& hom_basis(const std::vector<Leg>& word) const;

 private:
  BackendKind kind_ = BackendKind::vect;
  const FiniteGroup* group_ = nullptr;
  std::vector<Irrep> irreps_;
  std::vector<int> dual_;
  mutable std::map<std::vector<Leg>, HomBasis> hom_cache_;
};

/// Ising action: one phi(x) (x) phi(x)* block per simple. Must satisfy the
/// evenness constraint induced by duality.
struct IsingAction {
  std::vector<Eigen::MatrixXcd> blocks;
};
IsingAction action_from_weight(const FusionBackend& b, const WeightFunction& theta);
IsingAction action_from_transform(const FusionBackend& b, const OperatorTransform& t);
/// The antipodal image of an action (transposes every block).
IsingAction antipode(const IsingAction& a);
void check_action_even(const FusionBackend& b, const IsingAction& a, double tol = 1e-9);

/// State space on a closed oriented lattice: basis indexed by (labeling of
/// edges by simples, one hom-basis vector per face). Labelings with a
/// zero-dimensional face space are dropped.
struct StateSpace {
  struct Block {
    std::vector<int> labels;  // per edge, simple index on the stored orientation
    std::vector<int> face_dims;
    long long offset = 0;
    long long dim = 0;
  };
  const FusionBackend* backend = nullptr;  // must outlive the state space
  Lattice2 lat;                            // owned copy
  std::vector<Block> blocks;
  std::map<std::vector<int>, int> block_of_labels;
  long long dim = 0;

  /// Face word (legs in walk order) for a labeling of this lattice.
  std::vector<FusionBackend::Leg> face_word(int f, const std::vector<int>& labels) const;
};
StateSpace state_space(const FusionBackend& b, const Lattice2& lat, long long dim_cap = 1 << 16);

/// Vertex projector as a dense matrix (state-sum composition with the
/// coevaluation insertion, shared middle label, and 1/d(T) scaling).
Eigen::MatrixXcd vertex_projector(const StateSpace& ss, int v);

/// Apply the vertex projector to a vector; uses the gauge-shift averaging
/// shortcut for Vect[G] and the dense matrix otherwise.
Eigen::VectorXcd apply_vertex_projector(const StateSpace& ss, int v, const Eigen::VectorXcd& x);

/// Apply the full product of vertex projectors.
Eigen::VectorXcd apply_full_projector(const StateSpace& ss, const Eigen::VectorXcd& x);

/// Trace of the product of all vertex projectors (equals its rank when the
/// product is an orthogonal projector).
double full_projector_trace(const StateSpace& ss);

/// The unprojected Ising tensor-network vector: per basis element, the face
/// tensors conjugated and contracted edgewise against the action blocks.
Eigen::VectorXcd ising_vector_raw(const StateSpace& ss, const IsingAction& action);

/// Projected Ising vector (image of the full projector).
Eigen::VectorXcd ising_vector(const StateSpace& ss, const IsingAction& action);

/// For Vect[G]: per-gauge-class values of a projected vector, scaled by #G^V;
/// entry i corresponds to class_reps[i].
struct ClassValues {
  std::vector<std::vector<int>> class_reps;  // flat labelings, one per class
  std::vector<cplx> values;
};
ClassValues vect_class_values(const StateSpace& ss, const Eigen::VectorXcd& projected);

/// Gauge-orbit count of flat labelings (BFS over single-vertex shifts).
long long flat_orbit_count(const Lattice2& lat, const FiniteGroup& g, long long cap = 1 << 24);

/// Duality harness. Abelian groups: the Vect[A] vectors on the lattice and its
/// dual are compared through the Poincare-pairing Fourier transform with the
/// lattice counting factor. Nonabelian: the Vect[G] and Rep(G) (dual lattice,
/// transformed action) partition pairings against a fixed reference action
/// must have a theta-independent ratio.
struct HarnessReport {
  bool abelian_route = false;
  // Abelian route: per-sample max componentwise error and the factor used.
  std::vector<double> kw_errors;
  double factor = 1.0;
  // Nonabelian route: per-sample scalars and their ratios.
  std::vector<double> vect_scalars, rep_scalars, ratios;
  double measured_constant = 0.0;
  double relative_spread = 0.0;
};
HarnessReport duality_harness(const FiniteGroup& g, const Lattice2& lat,
                              const std::vector<WeightFunction>& thetas,
                              const SpinCaps& caps = {}, bool use_antipode = false);

}  // namespace latdual
