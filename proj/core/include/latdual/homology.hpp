#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "latdual/groups.hpp"
#include "latdual/snf.hpp"
#include "latdual/surface.hpp"

namespace latdual {

/// A-valued cochain, stored as one element index of A per cell.
using Cochain = std::vector<int>;

/// Integer incidence matrices of a closed lattice, with coefficient group A.
/// D0 is edges x vertices (D0[e,v] = [v=head] - [v=tail]); D1 is faces x edges
/// (signed count of appearances of e in the boundary walk of f). D1*D0 = 0.
struct CochainComplex {
  const Lattice2* lat = nullptr;
  AbelianGroup coeff;
  MatZ d0, d1;

  int num_vertices() const { return static_cast<int>(d0.cols()); }
  int num_edges() const { return static_cast<int>(d0.rows()); }
  int num_faces() const { return static_cast<int>(d1.rows()); }

  Cochain apply_d0(const Cochain& s) const;  // vertices -> edges
  Cochain apply_d1(const Cochain& c) const;  // edges -> faces
};

CochainComplex coboundaries(const Lattice2& lat, const AbelianGroup& a);

/// Cohomology orders in degrees 0..2 plus explicit H^1 class representatives
/// (one cocycle per class) when #H^1 does not exceed the enumeration cap.
struct CohomologyData {
  std::array<long long, 3> order = {0, 0, 0};
  bool reps_available = false;
  std::vector<Cochain> h1_reps;  // first entry is the zero class
};

CohomologyData cohomology(const CochainComplex& c, long long enumeration_cap = 4096);

/// One solution z of d1 z = eta together with the torsor description z + Z^1.
/// The base point is deterministic: per cyclic factor, normal-coordinate
/// components take the smallest nonnegative solution and free coordinates are
/// zero. Throws NotABoundary (with the obstruction residues) if eta is not a
/// coboundary.
struct DisorderTorsor {
  Cochain base;            // z with d1 z = eta
  long long torsor_size;   // #Z^1
};
DisorderTorsor solve_disorder_torsor(const CochainComplex& c, const Cochain& eta);

/// Pontrjagin-Poincare pairing of an A-cochain on the lattice with an
/// A^vee-cochain on the dual lattice, using the index-preserving edge
/// correspondence of dual_lattice: product over edges of chi(u(e), w(e^vee)).
/// `conjugate` flips the overall sign convention of the crossing pairing.
cplx poincare_pairing(const CochainComplex& c, const Cochain& u, const Cochain& w,
                      bool conjugate = false);

/// Subquotient bookkeeping for the duality machinery: the chain
/// M' -i-> M -pi->> M'' with K = ker pi and H = K / im i, together with the
/// dual-side counts. For a closed oriented lattice, #H = #H~.
struct SubquotientDiagram {
  long long num_m = 0, num_m1 = 0, num_m2 = 0;  // #M, #M', #M''
  long long num_k = 0, num_h = 0;               // #K = #Z^1, #H = #H^1
  long long num_k_dual = 0, num_h_dual = 0;     // on the dual lattice
  double log_num_m = 0.0;                       // log #M, safe for large counts
};
SubquotientDiagram build_subquotient(const CochainComplex& c, const CochainComplex& c_dual);

/// Count #ker and #im of an integer matrix acting on (Z/n)^cols -> (Z/n)^rows.
struct ModKerIm {
  double log_ker = 0.0, log_im = 0.0;
  long long ker = 0, im = 0;  // exact when they fit in long long, else 0
};
ModKerIm mod_n_ker_im(const MatZ& a, long long n);

// ---------------------------------------------------------------------------
// Simplicial complexes

/// Abstract simplicial complex given by its top-dimensional simplices as
/// vertex tuples; lower faces are generated internally. Input must be a
/// genuine simplicial complex: cells are identified by their vertex sets.
struct SimplicialComplex {
  int dim = 0;
  std::vector<std::vector<int>> simplices;
};

/// Exact cohomology orders #H^i(X; A) for i = 0..dim via Smith normal form of
/// the integer boundary matrices, factor by cyclic factor.
std::vector<long long> simplicial_cohomology(const SimplicialComplex& x, const AbelianGroup& a,
                                             long long cell_cap = 200000);

/// Named example complexes.
SimplicialComplex boundary_of_simplex(int n);       // boundary of the n-simplex
SimplicialComplex torus3_complex(int subdivisions = 3);  // T^3, Kuhn-triangulated
SimplicialComplex rp2_complex();                    // 6-vertex projective plane

std::string simplicial_to_json(const SimplicialComplex& x);
SimplicialComplex simplicial_from_json(const std::string& text);

}  // namespace latdual
