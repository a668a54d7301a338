#pragma once

#include <string>
#include <utility>
#include <vector>

#include "latdual/errors.hpp"

namespace latdual {

/// Combinatorial latticed closed oriented surface. Faces are cyclic walks of
/// (edge, direction) slots; dir = +1 traverses tail -> head. Loops are
/// forbidden, parallel edges allowed, faces have length >= 2, and for a closed
/// oriented surface every edge appears in exactly two face slots with opposite
/// directions.
struct Lattice2 {
  struct Edge {
    int tail = 0;
    int head = 0;
  };
  using FaceSlot = std::pair<int, int>;  // (edge index, direction +-1)

  int num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<FaceSlot>> faces;
  bool oriented = true;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int euler_characteristic() const { return num_vertices - num_edges() + num_faces(); }
};

/// Latticed circle: a polygon with n >= 2 vertices and edges in cyclic order.
struct LatticedCircle {
  int n = 2;
};

/// Validation report for the Lattice2 invariants; report-valued, never throws.
struct ValidationReport {
  bool valid = true;
  std::vector<std::string> failures;
};
ValidationReport validate(const Lattice2& lat);

/// Throwing variant used by operations that require a valid closed surface.
void require_valid(const Lattice2& lat);

/// Generators. torus(m, n) is the m x n square-lattice torus (m, n >= 2);
/// sphere_cube / sphere_tetra are the cube and tetrahedron surfaces; genus(g)
/// is a subdivided 4g-gon identification with no loop edges (g >= 1; genus(0)
/// is sphere_cube). Deterministic indexing throughout.
Lattice2 torus_lattice(int m, int n);
Lattice2 sphere_cube();
Lattice2 sphere_tetra();
Lattice2 genus_lattice(int g);
Lattice2 generate_lattice(const std::string& kind, int m = 0, int n = 0, int g = 0);

/// Dual lattice with index-preserving correspondences: vertex f of the dual is
/// face f of the primal, edge e of the dual crosses edge e of the primal, and
/// face v of the dual is vertex v of the primal. The construction makes the
/// dual incidence matrices the transposes of the primal ones: D0(dual) = D1^T
/// and D1(dual) = D0^T.
struct DualLattice {
  Lattice2 lat;
};
DualLattice dual_lattice(const Lattice2& lat);

/// Reverse the orientation of every edge (tail <-> head, face directions
/// negated). Partition values of even actions are invariant under this.
Lattice2 reverse_all_edges(const Lattice2& lat);

/// JSON lattice format:
/// {"vertices": n, "edges": [[tail,head],...],
///  "faces": [[[edge,dir],...],...], "oriented": true}
std::string lattice_to_json(const Lattice2& lat);
Lattice2 lattice_from_json(const std::string& text);

}  // namespace latdual
