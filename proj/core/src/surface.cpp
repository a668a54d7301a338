#include "latdual/surface.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include <json.hpp>

namespace latdual {

ValidationReport validate(const Lattice2& lat) {
  ValidationReport r;
  auto fail = [&](const std::string& msg) {
    r.valid = false;
    r.failures.push_back(msg);
  };

  for (int e = 0; e < lat.num_edges(); ++e) {
    const auto& E = lat.edges[e];
    if (E.tail < 0 || E.tail >= lat.num_vertices || E.head < 0 || E.head >= lat.num_vertices)
      fail("edge " + std::to_string(e) + ": endpoint out of range");
    else if (E.tail == E.head)
      fail("edge " + std::to_string(e) + ": loop edge");
  }

  // incidence[e][dir] counts face slots using edge e with direction dir.
  std::vector<int> pos(lat.num_edges(), 0), neg(lat.num_edges(), 0);
  for (int f = 0; f < lat.num_faces(); ++f) {
    const auto& walk = lat.faces[f];
    if (walk.size() < 2) {
      fail("face " + std::to_string(f) + ": face length < 2");
      continue;
    }
    for (size_t s = 0; s < walk.size(); ++s) {
      auto [e, d] = walk[s];
      if (e < 0 || e >= lat.num_edges() || (d != 1 && d != -1)) {
        fail("face " + std::to_string(f) + ": bad slot");
        continue;
      }
      (d == 1 ? pos[e] : neg[e])++;
      // Consecutive slots must chain: head of slot s = tail of slot s+1.
      auto [e2, d2] = walk[(s + 1) % walk.size()];
      if (e2 < 0 || e2 >= lat.num_edges()) continue;
      int end_v = d == 1 ? lat.edges[e].head : lat.edges[e].tail;
      int start_v = d2 == 1 ? lat.edges[e2].tail : lat.edges[e2].head;
      if (end_v != start_v)
        fail("face " + std::to_string(f) + ": boundary walk broken at slot " +
             std::to_string(s));
    }
  }
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (pos[e] + neg[e] != 2)
      fail("edge " + std::to_string(e) + ": used in " + std::to_string(pos[e] + neg[e]) +
           " face slots, expected 2");
    else if (pos[e] != 1)
      fail("edge " + std::to_string(e) + ": orientability failure (same direction twice)");
  }
  return r;
}

void require_valid(const Lattice2& lat) {
  auto r = validate(lat);
  if (!r.valid) {
    std::string msg = "invalid lattice:";
    for (const auto& f : r.failures) msg += " [" + f + "]";
    throw RequiresClosedSurface(msg);
  }
}

// ---------------------------------------------------------------------------
// Generators

Lattice2 torus_lattice(int m, int n) {
  if (m < 2 || n < 2) throw InvalidLattice("torus(m,n) needs m,n >= 2 to avoid loops");
  Lattice2 lat;
  lat.num_vertices = m * n;
  auto v = [&](int i, int j) { return ((i % m + m) % m) * n + ((j % n + n) % n); };
  // Horizontal edges h(i,j): (i,j) -> (i,j+1), index i*n + j.
  // Vertical edges   w(i,j): (i,j) -> (i+1,j), index m*n + i*n + j.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) lat.edges.push_back({v(i, j), v(i, j + 1)});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) lat.edges.push_back({v(i, j), v(i + 1, j)});
  auto h = [&](int i, int j) { return ((i % m + m) % m) * n + ((j % n + n) % n); };
  auto w = [&](int i, int j) { return m * n + ((i % m + m) % m) * n + ((j % n + n) % n); };
  // Face (i,j): h(i,j), w(i,j+1), -h(i+1,j), -w(i,j).
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      lat.faces.push_back({{h(i, j), 1}, {w(i, j + 1), 1}, {h(i + 1, j), -1}, {w(i, j), -1}});
  require_valid(lat);
  return lat;
}

Lattice2 sphere_cube() {
  Lattice2 lat;
  lat.num_vertices = 8;  // bits: x + 2y + 4z
  auto add_edge = [&](int a, int b) {
    lat.edges.push_back({a, b});
    return static_cast<int>(lat.edges.size()) - 1;
  };
  std::map<std::pair<int, int>, int> eidx;
  auto edge = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = eidx.find(key);
    if (it == eidx.end()) it = eidx.emplace(key, add_edge(key.first, key.second)).first;
    return it->second;
  };
  auto slot = [&](int a, int b) {
    int e = edge(a, b);
    return Lattice2::FaceSlot{e, lat.edges[e].tail == a ? 1 : -1};
  };
  // Six faces with outward-consistent traversal.
  const int quads[6][4] = {
      {0, 1, 3, 2},  // z = 0
      {4, 6, 7, 5},  // z = 1
      {0, 4, 5, 1},  // y = 0
      {2, 3, 7, 6},  // y = 1
      {0, 2, 6, 4},  // x = 0
      {1, 5, 7, 3},  // x = 1
  };
  for (const auto& q : quads)
    lat.faces.push_back({slot(q[0], q[1]), slot(q[1], q[2]), slot(q[2], q[3]), slot(q[3], q[0])});
  require_valid(lat);
  return lat;
}

Lattice2 sphere_tetra() {
  Lattice2 lat;
  lat.num_vertices = 4;
  std::map<std::pair<int, int>, int> eidx;
  auto slot = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = eidx.find(key);
    if (it == eidx.end()) {
      lat.edges.push_back({key.first, key.second});
      it = eidx.emplace(key, static_cast<int>(lat.edges.size()) - 1).first;
    }
    return Lattice2::FaceSlot{it->second, lat.edges[it->second].tail == a ? 1 : -1};
  };
  const int tris[4][3] = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}};
  for (const auto& t : tris)
    lat.faces.push_back({slot(t[0], t[1]), slot(t[1], t[2]), slot(t[2], t[0])});
  require_valid(lat);
  return lat;
}

Lattice2 genus_lattice(int g) {
  if (g < 0) throw InvalidLattice("genus(g) needs g >= 0");
  if (g == 0) return sphere_cube();
  // 4g-gon with identification a1 b1 a1^- b1^- ..., every polygon side
  // subdivided into three segments (so no identified edge becomes a loop),
  // and the polygon coned from an interior apex (so the combinatorial dual is
  // also loop-free: consecutive boundary slots lie in distinct triangles).
  Lattice2 lat;
  // Vertices: corner vertex 0 (all polygon corners identified), two interior
  // vertices per identified side (1+2s, 2+2s for side s), and the apex.
  const int apex = 1 + 4 * g;
  lat.num_vertices = 2 + 4 * g;
  std::vector<std::array<int, 3>> triple(2 * g);
  for (int s = 0; s < 2 * g; ++s) {
    int i1 = 1 + 2 * s, i2 = 2 + 2 * s;
    lat.edges.push_back({0, i1});
    lat.edges.push_back({i1, i2});
    lat.edges.push_back({i2, 0});
    triple[s] = {3 * s, 3 * s + 1, 3 * s + 2};
  }
  // Boundary word of the identified polygon: a b a^- b^- per handle.
  std::vector<std::pair<int, int>> word;
  for (int k = 0; k < g; ++k) {
    word.push_back({2 * k, 1});
    word.push_back({2 * k + 1, 1});
    word.push_back({2 * k, -1});
    word.push_back({2 * k + 1, -1});
  }
  std::vector<Lattice2::FaceSlot> boundary;
  for (auto [s, dir] : word) {
    if (dir == 1) {
      boundary.push_back({triple[s][0], 1});
      boundary.push_back({triple[s][1], 1});
      boundary.push_back({triple[s][2], 1});
    } else {
      boundary.push_back({triple[s][2], -1});
      boundary.push_back({triple[s][1], -1});
      boundary.push_back({triple[s][0], -1});
    }
  }
  // Radial edges apex -> boundary vertex, one per boundary-walk corner.
  // Triangle t: radial(t), boundary slot t, -radial(t+1).
  const int n = static_cast<int>(boundary.size());
  std::vector<int> radial(n);
  for (int t = 0; t < n; ++t) {
    auto [e, dir] = boundary[t];
    int start = dir == 1 ? lat.edges[e].tail : lat.edges[e].head;
    lat.edges.push_back({apex, start});
    radial[t] = static_cast<int>(lat.edges.size()) - 1;
  }
  for (int t = 0; t < n; ++t)
    lat.faces.push_back({ {radial[t], 1}, boundary[t], {radial[(t + 1) % n], -1} });
  require_valid(lat);
  return lat;
}

Lattice2 generate_lattice(const std::string& kind, int m, int n, int g) {
  if (kind == "torus") return torus_lattice(m, n);
  if (kind == "sphere_cube") return sphere_cube();
  if (kind == "sphere_tetra") return sphere_tetra();
  if (kind == "genus") return genus_lattice(g);
  throw ParseError("unknown lattice kind: " + kind);
}

// ---------------------------------------------------------------------------
// Dual lattice

namespace {

// Darts: 2e = (e, +1) traverses tail->head, 2e+1 = (e, -1).
inline int dart(int e, int dir) { return 2 * e + (dir == 1 ? 0 : 1); }
inline int dart_edge(int d) { return d / 2; }
inline int dart_dir(int d) { return d % 2 == 0 ? 1 : -1; }
inline int dart_flip(int d) { return d ^ 1; }

}  // namespace

DualLattice dual_lattice(const Lattice2& lat) {
  require_valid(lat);

  const int n_darts = 2 * lat.num_edges();
  std::vector<int> next_in_face(n_darts, -1);  // successor dart within its face walk
  std::vector<int> face_of_dart(n_darts, -1);
  for (int f = 0; f < lat.num_faces(); ++f) {
    const auto& walk = lat.faces[f];
    for (size_t s = 0; s < walk.size(); ++s) {
      int d = dart(walk[s].first, walk[s].second);
      int d2 = dart(walk[(s + 1) % walk.size()].first, walk[(s + 1) % walk.size()].second);
      next_in_face[d] = d2;
      face_of_dart[d] = f;
    }
  }

  DualLattice out;
  out.lat.num_vertices = lat.num_faces();
  out.lat.oriented = lat.oriented;
  // Dual edge e: tail = face containing dart (e,-), head = face containing
  // dart (e,+). This realizes D0(dual) = D1(primal)^T.
  for (int e = 0; e < lat.num_edges(); ++e)
    out.lat.edges.push_back({face_of_dart[dart(e, -1)], face_of_dart[dart(e, 1)]});

  // Dual faces: one per primal vertex v, walking the outgoing darts of v in
  // rotation order a -> next_in_face(flip(a)). The slot for outgoing dart a of
  // edge e has direction +1 iff a = (e,-), which realizes D1(dual) = D0^T.
  std::vector<char> used(n_darts, 0);
  std::vector<std::vector<Lattice2::FaceSlot>> dual_faces(lat.num_vertices);
  for (int e0 = 0; e0 < lat.num_edges(); ++e0)
    for (int dir0 : {1, -1}) {
      int a0 = dart(e0, dir0);
      if (used[a0]) continue;
      int v = dir0 == 1 ? lat.edges[e0].tail : lat.edges[e0].head;  // source of a0
      std::vector<Lattice2::FaceSlot> walk;
      int a = a0;
      do {
        used[a] = 1;
        walk.push_back({dart_edge(a), dart_dir(a) == -1 ? 1 : -1});
        a = next_in_face[dart_flip(a)];
      } while (a != a0);
      if (!dual_faces[v].empty())
        throw RequiresClosedSurface("vertex link is not a single cycle (not a surface)");
      dual_faces[v] = std::move(walk);
    }
  out.lat.faces = std::move(dual_faces);
  require_valid(out.lat);
  return out;
}

Lattice2 reverse_all_edges(const Lattice2& lat) {
  Lattice2 out = lat;
  for (auto& e : out.edges) std::swap(e.tail, e.head);
  for (auto& f : out.faces)
    for (auto& s : f) s.second = -s.second;
  return out;
}

// ---------------------------------------------------------------------------
// JSON

std::string lattice_to_json(const Lattice2& lat) {
  nlohmann::ordered_json j;
  j["vertices"] = lat.num_vertices;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : lat.edges) edges.push_back({e.tail, e.head});
  j["edges"] = edges;
  auto faces = nlohmann::ordered_json::array();
  for (const auto& f : lat.faces) {
    auto walk = nlohmann::ordered_json::array();
    for (const auto& s : f) walk.push_back({s.first, s.second});
    faces.push_back(walk);
  }
  j["faces"] = faces;
  j["oriented"] = lat.oriented;
  return j.dump(2);
}

Lattice2 lattice_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("lattice JSON parse error: ") + e.what());
  }
  Lattice2 lat;
  try {
    lat.num_vertices = j.at("vertices").get<int>();
    for (const auto& e : j.at("edges")) lat.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    for (const auto& f : j.at("faces")) {
      std::vector<Lattice2::FaceSlot> walk;
      for (const auto& s : f) walk.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
      lat.faces.push_back(std::move(walk));
    }
    lat.oriented = j.value("oriented", true);
  } catch (const std::exception& e) {
    throw ParseError(std::string("lattice JSON missing field: ") + e.what());
  }
  return lat;
}

}  // namespace latdual
