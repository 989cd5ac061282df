#include "anoflip/seifert_piece.hpp"

#include <queue>
#include <string>

namespace anoflip {

bool operator==(const BoundaryTorus& a, const BoundaryTorus& b) {
  return a.cells == b.cells && a.role == b.role;
}

bool operator==(const SeifertPiece& a, const SeifertPiece& b) {
  return a.graph == b.graph && a.lambda == b.lambda && a.block_sign == b.block_sign &&
         a.orbit_dir == b.orbit_dir && a.tori == b.tori &&
         a.vertex_z_shift == b.vertex_z_shift && a.vertex_color == b.vertex_color &&
         a.edge_fiber_or == b.edge_fiber_or;
}

namespace {

// zeta: +-1 per edge, alternating between rotation-consecutive edges at every
// vertex. Exists iff that adjacency relation is bipartite; unique up to a
// global sign which we pin at edge 0.
std::vector<int> fiber_orientations(const FatGraph& g) {
  std::vector<int> zeta(g.edge_count(), 0);
  for (int e0 = 0; e0 < g.edge_count(); ++e0) {
    if (zeta[e0] != 0) continue;
    zeta[e0] = 1;
    std::queue<int> q;
    q.push(e0);
    while (!q.empty()) {
      int e = q.front();
      q.pop();
      for (int d : g.edges[e]) {
        for (int nd : {g.next_at_vertex(d), g.prev_at_vertex(d)}) {
          int ne = g.edge_of(nd);
          if (zeta[ne] == 0) {
            zeta[ne] = -zeta[e];
            q.push(ne);
          } else if (zeta[ne] != -zeta[e]) {
            throw InconsistentOrientation(
                "fiber flip parity fails around vertex " +
                std::to_string(g.vertex_of(d)));
          }
        }
      }
    }
  }
  return zeta;
}

// c: +-1 per vertex with adjacent vertices opposite (assigns each block end
// of every edge to a vertex consistently with the alternating gluing).
std::vector<int> vertex_colors(const FatGraph& g) {
  std::vector<int> c(g.vertex_count(), 0);
  for (int v0 = 0; v0 < g.vertex_count(); ++v0) {
    if (c[v0] != 0) continue;
    c[v0] = 1;
    std::queue<int> q;
    q.push(v0);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int d : g.vertex_darts[v]) {
        int w = g.vertex_of(g.partner(d));
        if (c[w] == 0) {
          c[w] = -c[v];
          q.push(w);
        } else if (c[w] != -c[v]) {
          throw InconsistentOrientation(
              "block end assignment fails: vertices " + std::to_string(v) + " and " +
              std::to_string(w) + " cannot take opposite ends");
        }
      }
    }
  }
  return c;
}

}  // namespace

SeifertPiece build_piece(const FatGraph& g, int block_sign, double lambda) {
  if (block_sign != 1 && block_sign != -1) throw Error("block sign must be +1 or -1");
  BlockField probe(block_sign, lambda);  // validates lambda
  (void)probe;

  for (int v = 0; v < g.vertex_count(); ++v) {
    int want = g.markings[v] == VertexMarking::Regular ? 4 : 2;
    if (g.valence(v) != want)
      throw InvalidValence("vertex " + std::to_string(v) + " has valence " +
                           std::to_string(g.valence(v)) + ", expected " +
                           std::to_string(want));
  }
  auto violations = validate_admissible(g);
  if (!violations.empty()) {
    std::string msg = "graph is not admissible:";
    for (const auto& v : violations) msg += " " + v.what + ";";
    throw MalformedGraph(msg);
  }

  SeifertPiece p;
  p.graph = g;
  p.lambda = lambda;
  p.block_sign = block_sign;
  p.edge_fiber_or = fiber_orientations(g);
  p.vertex_color = vertex_colors(g);
  p.orbit_dir.resize(g.vertex_count());
  p.vertex_z_shift.resize(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    p.orbit_dir[v] = block_sign * p.vertex_color[v];
    p.vertex_z_shift[v] = g.markings[v] == VertexMarking::Regular ? 0.0 : 0.5;
  }
  for (const auto& f : trace_boundary_faces(g))
    p.tori.push_back(BoundaryTorus{f.darts, f.role});
  return p;
}

SeifertPiece flip_piece(const SeifertPiece& p) {
  SeifertPiece q = p;
  q.block_sign = -q.block_sign;
  for (int& d : q.orbit_dir) d = -d;
  return q;
}

std::vector<std::pair<int, int>> piece_transit(const SeifertPiece& p) {
  std::vector<FaceRole> role_of(p.graph.dart_count());
  for (const auto& t : p.tori)
    for (int d : t.cells) role_of[d] = t.role;
  std::vector<std::pair<int, int>> out;
  out.reserve(p.graph.edge_count());
  for (const auto& e : p.graph.edges) {
    int in = role_of[e[0]] == FaceRole::In ? e[0] : e[1];
    int ex = in == e[0] ? e[1] : e[0];
    out.emplace_back(in, ex);
  }
  return out;
}

Spine spine(const SeifertPiece& p) {
  Spine s;
  for (int v = 0; v < p.graph.vertex_count(); ++v)
    s.orbits.push_back({v, p.orbit_dir[v]});
  for (int e = 0; e < p.graph.edge_count(); ++e) s.annulus_edges.push_back(e);
  return s;
}

bool operator==(const BoundaryLamination::TorusLeaves& a,
                const BoundaryLamination::TorusLeaves& b) {
  return a.role == b.role && a.leaf_count == b.leaf_count && a.fiber_class == b.fiber_class;
}

bool operator==(const BoundaryLamination& a, const BoundaryLamination& b) {
  return a.tori == b.tori;
}

BoundaryLamination boundary_lamination(const SeifertPiece& p) {
  BoundaryLamination lam;
  for (const auto& t : p.tori)
    lam.tori.push_back({t.role, static_cast<int>(t.cells.size()), true});
  return lam;
}

}  // namespace anoflip
