#include "anoflip/fatgraph.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace anoflip {

void FatGraph::finalize() {
  const int n_darts = 2 * static_cast<int>(edges.size());
  dart_vertex_.assign(n_darts, -1);
  dart_pos_.assign(n_darts, -1);
  dart_edge_.assign(n_darts, -1);

  if (markings.size() != vertex_darts.size())
    throw MalformedGraph("markings size does not match vertex count");

  for (int v = 0; v < static_cast<int>(vertex_darts.size()); ++v) {
    for (int k = 0; k < static_cast<int>(vertex_darts[v].size()); ++k) {
      int d = vertex_darts[v][k];
      if (d < 0 || d >= n_darts) throw MalformedGraph("dart id out of range");
      if (dart_vertex_[d] != -1) throw MalformedGraph("dart listed at two vertex slots");
      dart_vertex_[d] = v;
      dart_pos_[d] = k;
    }
  }
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    for (int d : edges[e]) {
      if (d < 0 || d >= n_darts) throw MalformedGraph("edge dart id out of range");
      if (dart_edge_[d] != -1) throw MalformedGraph("dart owned by two edges");
      dart_edge_[d] = e;
    }
    if (edges[e][0] == edges[e][1]) throw MalformedGraph("edge pairs a dart with itself");
  }
  for (int d = 0; d < n_darts; ++d) {
    if (dart_vertex_[d] == -1) throw MalformedGraph("dart missing from vertex tables");
    if (dart_edge_[d] == -1) throw MalformedGraph("dart missing from edge tables");
  }
}

int FatGraph::partner(int d) const {
  const auto& e = edges[dart_edge_[d]];
  return e[0] == d ? e[1] : e[0];
}

int FatGraph::next_at_vertex(int d) const {
  const auto& ds = vertex_darts[dart_vertex_[d]];
  return ds[(dart_pos_[d] + 1) % ds.size()];
}

int FatGraph::prev_at_vertex(int d) const {
  const auto& ds = vertex_darts[dart_vertex_[d]];
  return ds[(dart_pos_[d] + ds.size() - 1) % ds.size()];
}

bool FatGraph::connected() const {
  if (vertex_count() == 0) return true;
  std::vector<char> seen(vertex_count(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int d : vertex_darts[v]) {
      int w = dart_vertex_[partner(d)];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == vertex_count();
}

bool operator==(const FatGraph& a, const FatGraph& b) {
  return a.vertex_darts == b.vertex_darts && a.markings == b.markings &&
         a.edges == b.edges && a.supplied_roles == b.supplied_roles;
}

std::vector<std::vector<int>> trace_faces(const FatGraph& g) {
  // Next dart along a boundary component: cross the edge, then turn at the
  // far vertex to the next dart in its cyclic order.
  const int n = g.dart_count();
  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> faces;
  for (int start = 0; start < n; ++start) {
    if (used[start]) continue;
    std::vector<int> face;
    int d = start;
    do {
      used[d] = 1;
      face.push_back(d);
      d = g.next_at_vertex(g.partner(d));
    } while (d != start);
    faces.push_back(std::move(face));
  }
  return faces;  // sorted by least dart, since starts scan upward
}

std::optional<std::vector<FaceRole>> derive_roles(
    const FatGraph& g, const std::vector<std::vector<int>>& faces) {
  const int nf = static_cast<int>(faces.size());
  std::vector<int> face_of(g.dart_count(), -1);
  for (int f = 0; f < nf; ++f)
    for (int d : faces[f]) face_of[d] = f;

  // Faces adjacent across an edge must get different roles.
  std::vector<std::vector<int>> adj(nf);
  for (const auto& e : g.edges) {
    int fa = face_of[e[0]], fb = face_of[e[1]];
    if (fa == fb) return std::nullopt;
    adj[fa].push_back(fb);
    adj[fb].push_back(fa);
  }
  std::vector<int> color(nf, -1);
  for (int f0 = 0; f0 < nf; ++f0) {
    if (color[f0] != -1) continue;
    color[f0] = 0;  // least face of the component is In
    std::queue<int> q;
    q.push(f0);
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int t : adj[f]) {
        if (color[t] == -1) {
          color[t] = 1 - color[f];
          q.push(t);
        } else if (color[t] == color[f]) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<FaceRole> roles(nf);
  for (int f = 0; f < nf; ++f) roles[f] = color[f] == 0 ? FaceRole::In : FaceRole::Out;
  return roles;
}

std::vector<BoundaryFace> trace_boundary_faces(const FatGraph& g) {
  auto faces = trace_faces(g);
  std::vector<FaceRole> roles;
  if (g.supplied_roles) {
    if (g.supplied_roles->size() != faces.size())
      throw MalformedGraph("supplied roles count does not match face count");
    roles = *g.supplied_roles;
    std::vector<int> face_of(g.dart_count(), -1);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      for (int d : faces[f]) face_of[d] = f;
    for (const auto& e : g.edges)
      if (roles[face_of[e[0]]] == roles[face_of[e[1]]])
        throw MalformedGraph("supplied roles give an edge two same-role sides");
  } else {
    auto derived = derive_roles(g, faces);
    if (!derived) throw MalformedGraph("boundary roles are not derivable");
    roles = *derived;
  }
  std::vector<BoundaryFace> out;
  out.reserve(faces.size());
  for (size_t f = 0; f < faces.size(); ++f)
    out.push_back(BoundaryFace{faces[f], roles[f]});
  return out;
}

std::vector<Violation> validate_admissible(const FatGraph& g) {
  std::vector<Violation> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int val = g.valence(v);
    if (val % 2 != 0)
      out.push_back({"vertex " + std::to_string(v) + " has odd valence " +
                     std::to_string(val)});
    switch (g.markings[v]) {
      case VertexMarking::Regular:
        if (val != 4)
          out.push_back({"regular vertex " + std::to_string(v) +
                         " has valence " + std::to_string(val) + " (expected 4)"});
        break;
      case VertexMarking::Cone:
      case VertexMarking::ReflectorEnd:
        if (val != 2)
          out.push_back({"marked vertex " + std::to_string(v) + " has valence " +
                         std::to_string(val) + " (expected 2)"});
        break;
    }
  }
  if (!g.connected()) out.push_back({"graph is not connected"});

  auto faces = trace_faces(g);
  for (size_t f = 0; f < faces.size(); ++f)
    if (faces[f].size() % 2 != 0)
      out.push_back({"boundary face " + std::to_string(f) + " has odd length " +
                     std::to_string(faces[f].size())});
  bool roles_ok = false;
  if (g.supplied_roles) {
    try {
      trace_boundary_faces(g);
      roles_ok = true;
    } catch (const MalformedGraph&) {
    }
  } else {
    roles_ok = derive_roles(g, faces).has_value();
  }
  if (!roles_ok)
    out.push_back({"no In/Out role assignment separates the two sides of every edge"});
  return out;
}

bool operator==(const FatGraphIso& a, const FatGraphIso& b) {
  return a.dart_map == b.dart_map && a.reverses_orientation == b.reverses_orientation &&
         a.swaps_roles == b.swaps_roles;
}

namespace {

// Extend the map determined by dart0 -> seed (plus the reversal flag) over a
// connected graph, or fail.
std::optional<FatGraphIso> extend_iso(const FatGraph& a, const FatGraph& b, int seed,
                                      bool rev) {
  const int n = a.dart_count();
  std::vector<int> map(n, -1), hit(n, 0);
  map[0] = seed;
  hit[seed] = 1;
  std::queue<int> q;
  q.push(0);
  auto assign = [&](int d, int image) -> bool {
    if (map[d] != -1) return map[d] == image;
    if (hit[image]) return false;
    map[d] = image;
    hit[image] = 1;
    q.push(d);
    return true;
  };
  while (!q.empty()) {
    int d = q.front();
    q.pop();
    if (!assign(a.partner(d), b.partner(map[d]))) return std::nullopt;
    int im = rev ? b.prev_at_vertex(map[d]) : b.next_at_vertex(map[d]);
    if (!assign(a.next_at_vertex(d), im)) return std::nullopt;
  }
  for (int d = 0; d < n; ++d)
    if (map[d] == -1) return std::nullopt;  // disconnected source

  FatGraphIso iso;
  iso.dart_map = std::move(map);
  iso.reverses_orientation = rev;
  iso.vertex_map.assign(a.vertex_count(), -1);
  for (int d = 0; d < n; ++d) {
    int v = a.vertex_of(d), w = b.vertex_of(iso.dart_map[d]);
    if (iso.vertex_map[v] == -1) iso.vertex_map[v] = w;
    if (iso.vertex_map[v] != w) return std::nullopt;
    if (a.valence(v) != b.valence(w)) return std::nullopt;
    if (a.markings[v] != b.markings[w]) return std::nullopt;
  }
  return iso;
}

}  // namespace

std::vector<FatGraphIso> isomorphisms(const FatGraph& a, const FatGraph& b,
                                      bool allow_reversal, bool allow_role_swap) {
  std::vector<FatGraphIso> out;
  if (a.dart_count() != b.dart_count() || a.vertex_count() != b.vertex_count())
    return out;
  if (a.dart_count() == 0) return out;
  if (!a.connected() || !b.connected())
    throw MalformedGraph("isomorphism search requires connected graphs");

  auto faces_a = trace_boundary_faces(a);
  auto faces_b = trace_boundary_faces(b);
  std::vector<int> face_of_b(b.dart_count(), -1);
  for (int f = 0; f < static_cast<int>(faces_b.size()); ++f)
    for (int d : faces_b[f].darts) face_of_b[d] = f;

  for (bool rev : {false, true}) {
    if (rev && !allow_reversal) continue;
    for (int seed = 0; seed < b.dart_count(); ++seed) {
      auto iso = extend_iso(a, b, seed, rev);
      if (!iso) continue;
      // Role behavior must be uniform (keep all or swap all).
      int behavior = -1;  // 0 keep, 1 swap
      bool ok = true;
      for (const auto& fa : faces_a) {
        int fb = face_of_b[iso->dart_map[fa.darts[0]]];
        if (static_cast<int>(fa.darts.size()) != faces_b[fb].length()) {
          ok = false;
          break;
        }
        int bhv = fa.role == faces_b[fb].role ? 0 : 1;
        if (behavior == -1) behavior = bhv;
        if (behavior != bhv) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      iso->swaps_roles = behavior == 1;
      if (iso->swaps_roles && !allow_role_swap) continue;
      out.push_back(std::move(*iso));
    }
  }
  std::sort(out.begin(), out.end(), [](const FatGraphIso& x, const FatGraphIso& y) {
    return x.dart_map < y.dart_map;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<FatGraphIso> automorphisms(const FatGraph& g, bool allow_reversal,
                                       bool allow_role_swap) {
  return isomorphisms(g, g, allow_reversal, allow_role_swap);
}

FatGraphIso compose(const FatGraph& g, const FatGraphIso& f, const FatGraphIso& s) {
  FatGraphIso out;
  out.dart_map.resize(f.dart_map.size());
  for (size_t d = 0; d < f.dart_map.size(); ++d) out.dart_map[d] = s.dart_map[f.dart_map[d]];
  out.vertex_map.resize(f.vertex_map.size());
  for (size_t v = 0; v < f.vertex_map.size(); ++v)
    out.vertex_map[v] = s.vertex_map[f.vertex_map[v]];
  out.reverses_orientation = f.reverses_orientation != s.reverses_orientation;
  out.swaps_roles = f.swaps_roles != s.swaps_roles;
  (void)g;
  return out;
}

namespace {

long floor_div(long a, long b) {
  long q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// Hermite-style basis (a,0), (c,d) with a,d > 0 for the lattice spanned by
// v1, v2, plus reduction of a point to its canonical representative.
struct Lattice {
  long a, c, d;

  std::pair<long, long> reduce(long x, long y) const {
    long n = floor_div(y, d);
    x -= n * c;
    y -= n * d;
    x -= floor_div(x, a) * a;
    return {x, y};
  }
};

Lattice make_lattice(std::array<int, 2> v1i, std::array<int, 2> v2i) {
  long x1 = v1i[0], y1 = v1i[1], x2 = v2i[0], y2 = v2i[1];
  long det = x1 * y2 - y1 * x2;
  if (det == 0) throw DegenerateLattice("lattice generators are linearly dependent");
  // Euclid on the y-components until one vanishes.
  while (y1 != 0 && y2 != 0) {
    if (std::abs(y1) >= std::abs(y2)) {
      long q = y1 / y2;
      x1 -= q * x2;
      y1 -= q * y2;
    } else {
      long q = y2 / y1;
      x2 -= q * x1;
      y2 -= q * y1;
    }
  }
  if (y1 != 0) {
    std::swap(x1, x2);
    std::swap(y1, y2);
  }
  // Now y1 == 0: basis (x1, 0), (x2, y2).
  long a = std::abs(x1), d = std::abs(y2), c = y2 < 0 ? -x2 : x2;
  c -= floor_div(c, a) * a;
  return Lattice{a, c, d};
}

constexpr int kEast = 0, kNorth = 1, kWest = 2, kSouth = 3;

FatGraph grid_graph(int width, int height,
                    const std::function<std::pair<long, long>(long, long)>& reduce,
                    const std::function<int(long, long)>& index) {
  FatGraph g;
  const int nv = width * height;
  g.vertex_darts.resize(nv);
  g.markings.assign(nv, VertexMarking::Regular);
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) {
      int v = index(i, j);
      g.vertex_darts[v] = {4 * v + kEast, 4 * v + kNorth, 4 * v + kWest, 4 * v + kSouth};
    }
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) {
      int v = index(i, j);
      auto [ie, je] = reduce(i + 1, j);
      g.edges.push_back({4 * v + kEast, 4 * index(ie, je) + kWest});
      auto [in, jn] = reduce(i, j + 1);
      g.edges.push_back({4 * v + kNorth, 4 * index(in, jn) + kSouth});
    }
  g.finalize();
  return g;
}

}  // namespace

FatGraph lattice_quotient_graph(std::array<int, 2> v1, std::array<int, 2> v2) {
  Lattice lat = make_lattice(v1, v2);
  auto reduce = [lat](long x, long y) { return lat.reduce(x, y); };
  auto index = [lat](long x, long y) { return static_cast<int>(y * lat.a + x); };
  return grid_graph(static_cast<int>(lat.a), static_cast<int>(lat.d), reduce, index);
}

FatGraph two_holed_torus_example() { return lattice_quotient_graph({2, 0}, {1, 1}); }

FatGraph family_Xn(int n) {
  if (n < 1) throw Error("family index must be >= 1");
  const int width = 4, height = 2 + 2 * n;
  auto reduce = [=](long x, long y) {
    return std::pair<long, long>{((x % width) + width) % width,
                                 ((y % height) + height) % height};
  };
  auto index = [=](long x, long y) { return static_cast<int>(y * width + x); };
  FatGraph g = grid_graph(width, height, reduce, index);
  // Reverse the cyclic order at the top-left vertex. The four incident
  // squares merge into two octagons, leaving this vertex as the only one not
  // adjacent to a quadrilateral boundary face.
  int u = index(0, height - 1);
  g.vertex_darts[u] = {4 * u + kEast, 4 * u + kSouth, 4 * u + kWest, 4 * u + kNorth};
  g.finalize();
  return g;
}

}  // namespace anoflip
