#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "anoflip/fatgraph.hpp"
#include "oracles.hpp"

using namespace anoflip;

namespace {

std::set<std::vector<int>> as_rotation_set(const std::vector<std::vector<int>>& faces) {
  std::set<std::vector<int>> s;
  for (auto f : faces) s.insert(oracle::least_rotation(f));
  return s;
}

}  // namespace

TEST_CASE("two-holed torus example") {
  FatGraph g = two_holed_torus_example();
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 4);
  auto faces = trace_faces(g);
  CHECK(faces.size() == 2);
  // Euler characteristic: V - E = 2 - 4 = -2 on a genus-1 surface with 2 faces
  CHECK(g.vertex_count() - g.edge_count() == 2 - 2 * 1 - 2);
  CHECK(g == lattice_quotient_graph({2, 0}, {1, 1}));
  CHECK(validate_admissible(g).empty());
}

TEST_CASE("face tracing is canonical and matches the naive tracer") {
  for (const FatGraph& g :
       {two_holed_torus_example(), family_Xn(1), family_Xn(2),
        lattice_quotient_graph({3, 1}, {1, 3})}) {
    auto faces = trace_faces(g);
    for (size_t i = 0; i < faces.size(); ++i) {
      CHECK(faces[i].front() == *std::min_element(faces[i].begin(), faces[i].end()));
      if (i) CHECK(faces[i - 1].front() < faces[i].front());
    }
    int sides = 0;
    for (const auto& f : faces) sides += static_cast<int>(f.size());
    CHECK(sides == 2 * g.edge_count());
    CHECK(as_rotation_set(faces) == oracle::naive_faces(g));
  }
}

TEST_CASE("role derivation alternates across edges") {
  FatGraph g = family_Xn(1);
  auto faces = trace_boundary_faces(g);
  std::vector<FaceRole> role_of(g.dart_count());
  for (const auto& f : faces)
    for (int d : f.darts) role_of[d] = f.role;
  for (const auto& e : g.edges) CHECK(role_of[e[0]] != role_of[e[1]]);
  for (const auto& f : faces) CHECK(f.length() % 2 == 0);
}

TEST_CASE("family Xn structure") {
  FatGraph x1 = family_Xn(1);
  CHECK(validate_admissible(x1).empty());
  CHECK(x1.vertex_count() == 16);

  // exactly one vertex away from every quadrilateral face
  auto faces = trace_boundary_faces(x1);
  std::vector<int> away;
  for (int v = 0; v < x1.vertex_count(); ++v) {
    bool near_quad = false;
    for (int d : x1.vertex_darts[v])
      for (const auto& f : faces)
        if (f.length() == 4 &&
            std::find(f.darts.begin(), f.darts.end(), d) != f.darts.end())
          near_quad = true;
    if (!near_quad) away.push_back(v);
  }
  CHECK(away.size() == 1);

  // pairwise non-isomorphic along the family
  FatGraph x2 = family_Xn(2), x3 = family_Xn(3);
  CHECK(isomorphisms(x1, x2).empty());
  CHECK(isomorphisms(x1, x3).empty());
  CHECK(isomorphisms(x2, x3).empty());
  CHECK_FALSE(isomorphisms(x1, x1).empty());
}

TEST_CASE("automorphism enumeration") {
  FatGraph g = two_holed_torus_example();
  auto autos = automorphisms(g);

  // identity present
  bool has_id = false;
  for (const auto& a : autos) {
    bool id = !a.reverses_orientation;
    for (int d = 0; d < g.dart_count(); ++d)
      if (a.dart_map[d] != d) id = false;
    if (id) has_id = true;
  }
  CHECK(has_id);

  // order-4 element exchanging the vertices, preserving each boundary face
  auto faces = trace_faces(g);
  std::vector<int> face_of(g.dart_count());
  for (size_t i = 0; i < faces.size(); ++i)
    for (int d : faces[i]) face_of[d] = static_cast<int>(i);
  bool found = false;
  for (const auto& a : autos) {
    if (a.reverses_orientation || a.swaps_roles) continue;
    if (a.vertex_map[0] != 1) continue;
    FatGraphIso p = a;
    int order = 1;
    auto is_id = [&](const FatGraphIso& f) {
      for (int d = 0; d < g.dart_count(); ++d)
        if (f.dart_map[d] != d) return false;
      return true;
    };
    while (!is_id(p) && order <= 8) {
      p = compose(g, a, p);
      ++order;
    }
    bool faces_fixed = true;
    for (int d = 0; d < g.dart_count(); ++d)
      if (face_of[a.dart_map[d]] != face_of[d]) faces_fixed = false;
    if (order == 4 && faces_fixed) found = true;
  }
  CHECK(found);

  // closure under composition
  std::set<std::vector<int>> maps;
  for (const auto& a : autos) maps.insert(a.dart_map);
  for (const auto& a : autos)
    for (const auto& b : autos) CHECK(maps.count(compose(g, a, b).dart_map) == 1);

  // canonical order, no duplicates
  for (size_t i = 1; i < autos.size(); ++i)
    CHECK(autos[i - 1].dart_map < autos[i].dart_map);
}

TEST_CASE("restricted automorphism flags") {
  FatGraph g = two_holed_torus_example();
  for (const auto& a : automorphisms(g, false, true)) CHECK_FALSE(a.reverses_orientation);
  for (const auto& a : automorphisms(g, true, false)) CHECK_FALSE(a.swaps_roles);
}

TEST_CASE("lattice quotient errors") {
  CHECK_THROWS_AS(lattice_quotient_graph({2, 2}, {1, 1}), DegenerateLattice);
  CHECK_THROWS_AS(lattice_quotient_graph({0, 0}, {1, 1}), DegenerateLattice);
  CHECK_THROWS_AS(family_Xn(0), Error);
}

TEST_CASE("lattice quotient invariance under basis change") {
  // same lattice, different generating pairs
  CHECK(lattice_quotient_graph({2, 0}, {1, 1}) == lattice_quotient_graph({1, 1}, {3, 1}));
}

TEST_CASE("admissibility violations are reported") {
  // odd valence: single vertex with three darts cannot even pair edges evenly
  FatGraph g;
  g.vertex_darts = {{0, 1}, {2, 3}};
  g.markings = {VertexMarking::Regular, VertexMarking::Regular};
  g.edges = {{0, 2}, {1, 3}};
  g.finalize();
  auto v = validate_admissible(g);  // Regular vertices must have valence 4
  CHECK_FALSE(v.empty());

  g.markings = {VertexMarking::Cone, VertexMarking::Cone};
  CHECK(validate_admissible(g).empty());
}

TEST_CASE("malformed dart tables are rejected") {
  FatGraph g;
  g.vertex_darts = {{0, 1}, {2, 2}};  // dart 2 repeated, dart 3 missing
  g.markings = {VertexMarking::Cone, VertexMarking::Cone};
  g.edges = {{0, 2}, {1, 3}};
  CHECK_THROWS_AS(g.finalize(), MalformedGraph);
}

TEST_CASE("random admissible graphs: faces, roles, parity") {
  std::mt19937 rng(20250826);
  for (int trial = 0; trial < 40; ++trial) {
    FatGraph g = oracle::random_admissible_graph(rng);
    CHECK(as_rotation_set(trace_faces(g)) == oracle::naive_faces(g));
    auto faces = trace_boundary_faces(g);
    std::vector<FaceRole> role_of(g.dart_count());
    for (const auto& f : faces) {
      CHECK(f.length() % 2 == 0);
      for (int d : f.darts) role_of[d] = f.role;
    }
    for (const auto& e : g.edges) CHECK(role_of[e[0]] != role_of[e[1]]);
  }
}

TEST_CASE("isomorphism search requires connected input") {
  FatGraph g;
  g.vertex_darts = {{0, 1}, {2, 3}};
  g.markings = {VertexMarking::Cone, VertexMarking::Cone};
  g.edges = {{0, 1}, {2, 3}};  // two disjoint loops
  g.finalize();
  CHECK_THROWS_AS(isomorphisms(g, g), MalformedGraph);
}
