#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "anoflip/errors.hpp"

namespace anoflip {

enum class VertexMarking { Regular, Cone, ReflectorEnd };
enum class FaceRole { In, Out };

// Ribbon graph with darts 0..2E-1. Each edge owns two darts (its two ends);
// every vertex lists its darts in (counterclockwise) cyclic order.
struct FatGraph {
  std::vector<std::vector<int>> vertex_darts;
  std::vector<VertexMarking> markings;           // one per vertex
  std::vector<std::array<int, 2>> edges;         // dart pairs
  std::optional<std::vector<FaceRole>> supplied_roles;  // by canonical face index

  // Derived lookup tables; call finalize() after building the fields above.
  std::vector<int> dart_vertex_, dart_pos_, dart_edge_;

  void finalize();  // throws MalformedGraph

  int dart_count() const { return static_cast<int>(dart_vertex_.size()); }
  int vertex_count() const { return static_cast<int>(vertex_darts.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int partner(int d) const;
  int vertex_of(int d) const { return dart_vertex_[d]; }
  int edge_of(int d) const { return dart_edge_[d]; }
  int pos_of(int d) const { return dart_pos_[d]; }
  int next_at_vertex(int d) const;
  int prev_at_vertex(int d) const;
  int valence(int v) const { return static_cast<int>(vertex_darts[v].size()); }
  bool connected() const;
};

bool operator==(const FatGraph& a, const FatGraph& b);

// Boundary component of a regular neighborhood of the graph, as the cyclic
// dart sequence met while tracing. Canonical start = least dart.
struct BoundaryFace {
  std::vector<int> darts;
  FaceRole role = FaceRole::In;
  int length() const { return static_cast<int>(darts.size()); }
};

// Faces without roles, sorted by least dart.
std::vector<std::vector<int>> trace_faces(const FatGraph& g);

// Attempt the In/Out 2-coloring (two sides of every edge get different
// roles). Unique up to global swap; canonically the face containing dart 0
// is In. Returns nullopt when no coloring exists.
std::optional<std::vector<FaceRole>> derive_roles(const FatGraph& g,
                                                  const std::vector<std::vector<int>>& faces);

// Faces with roles (supplied roles win, otherwise derived).
// Throws MalformedGraph when roles are neither supplied nor derivable.
std::vector<BoundaryFace> trace_boundary_faces(const FatGraph& g);

struct Violation {
  std::string what;
};

// Admissibility: even valences, role 2-coloring exists, every face has an
// even number of edge sides, marking/valence compatibility, connectivity.
std::vector<Violation> validate_admissible(const FatGraph& g);

// Graph map: dart bijection compatible with edge pairing and with the cyclic
// orders (reversing them all when reverses_orientation).
struct FatGraphIso {
  std::vector<int> dart_map;
  std::vector<int> vertex_map;
  bool reverses_orientation = false;
  bool swaps_roles = false;
};

bool operator==(const FatGraphIso& a, const FatGraphIso& b);

std::vector<FatGraphIso> isomorphisms(const FatGraph& a, const FatGraph& b,
                                      bool allow_reversal = true,
                                      bool allow_role_swap = true);
std::vector<FatGraphIso> automorphisms(const FatGraph& g, bool allow_reversal = true,
                                       bool allow_role_swap = true);

FatGraphIso compose(const FatGraph& g, const FatGraphIso& f, const FatGraphIso& s);

// Quotient of the half-integer grid graph of the plane (squares removed at
// integer points) by the lattice spanned by v1, v2.
FatGraph lattice_quotient_graph(std::array<int, 2> v1, std::array<int, 2> v2);

// lattice_quotient_graph((2,0),(1,1)): 2 vertices, 4 edges, 2 boundary faces,
// with an order-4 automorphism exchanging the vertices.
FatGraph two_holed_torus_example();

// 4 x (2+2n) square-grid torus with the cyclic order reversed at one vertex;
// the unique vertex not adjacent to any quadrilateral boundary face is fixed
// by every automorphism.
FatGraph family_Xn(int n);

}  // namespace anoflip
