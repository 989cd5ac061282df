#pragma once

#include <vector>

#include "anoflip/manifold_assembly.hpp"
#include "anoflip/seifert_piece.hpp"

namespace anoflip {

// Ball in the universal branched unfolding of a piece's spine: a fat tree
// whose vertices are 4-valent lifts of the graph vertices and whose edges
// ("lozenges") lift the Birkhoff annuli. Cone vertices unfold to valence 4
// (their two darts repeat); ReflectorEnd markings are unsupported.
struct FatTreeBall {
  struct Node {
    int base_vertex = -1;
    int depth = 0;
    std::vector<int> slots;  // lozenge id per quadrant slot, -1 when absent
    // role of the corner between slot k and slot k+1 (cyclically)
    std::vector<FaceRole> corner_roles;
  };
  struct Lozenge {
    int a = -1, b = -1;          // endpoint node ids
    int slot_a = -1, slot_b = -1;  // slot index at each endpoint
    int base_edge = -1;
  };
  std::vector<Node> nodes;       // node 0 is the root
  std::vector<Lozenge> lozenges;
  int radius = 0;

  bool node_interior(int n) const { return nodes[n].depth <= radius; }
  bool lozenge_interior(int l) const {
    return node_interior(lozenges[l].a) && node_interior(lozenges[l].b);
  }
};

// Ball of the given radius around the lift of vertex 0.
FatTreeBall unfold_tree(const SeifertPiece& p, int radius);

// True when every interior lozenge has all four sides shared with another
// lozenge of the ball.
bool is_tree_of_scalloped(const FatTreeBall& ball);

// The two maximal lozenge chains through an interior lozenge: one extending
// across its stable sides, one across its unstable sides, truncated at the
// ball boundary. They intersect only in the given lozenge.
struct ScallopedLines {
  std::vector<int> stable_line;
  std::vector<int> unstable_line;
};

ScallopedLines scalloped_lines_through(int lozenge, const FatTreeBall& ball);

}  // namespace anoflip
