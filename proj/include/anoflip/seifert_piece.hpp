#pragma once

#include <utility>
#include <vector>

#include "anoflip/fatgraph.hpp"
#include "anoflip/model_block.hpp"

namespace anoflip {

// Boundary torus of a piece: the annulus cells are the darts of one traced
// boundary face, in cyclic order. Homology basis convention: l = (1,0) runs
// once through the cell cycle, f = (0,1) is the fiber.
struct BoundaryTorus {
  std::vector<int> cells;
  FaceRole role = FaceRole::In;
};

bool operator==(const BoundaryTorus& a, const BoundaryTorus& b);

// Circle bundle neighborhood of a fatgraph spine: one model block per edge,
// blocks glued around each vertex with alternating fiber flips (plus a half
// fiber shift at Cone / ReflectorEnd vertices).
struct SeifertPiece {
  FatGraph graph;
  double lambda = kDefaultLambda;
  int block_sign = +1;
  std::vector<int> orbit_dir;       // fiber direction of the orbit at each vertex
  std::vector<BoundaryTorus> tori;  // canonical face order
  std::vector<double> vertex_z_shift;  // 0 regular, 1/2 cone & reflector gluings

  // Orientation bookkeeping for the block assembly: c_v in {+1,-1} with
  // adjacent vertices opposite (which end of each block sits at v), and
  // zeta_e in {+1,-1} alternating between rotation-consecutive edges at every
  // vertex (relative fiber orientation of each block).
  std::vector<int> vertex_color;
  std::vector<int> edge_fiber_or;
};

bool operator==(const SeifertPiece& a, const SeifertPiece& b);

SeifertPiece build_piece(const FatGraph& g, int block_sign = +1,
                         double lambda = kDefaultLambda);

// Negates block_sign and every orbit_dir; everything else is untouched.
SeifertPiece flip_piece(const SeifertPiece& p);

// Per edge: (cell on the In side, cell on the Out side). An orbit entering a
// block leaves through the same edge's opposite side, for either field sign.
std::vector<std::pair<int, int>> piece_transit(const SeifertPiece& p);

struct Spine {
  struct OrbitAt {
    int vertex;
    int dir;
  };
  std::vector<OrbitAt> orbits;        // one per vertex
  std::vector<int> annulus_edges;     // one Birkhoff annulus per edge
};

Spine spine(const SeifertPiece& p);

// Closed leaf data carried by the boundary: one closed curve in the fiber
// class per cell boundary, stable on In tori and unstable on Out tori.
// Depends only on the graph, so a piece and its flip agree field-by-field.
struct BoundaryLamination {
  struct TorusLeaves {
    FaceRole role;
    int leaf_count;
    bool fiber_class;
  };
  std::vector<TorusLeaves> tori;
};

bool operator==(const BoundaryLamination::TorusLeaves& a,
                const BoundaryLamination::TorusLeaves& b);
bool operator==(const BoundaryLamination& a, const BoundaryLamination& b);

BoundaryLamination boundary_lamination(const SeifertPiece& p);

}  // namespace anoflip
