#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anoflip/seifert_piece.hpp"

namespace anoflip {

using GluingMatrix = std::array<std::array<long, 2>, 2>;

long det(const GluingMatrix& m);
GluingMatrix inverse(const GluingMatrix& m);  // requires det = +-1
GluingMatrix multiply(const GluingMatrix& a, const GluingMatrix& b);

// One torus gluing, from an Out torus to an In torus, acting on the (l, f)
// bases by the integer matrix.
struct GluingPair {
  int from_piece = 0, from_torus = 0;
  int to_piece = 0, to_torus = 0;
  GluingMatrix matrix{{{0, 1}, {1, 0}}};
};

bool operator==(const GluingPair& a, const GluingPair& b);

struct GluingSpec {
  std::vector<GluingPair> pairs;
};

struct GluedFlow {
  std::vector<SeifertPiece> pieces;
  GluingSpec gluing;
  std::optional<unsigned> seed;
};

bool operator==(const GluedFlow& a, const GluedFlow& b);

// Checks: torus indices valid, perfect Out->In matching, det +-1, the fiber
// condition A*(0,1) != +-(0,1), marking support, and orientability (piece
// orientations eps with eps_to = -det(A)*eps_from must exist).
std::vector<Violation> validate_gluing(const std::vector<SeifertPiece>& pieces,
                                       const GluingSpec& spec);

GluedFlow build_flow(std::vector<SeifertPiece> pieces, GluingSpec spec,
                     std::optional<unsigned> seed = std::nullopt);

// Cyclic gluing of the distinguished octagonal tori at each graph's invariant
// vertex, plus a seeded pairing of the remaining tori. All matrices are
// [[1,1],[1,0]].
GluedFlow construction_7_3(const std::vector<FatGraph>& graphs, unsigned seed = 0,
                           double lambda = kDefaultLambda);

// Transit digraph condensed on In-cells: (piece, edge) -> all In-cells of the
// torus glued behind the same edge's Out side.
struct TransitGraph {
  struct Node {
    int piece, edge;
  };
  std::vector<Node> nodes;                       // sorted by (piece, edge)
  std::vector<int> out_gluing;                   // gluing id used on exit
  std::vector<std::vector<int>> arcs;            // successor node ids
  int index(int piece, int edge) const;
};

TransitGraph transit_graph(const GluedFlow& f);

bool check_transitive(const GluedFlow& f);

struct ItineraryStep {
  int piece, edge, gluing;
  auto operator<=>(const ItineraryStep&) const = default;
};

using Itinerary = std::vector<ItineraryStep>;

// All simple cycles of the transit graph up to max_len, canonicalized to the
// least rotation, sorted.
std::vector<Itinerary> periodic_itineraries(const GluedFlow& f, int max_len);

struct CompareResult {
  bool equal = true;
  std::string witness;  // first differing itinerary / class, when not equal
};

// Periodic-orbit data comparison: vertical orbit classes and itineraries up
// to max_len. Throws IncomparableManifolds when pieces differ.
CompareResult free_homotopy_compare(const GluedFlow& a, const GluedFlow& b, int max_len);

GluedFlow apply_flip(const GluedFlow& f, int piece);

// Partition of flows (indices) by sign vector; requires all pairwise Equal
// under free_homotopy_compare.
std::vector<std::vector<int>> classify(const std::vector<GluedFlow>& flows,
                                       int max_len = 4);

struct EquivalenceCertificate {
  bool reverses_flow_direction = false;
  std::vector<int> piece_matching;       // piece i of f1 -> piece_matching[i] of f2
  std::vector<FatGraphIso> piece_maps;   // graph_i -> graph_{matching[i]}
  std::vector<int> fiber_flags;          // +-1 per piece of f1
};

struct SearchResult {
  std::optional<EquivalenceCertificate> certificate;  // nullopt = Exhausted
};

// Enumerates flow-direction flag, piece matchings, per-piece isomorphisms and
// fiber flags in lexicographic order; returns the first candidate passing the
// sign-transport, homology-compatibility, and orientation-parity rules.
SearchResult orbit_equivalence_search(const GluedFlow& f1, const GluedFlow& f2);

// Independent check: transforms f1 by the certificate and compares the result
// with f2 exactly.
bool replay_certificate(const EquivalenceCertificate& cert, const GluedFlow& f1,
                        const GluedFlow& f2);

// Sign data (block_sign per piece) relative to the all-positive reference.
std::vector<int> sign_vector(const GluedFlow& f);
int sign_of(const GluedFlow& f, int piece);

// Per-piece agreement flags. Throws IncomparableFlows when the underlying
// data (graphs, lambda, gluings) differ.
std::vector<bool> compare_signs(const GluedFlow& a, const GluedFlow& b);

}  // namespace anoflip
