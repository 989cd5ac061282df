#pragma once

#include <stdexcept>
#include <string>

namespace anoflip {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point left the model block's coordinate ranges.
struct OutOfBlock : Error { using Error::Error; };

// Structural problems in a fatgraph (bad dart tables, non-bijective pairing...).
struct MalformedGraph : Error { using Error::Error; };

// Lattice quotient with linearly dependent generators.
struct DegenerateLattice : Error { using Error::Error; };

// Vertex valence incompatible with its marking.
struct InvalidValence : Error { using Error::Error; };

// The alternating z-flip structure of the block gluing cannot be realized.
struct InconsistentOrientation : Error { using Error::Error; };

// Query about a lozenge that is not interior to the unfolded ball.
struct NotInterior : Error { using Error::Error; };

// Operation does not support this vertex marking.
struct UnsupportedMarking : Error { using Error::Error; };

// Operation does not support this kind of piece.
struct UnsupportedPiece : Error { using Error::Error; };

// Sign comparison between flows whose underlying data differ.
struct IncomparableFlows : Error { using Error::Error; };

// Flows over different underlying pieces cannot be compared.
struct IncomparableManifolds : Error { using Error::Error; };

// A torus gluing matrix sends the fiber class to itself (up to sign).
struct FiberPreservingGluing : Error { using Error::Error; };

// No pairing of boundary tori satisfies the assembly constraints.
struct NoValidPairing : Error { using Error::Error; };

}  // namespace anoflip
