#pragma once

#include "anoflip/errors.hpp"

namespace anoflip {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;
inline constexpr double kMinLambda = 5.0;
inline constexpr double kDefaultLambda = 10.0;

struct Velocity {
  double dx = 0.0, dy = 0.0, dz = 0.0;
};

// Point of the block [-pi/2,pi/2]^2 x S^1, with z taken mod 1 in [0,1).
struct BlockPoint {
  double x, y, z;
  BlockPoint(double x, double y, double z);
};

enum class FaceLabel { Incoming, Outgoing, TangentLeft, TangentRight, Interior };

// The block vector field: dx = 0, dy = cos^2(x) + sin^2(y) sin^2(x),
// dz = sign * lambda * sin(x) cos(y).
struct BlockField {
  int sign;
  double lambda;

  BlockField(int sign, double lambda);
  Velocity value(const BlockPoint& p) const;
  BlockField flipped() const { return BlockField(-sign, lambda); }
};

inline bool operator==(const BlockField& a, const BlockField& b) {
  return a.sign == b.sign && a.lambda == b.lambda;
}

// Face classification with tangency taking priority at corners.
FaceLabel classify_face(const BlockPoint& p, double tol = 1e-9);

struct ClosedOrbit {
  double x;         // -pi/2 for alpha1, +pi/2 for alpha2
  int z_direction;  // sign of dz along the orbit
};

struct ClosedOrbits {
  ClosedOrbit alpha1, alpha2;
};

// The two closed orbits on the tangent faces (at y = 0). Directions follow
// the field formula: dz(+-pi/2, 0) = +-sign * lambda.
ClosedOrbits closed_orbits(const BlockField& b);

}  // namespace anoflip
