#include "anoflip/model_block.hpp"

#include <cmath>

namespace anoflip {

namespace {

double wrap_unit(double z) {
  double w = z - std::floor(z);
  if (w >= 1.0) w -= 1.0;  // guard against floor rounding at exact integers
  return w;
}

}  // namespace

BlockPoint::BlockPoint(double x_, double y_, double z_) : x(x_), y(y_), z(wrap_unit(z_)) {
  const double slack = 1e-12;
  if (x < -kHalfPi - slack || x > kHalfPi + slack || y < -kHalfPi - slack ||
      y > kHalfPi + slack) {
    throw OutOfBlock("point (" + std::to_string(x) + ", " + std::to_string(y) +
                     ") outside [-pi/2, pi/2]^2");
  }
  if (x < -kHalfPi) x = -kHalfPi;
  if (x > kHalfPi) x = kHalfPi;
  if (y < -kHalfPi) y = -kHalfPi;
  if (y > kHalfPi) y = kHalfPi;
}

BlockField::BlockField(int sign_, double lambda_) : sign(sign_), lambda(lambda_) {
  if (sign != 1 && sign != -1) throw Error("block sign must be +1 or -1");
  if (lambda < kMinLambda)
    throw Error("lambda must be >= " + std::to_string(kMinLambda) +
                " for the hyperbolicity estimates");
}

Velocity BlockField::value(const BlockPoint& p) const {
  const double cx = std::cos(p.x), sx = std::sin(p.x), sy = std::sin(p.y);
  Velocity v;
  v.dx = 0.0;
  v.dy = cx * cx + sy * sy * sx * sx;
  v.dz = sign * lambda * sx * std::cos(p.y);
  return v;
}

FaceLabel classify_face(const BlockPoint& p, double tol) {
  // Tangency wins at corners.
  if (std::abs(p.x + kHalfPi) <= tol) return FaceLabel::TangentLeft;
  if (std::abs(p.x - kHalfPi) <= tol) return FaceLabel::TangentRight;
  if (std::abs(p.y + kHalfPi) <= tol) return FaceLabel::Incoming;
  if (std::abs(p.y - kHalfPi) <= tol) return FaceLabel::Outgoing;
  return FaceLabel::Interior;
}

ClosedOrbits closed_orbits(const BlockField& b) {
  // dz(x=-pi/2, y=0) = -sign*lambda; dz(x=+pi/2, y=0) = +sign*lambda.
  return ClosedOrbits{ClosedOrbit{-kHalfPi, -b.sign}, ClosedOrbit{kHalfPi, b.sign}};
}

}  // namespace anoflip
