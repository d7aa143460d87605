#pragma once

namespace wmsn {

// Planar position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

// Angles are handled in degrees at every public interface.
using AngleDeg = double;

double distance(Position a, Position b);

// Unsigned angle at vertex u between rays u->v and u->d, in [0, 180].
// Throws std::invalid_argument when v or d coincides with u (vector shorter
// than 1e-12 m).
AngleDeg angle_offset(Position u, Position v, Position d);

// Signed angle from ray u->d to ray u->v, in (-180, 180], counterclockwise
// positive. Same degenerate-input rule as angle_offset.
AngleDeg signed_angle(Position u, Position v, Position d);

// Scalar projection of u->v onto the unit vector u->d, in meters. Negative
// when v lies behind u relative to d. Requires d != u; v == u yields 0.
double projection_advance(Position u, Position v, Position d);

}  // namespace wmsn
