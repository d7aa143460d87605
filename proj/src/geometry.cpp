#include "wmsn/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wmsn {

namespace {

constexpr double kDegenerate = 1e-12;  // meters

struct Vec {
  double x, y;
};

Vec sub(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }

double norm(Vec v) { return std::hypot(v.x, v.y); }

void require_nondegenerate(Vec v, const char* what) {
  if (norm(v) < kDegenerate) throw std::invalid_argument(what);
}

double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

double distance(Position a, Position b) { return norm(sub(b, a)); }

AngleDeg signed_angle(Position u, Position v, Position d) {
  Vec uv = sub(v, u);
  Vec ud = sub(d, u);
  require_nondegenerate(uv, "signed_angle: v coincides with u");
  require_nondegenerate(ud, "signed_angle: d coincides with u");
  double cross = ud.x * uv.y - ud.y * uv.x;
  double dot = ud.x * uv.x + ud.y * uv.y;
  double deg = to_deg(std::atan2(cross, dot));
  // atan2 yields (-180, 180]; fold an exact -180 onto +180 for the contract.
  if (deg <= -180.0) deg = 180.0;
  return deg;
}

AngleDeg angle_offset(Position u, Position v, Position d) {
  return std::fabs(signed_angle(u, v, d));
}

double projection_advance(Position u, Position v, Position d) {
  Vec ud = sub(d, u);
  require_nondegenerate(ud, "projection_advance: d coincides with u");
  Vec uv = sub(v, u);
  double len = norm(ud);
  return (uv.x * ud.x + uv.y * ud.y) / len;
}

}  // namespace wmsn
