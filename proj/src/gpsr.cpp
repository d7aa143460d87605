#include "wmsn/gpsr.hpp"

#include <cmath>
#include <optional>

namespace wmsn {

const char* to_string(PlanarizationRule r) {
  return r == PlanarizationRule::Gabriel ? "gabriel" : "rng";
}

namespace {

double sq(double x) { return x * x; }

double dist2(Position a, Position b) { return sq(a.x - b.x) + sq(a.y - b.y); }

bool keep_edge(Position self, Position v, const std::vector<GpsrNeighbor>& nbrs,
               NodeId vid, PlanarizationRule rule) {
  if (rule == PlanarizationRule::Gabriel) {
    Position mid{(self.x + v.x) / 2.0, (self.y + v.y) / 2.0};
    double r2 = dist2(self, v) / 4.0;
    for (const auto& w : nbrs)
      if (w.id != vid && dist2(w.pos, mid) < r2) return false;
    return true;
  }
  double duv = distance(self, v);
  for (const auto& w : nbrs)
    if (w.id != vid && std::max(distance(self, w.pos), distance(w.pos, v)) < duv)
      return false;
  return true;
}

}  // namespace

std::vector<GpsrNeighbor> planar_filter(Position self,
                                        const std::vector<GpsrNeighbor>& nbrs,
                                        PlanarizationRule rule) {
  std::vector<GpsrNeighbor> out;
  for (const auto& v : nbrs)
    if (keep_edge(self, v.pos, nbrs, v.id, rule)) out.push_back(v);
  return out;
}

PlanarAdjacency planarize(const Deployment& dep, PlanarizationRule rule) {
  PlanarAdjacency adj(dep.nodes.size());
  for (const auto& n : dep.nodes) {
    std::vector<GpsrNeighbor> nbrs;
    for (NodeId v : dep.neighbors(n.id)) nbrs.push_back({v, dep.node(v).pos});
    for (const auto& kept : planar_filter(n.pos, nbrs, rule))
      adj[n.id].push_back(kept.id);
  }
  return adj;
}

namespace {

double cross(Position o, Position a, Position b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Interior intersection point of segments (p1, p2) and (q1, q2), if any.
// Touching at an endpoint does not count.
std::optional<Position> proper_crossing(Position p1, Position p2, Position q1,
                                        Position q2) {
  double d1 = cross(q1, q2, p1);
  double d2 = cross(q1, q2, p2);
  double d3 = cross(p1, p2, q1);
  double d4 = cross(p1, p2, q2);
  if (!((d1 > 0) != (d2 > 0) && d1 != 0 && d2 != 0)) return std::nullopt;
  if (!((d3 > 0) != (d4 > 0) && d3 != 0 && d4 != 0)) return std::nullopt;
  double denom = d1 - d2;  // == cross(q1,q2,p1) - cross(q1,q2,p2) != 0 here
  double t = d1 / denom;
  return Position{p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y)};
}

// First planar neighbor counterclockwise from the reference direction.
// An exactly aligned neighbor counts as a full turn, so bouncing back along
// the incoming edge is the option of last resort.
const GpsrNeighbor* rhr_next(const std::vector<GpsrNeighbor>& planar,
                             Position self, Position toward) {
  double ref = std::atan2(toward.y - self.y, toward.x - self.x);
  const GpsrNeighbor* best = nullptr;
  double best_delta = 0.0;
  constexpr double kTau = 6.283185307179586476925286766559;
  for (const auto& nb : planar) {
    double a = std::atan2(nb.pos.y - self.y, nb.pos.x - self.x);
    double delta = a - ref;
    while (delta <= 0.0) delta += kTau;
    while (delta > kTau) delta -= kTau;
    if (!best || delta < best_delta ||
        (delta == best_delta && nb.id < best->id)) {
      best = &nb;
      best_delta = delta;
    }
  }
  return best;
}

}  // namespace

GpsrDecision gpsr_forward(const GpsrInput& in, PerimeterHeader h) {
  GpsrDecision out;
  double self_d = distance(in.self_pos, in.dest_pos);

  if (h.mode == GpsrMode::Perimeter &&
      self_d < distance(h.entry_point, in.dest_pos)) {
    h = PerimeterHeader{};  // strictly closer than where greedy failed
  }

  bool switched_here = false;
  if (h.mode == GpsrMode::Greedy) {
    const GpsrNeighbor* best = nullptr;
    double best_d = self_d;
    for (const auto& nb : in.neighbors) {
      double d = distance(nb.pos, in.dest_pos);
      if (d < best_d || (best && d == best_d && nb.id < best->id)) {
        best = &nb;
        best_d = d;
      }
    }
    if (best) {
      out.action = GpsrDecision::Action::Forward;
      out.next = best->id;
      out.mode_used = GpsrMode::Greedy;
      out.header = h;
      return out;
    }
    h.mode = GpsrMode::Perimeter;
    h.entry_point = in.self_pos;
    h.crossing_dist = self_d;
    h.first_sender = kNoNode;
    h.first_receiver = kNoNode;
    switched_here = true;
    out.entered_perimeter = true;
  }

  auto planar = planar_filter(in.self_pos, in.neighbors, in.rule);
  out.mode_used = GpsrMode::Perimeter;
  if (planar.empty()) {
    out.action = GpsrDecision::Action::Drop;
    out.drop_detail = "perimeter-isolated";
    out.header = h;
    return out;
  }

  Position ref = (switched_here || in.prev == kNoNode) ? in.dest_pos : in.prev_pos;
  const GpsrNeighbor* cand = rhr_next(planar, in.self_pos, ref);
  // Hop across faces while the outgoing edge crosses entry->dest strictly
  // nearer the destination than the best crossing so far.
  int guard = 4 * static_cast<int>(planar.size()) + 8;
  while (guard-- > 0) {
    auto x = proper_crossing(in.self_pos, cand->pos, h.entry_point, in.dest_pos);
    if (!x) break;
    double dx = distance(*x, in.dest_pos);
    if (dx >= h.crossing_dist - 1e-12) break;
    h.crossing_dist = dx;
    h.first_sender = kNoNode;
    h.first_receiver = kNoNode;
    cand = rhr_next(planar, in.self_pos, cand->pos);
  }

  if (h.first_sender == in.self && h.first_receiver == cand->id) {
    out.action = GpsrDecision::Action::Drop;
    out.drop_detail = "perimeter-loop";
    out.header = h;
    return out;
  }
  if (h.first_receiver == kNoNode) {
    h.first_sender = in.self;
    h.first_receiver = cand->id;
  }
  out.action = GpsrDecision::Action::Forward;
  out.next = cand->id;
  out.header = h;
  return out;
}

}  // namespace wmsn
