#include "wmsn/policies.hpp"

#include <algorithm>
#include <cmath>

namespace wmsn {

namespace {

// argmin by key with ties toward the lowest id.
template <typename Key>
std::optional<NodeId> pick_min(const std::vector<Candidate>& cands, Key key) {
  std::optional<NodeId> best;
  double best_key = 0.0;
  for (const auto& c : cands) {
    double k = key(c);
    if (!best || k < best_key || (k == best_key && c.id < *best)) {
      best = c.id;
      best_key = k;
    }
  }
  return best;
}

const Candidate& by_id(const std::vector<Candidate>& cands, NodeId id) {
  return *std::find_if(cands.begin(), cands.end(),
                       [&](const Candidate& c) { return c.id == id; });
}

std::optional<NodeId> greedy_compass(const CandidateView& v) {
  if (v.candidates.empty()) return std::nullopt;
  // Tightest candidate counterclockwise and clockwise of the line to dest.
  // A candidate exactly on the line (signed angle 0) is tightest on both.
  std::vector<Candidate> ccw, cw;
  for (const auto& c : v.candidates) {
    double s = signed_angle(v.self, c.pos, v.dest);
    if (s >= 0.0) ccw.push_back(c);
    if (s <= 0.0) cw.push_back(c);
  }
  auto offset = [&](const Candidate& c) {
    return angle_offset(v.self, c.pos, v.dest);
  };
  std::optional<NodeId> v1 = pick_min(ccw, offset);
  std::optional<NodeId> v2 = pick_min(cw, offset);
  if (!v1 || !v2) {
    // Everything sits strictly on one side: take the two tightest there.
    const auto& side = v1 ? ccw : cw;
    v1 = pick_min(side, offset);
    std::vector<Candidate> rest;
    for (const auto& c : side)
      if (c.id != *v1) rest.push_back(c);
    v2 = pick_min(rest, offset);
    if (!v2) return v1;  // lone candidate
  }
  if (*v1 == *v2) return v1;
  double d1 = distance(by_id(v.candidates, *v1).pos, v.dest);
  double d2 = distance(by_id(v.candidates, *v2).pos, v.dest);
  if (d1 < d2) return v1;
  if (d2 < d1) return v2;
  return std::min(*v1, *v2);
}

}  // namespace

std::optional<NodeId> select_next_hop(const CandidateView& v,
                                      const PolicyKind& kind, RngStream& rng) {
  const auto& cands = v.candidates;
  if (cands.empty()) return std::nullopt;
  switch (kind.policy) {
    case Policy::Compass:
      return pick_min(cands, [&](const Candidate& c) {
        return angle_offset(v.self, c.pos, v.dest);
      });
    case Policy::RandomCompass: {
      // Tightest candidate on each side of the line to dest; a candidate on
      // the line itself counts as the non-negative side.
      std::vector<Candidate> above, below;
      for (const auto& c : cands) {
        double s = signed_angle(v.self, c.pos, v.dest);
        (s >= 0.0 ? above : below).push_back(c);
      }
      auto offset = [&](const Candidate& c) {
        return angle_offset(v.self, c.pos, v.dest);
      };
      auto v1 = pick_min(above, offset);
      auto v2 = pick_min(below, offset);
      if (v1 && v2) return (rng.bits() & 1) == 0 ? v1 : v2;
      return v1 ? v1 : v2;
    }
    case Policy::Greedy:
      return pick_min(
          cands, [&](const Candidate& c) { return distance(c.pos, v.dest); });
    case Policy::Mfr:
      // Distance from the projection of the candidate onto the line to dest;
      // minimizing it maximizes forward progress.
      return pick_min(cands, [&](const Candidate& c) {
        return distance(v.self, v.dest) -
               projection_advance(v.self, c.pos, v.dest);
      });
    case Policy::NearestWithinAngle:
    case Policy::FarthestWithinAngle: {
      std::vector<Candidate> in_cone;
      for (const auto& c : cands)
        if (angle_offset(v.self, c.pos, v.dest) <= kind.alpha)
          in_cone.push_back(c);
      bool nearest = kind.policy == Policy::NearestWithinAngle;
      return pick_min(in_cone, [&](const Candidate& c) {
        double d = distance(v.self, c.pos);
        return nearest ? d : -d;
      });
    }
    case Policy::GreedyCompass:
      return greedy_compass(v);
  }
  return std::nullopt;
}

}  // namespace wmsn
