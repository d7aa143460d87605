#pragma once

#include <optional>
#include <vector>

#include "wmsn/geometry.hpp"
#include "wmsn/rng.hpp"
#include "wmsn/topology.hpp"

namespace wmsn {

struct Candidate {
  NodeId id = 0;
  Position pos;
};

// A forwarding decision point: who is choosing, where the packet is headed,
// and which neighbors are on offer. Callers pre-filter the candidate list
// (e.g. to strictly-closer neighbors) when the protocol calls for it.
struct CandidateView {
  Position self;
  Position dest;
  std::vector<Candidate> candidates;
};

enum class Policy {
  Compass,              // smallest angle to the destination line
  RandomCompass,        // random pick between best candidate above and below
  Greedy,               // closest to the destination
  Mfr,                  // most forward progress along the destination line
  NearestWithinAngle,   // nearest to self with angle <= alpha
  FarthestWithinAngle,  // farthest from self with angle <= alpha
  GreedyCompass,        // closer-to-dest of the tightest straddling pair
};

struct PolicyKind {
  Policy policy = Policy::Greedy;
  AngleDeg alpha = 180.0;  // NearestWithinAngle / FarthestWithinAngle only
};

// Selects the next hop, or nullopt when no candidate qualifies. All ties
// break toward the lowest node id. Only RandomCompass draws from rng, and
// only when it actually has two distinct options.
std::optional<NodeId> select_next_hop(const CandidateView& view,
                                      const PolicyKind& kind, RngStream& rng);

}  // namespace wmsn
