#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "wmsn/geometry.hpp"
#include "wmsn/topology.hpp"

namespace wmsn {

// Adaptive compass sweep. The cone halts at the first width holding at least
// n_min candidates. geams_mode skips the sweep entirely: the cone is pinned
// fully open and a single candidate suffices.
struct CompassConfig {
  AngleDeg alpha0 = 30.0;
  AngleDeg delta_alpha = 10.0;
  AngleDeg alpha_max = 180.0;
  int n_min = 2;
  bool geams_mode = false;
};

struct ScoredCandidate {
  NodeId id = 0;
  Position pos;
  double score = 0.0;
};

struct AdaptiveResult {
  std::vector<ScoredCandidate> candidates;  // inside the final cone
  AngleDeg final_alpha = 0.0;
};

// `closer` must already be filtered to neighbors strictly closer to dest and
// not void-blocked. Returns nullopt when even the fully open cone is empty,
// i.e. the caller has to walk the packet back.
std::optional<AdaptiveResult> adaptive_candidates(
    Position self, Position dest, const std::vector<ScoredCandidate>& closer,
    const CompassConfig& cfg);

// Candidates ranked by score, best first; ties rank the lower id first.
// j is the 1-based index whose score sits closest to the set mean (ties to
// the lower index).
struct BestNeighborSet {
  std::vector<ScoredCandidate> entries;
  int j = 1;
  int m() const { return static_cast<int>(entries.size()); }
};

BestNeighborSet build_best_neighbor_set(std::vector<ScoredCandidate> cands);

// Per-source forwarding state: the running hop-count reference H and the
// stored mean index j.
struct StreamEntry {
  int hop_reference = 0;  // H
  int mean_index = 1;     // j
};

struct SmartDecision {
  NodeId next = 0;
  int index = 1;  // 1-based position used in the ranked set
  StreamEntry state;
};

// One forwarding step. An unknown stream (nullopt) takes the top-ranked
// neighbor and records (packet hop count, j). A known stream walks the set
// by the hop-count deviation, folding out-of-range indices back onto the
// boundary while re-centering H. bns.m() must be >= 1.
SmartDecision smart_forward(const std::optional<StreamEntry>& stored,
                            const BestNeighborSet& bns, int packet_hop_count);

// Void bookkeeping, per sink. `blocked` holds neighbors that have announced
// a void; `self_blocked` the sinks this node itself announced for.
struct VoidState {
  std::set<std::pair<NodeId, NodeId>> blocked;  // (announcer, sink)
  std::set<NodeId> self_blocked;                // sink

  bool is_blocked(NodeId neighbor, NodeId sink) const {
    return blocked.count({neighbor, sink}) > 0;
  }
  // Idempotent.
  void note_announcement(NodeId announcer, NodeId sink) {
    blocked.insert({announcer, sink});
  }
};

struct WalkBackNeighbor {
  NodeId id = 0;
  Position pos;
};

// Delegate for a stuck packet: the nearest neighbor that has not announced a
// void for this sink and is not on the packet's recent trail. nullopt means
// the void is isolated and the packet is lost.
std::optional<NodeId> pick_walkback_delegate(
    Position self, NodeId sink, const std::vector<WalkBackNeighbor>& neighbors,
    const VoidState& voids, const std::vector<NodeId>& trail);

}  // namespace wmsn
