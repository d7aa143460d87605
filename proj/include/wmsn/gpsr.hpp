#pragma once

#include <limits>
#include <vector>

#include "wmsn/geometry.hpp"
#include "wmsn/topology.hpp"

namespace wmsn {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class PlanarizationRule { Gabriel, RelativeNeighborhood };

const char* to_string(PlanarizationRule r);

using PlanarAdjacency = std::vector<std::vector<NodeId>>;

// Full-graph planar subgraph of the unit-disc graph. Gabriel: drop (u, v)
// when any third node lies strictly inside the circle with diameter uv.
// RelativeNeighborhood: drop when any witness is strictly closer to both
// endpoints than they are to each other.
PlanarAdjacency planarize(const Deployment& dep,
                          PlanarizationRule rule = PlanarizationRule::Gabriel);

struct GpsrNeighbor {
  NodeId id = 0;
  Position pos;
};

// Same edge rule applied to one node's neighbor table. Witness candidates
// inside the test regions are always mutual neighbors, so the local view
// agrees with the full-graph computation.
std::vector<GpsrNeighbor> planar_filter(Position self,
                                        const std::vector<GpsrNeighbor>& nbrs,
                                        PlanarizationRule rule);

enum class GpsrMode { Greedy, Perimeter };

// Carried in the packet while it detours around a void. entry_point is where
// greedy failed; face routing hands the packet around faces of the planar
// graph, changing face whenever the outgoing edge crosses the entry->dest
// segment nearer the destination than any previous crossing. first_* pin the
// first edge of the current face: taking it twice means the destination is
// unreachable.
struct PerimeterHeader {
  GpsrMode mode = GpsrMode::Greedy;
  Position entry_point;
  double crossing_dist = 0.0;
  NodeId first_sender = kNoNode;
  NodeId first_receiver = kNoNode;
};

struct GpsrInput {
  NodeId self = 0;
  Position self_pos;
  Position dest_pos;
  NodeId prev = kNoNode;  // node the packet arrived from, if any
  Position prev_pos;
  std::vector<GpsrNeighbor> neighbors;  // current (cached) neighbor table
  PlanarizationRule rule = PlanarizationRule::Gabriel;
};

struct GpsrDecision {
  enum class Action { Forward, Drop };
  Action action = Action::Drop;
  NodeId next = kNoNode;
  GpsrMode mode_used = GpsrMode::Greedy;
  bool entered_perimeter = false;  // greedy failed during this decision
  PerimeterHeader header;
  const char* drop_detail = "";
};

// One forwarding decision. Greedy picks the strictly-closer neighbor nearest
// the destination; on failure the packet enters perimeter mode and follows
// the right-hand rule over the planar subgraph until it reaches a node
// strictly closer than entry_point, which resumes greedy.
GpsrDecision gpsr_forward(const GpsrInput& in, PerimeterHeader header);

}  // namespace wmsn
