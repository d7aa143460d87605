#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmsn/topology.hpp"

namespace wmsn {

// Node-disjoint source->sink paths computed offline before traffic starts.
struct TpgfPathSet {
  std::vector<std::vector<NodeId>> paths;  // each begins at source, ends at sink
};

// Exploration marks shared across repeated explorations of one deployment:
// consumed nodes sit on an accepted path's interior, blocked nodes dead-ended.
struct TpgfLabels {
  std::vector<char> consumed;
  std::vector<char> blocked;
  explicit TpgfLabels(std::size_t n) : consumed(n, 0), blocked(n, 0) {}
};

// Depth-first greedy advance: always step to the unlabeled neighbor closest
// to the sink; a node with no usable neighbor is marked blocked and the walk
// steps back. nullopt once the source itself is blocked.
std::optional<std::vector<NodeId>> tpgf_explore(
    const std::vector<std::vector<NodeId>>& adj,
    const std::vector<Position>& pos, NodeId source, NodeId sink,
    double radio_range, TpgfLabels& labels);

// Path optimization: repeatedly shortcut hop subsequences whose endpoints are
// radio neighbors, until no shortcut remains.
std::vector<NodeId> tpgf_optimize(std::vector<NodeId> path,
                                  const std::vector<Position>& pos,
                                  double radio_range);

// Explore + optimize until exploration fails or max_paths is hit (0 = no
// cap). Interior nodes of each accepted path are consumed, so paths share
// only the endpoints.
TpgfPathSet tpgf_multipath(const Deployment& dep, int max_paths = 0);

std::string pathset_to_json(const TpgfPathSet& ps);
TpgfPathSet pathset_from_json(const std::string& text);

}  // namespace wmsn
