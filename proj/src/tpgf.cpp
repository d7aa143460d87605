#include "wmsn/tpgf.hpp"

#include <algorithm>

#include "json.hpp"

namespace wmsn {

std::optional<std::vector<NodeId>> tpgf_explore(
    const std::vector<std::vector<NodeId>>& adj,
    const std::vector<Position>& pos, NodeId source, NodeId sink,
    double radio_range, TpgfLabels& labels) {
  (void)radio_range;
  std::vector<NodeId> path{source};
  std::vector<char> on_path(adj.size(), 0);
  on_path[source] = 1;
  while (true) {
    NodeId u = path.back();
    const NodeId* best = nullptr;
    double best_d = 0.0;
    for (const NodeId& v : adj[u]) {
      if (labels.consumed[v] || labels.blocked[v] || on_path[v]) continue;
      double d = distance(pos[v], pos[sink]);
      if (!best || d < best_d || (d == best_d && v < *best)) {
        best = &v;
        best_d = d;
      }
    }
    if (!best) {
      labels.blocked[u] = 1;
      if (u == source) return std::nullopt;
      path.pop_back();
      continue;
    }
    path.push_back(*best);
    on_path[*best] = 1;
    if (*best == sink) return path;
  }
}

std::vector<NodeId> tpgf_optimize(std::vector<NodeId> path,
                                  const std::vector<Position>& pos,
                                  double radio_range) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 2 < path.size() && !changed; ++i) {
      // farthest node down the path still reachable in one hop from path[i]
      for (std::size_t k = path.size() - 1; k > i + 1; --k) {
        if (distance(pos[path[i]], pos[path[k]]) <= radio_range) {
          path.erase(path.begin() + static_cast<long>(i) + 1,
                     path.begin() + static_cast<long>(k));
          changed = true;
          break;
        }
      }
    }
  }
  return path;
}

TpgfPathSet tpgf_multipath(const Deployment& dep, int max_paths) {
  auto adj = dep.adjacency();
  std::vector<Position> pos(dep.nodes.size());
  for (const auto& n : dep.nodes) pos[n.id] = n.pos;
  NodeId source = dep.source_id();
  NodeId sink = dep.sink_id();

  TpgfLabels labels(dep.nodes.size());
  TpgfPathSet out;
  while (max_paths <= 0 || static_cast<int>(out.paths.size()) < max_paths) {
    auto found = tpgf_explore(adj, pos, source, sink, dep.radio_range, labels);
    if (!found) break;
    auto path = tpgf_optimize(std::move(*found), pos, dep.radio_range);
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
      labels.consumed[path[i]] = 1;
    out.paths.push_back(std::move(path));
  }
  return out;
}

std::string pathset_to_json(const TpgfPathSet& ps) {
  nlohmann::json j;
  j["paths"] = ps.paths;
  return j.dump(2) + "\n";
}

TpgfPathSet pathset_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TpgfPathSet ps;
  ps.paths = j.at("paths").get<std::vector<std::vector<NodeId>>>();
  return ps;
}

}  // namespace wmsn
