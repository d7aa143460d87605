#include "wmsn/topology.hpp"

#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "wmsn/rng.hpp"

namespace wmsn {

const char* to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Source: return "source";
    case NodeRole::Sink: return "sink";
    case NodeRole::Relay: return "relay";
  }
  return "relay";
}

NodeRole role_from_string(const std::string& s) {
  if (s == "source") return NodeRole::Source;
  if (s == "sink") return NodeRole::Sink;
  if (s == "relay") return NodeRole::Relay;
  throw TopologyError("unknown node role: " + s);
}

NodeId Deployment::source_id() const {
  for (const auto& n : nodes)
    if (n.role == NodeRole::Source) return n.id;
  throw TopologyError("deployment has no source");
}

NodeId Deployment::sink_id() const {
  for (const auto& n : nodes)
    if (n.role == NodeRole::Sink) return n.id;
  throw TopologyError("deployment has no sink");
}

std::vector<NodeId> Deployment::neighbors(NodeId id) const {
  std::vector<NodeId> out;
  const Position p = node(id).pos;
  for (const auto& n : nodes) {
    if (n.id == id) continue;
    if (distance(p, n.pos) <= radio_range) out.push_back(n.id);
  }
  return out;
}

std::vector<std::vector<NodeId>> Deployment::adjacency() const {
  std::vector<std::vector<NodeId>> adj(nodes.size());
  for (const auto& n : nodes) adj[n.id] = neighbors(n.id);
  return adj;
}

bool Deployment::source_sink_connected() const {
  const NodeId src = source_id();
  const NodeId dst = sink_id();
  std::vector<bool> seen(nodes.size(), false);
  std::queue<NodeId> frontier;
  frontier.push(src);
  seen[src] = true;
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    if (u == dst) return true;
    for (NodeId v : neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  return false;
}

namespace {

constexpr Position kSourcePos{10.0, 90.0};
constexpr Position kSinkPos{490.0, 90.0};

bool inside_hole(Position p, const std::vector<Hole>& holes) {
  for (const auto& h : holes)
    if (distance(p, h.center) < h.radius) return true;
  return false;
}

bool too_close(Position p, const std::vector<DeployedNode>& placed,
               double min_sep) {
  for (const auto& n : placed)
    if (distance(p, n.pos) <= min_sep) return true;
  return false;
}

Deployment place_once(int n_relays, const Field& field,
                      const std::vector<Hole>& holes, std::uint64_t seed,
                      const GenOptions& opt) {
  Deployment dep;
  dep.field = field;
  dep.radio_range = opt.radio_range;
  dep.nodes.push_back({0, kSourcePos, NodeRole::Source});
  dep.nodes.push_back({1, kSinkPos, NodeRole::Sink});
  RngStream rng(seed);
  for (int i = 0; i < n_relays; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < opt.max_place_attempts; ++attempt) {
      Position p{rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
      if (inside_hole(p, holes)) continue;
      if (too_close(p, dep.nodes, opt.min_separation)) continue;
      dep.nodes.push_back(
          {static_cast<NodeId>(dep.nodes.size()), p, NodeRole::Relay});
      placed = true;
      break;
    }
    if (!placed) {
      std::ostringstream msg;
      msg << "could not place relay " << i << " of " << n_relays << " after "
          << opt.max_place_attempts << " attempts";
      throw TopologyError(msg.str());
    }
  }
  return dep;
}

}  // namespace

Deployment gen_holes(int n_relays, const Field& field,
                     const std::vector<Hole>& holes, std::uint64_t seed,
                     const GenOptions& opt) {
  if (n_relays < 0) throw TopologyError("negative relay count");
  for (const auto& h : holes)
    if (h.radius < 0.0) throw TopologyError("negative hole radius");
  if (inside_hole(kSourcePos, holes) || inside_hole(kSinkPos, holes))
    throw TopologyError("hole covers the pinned source or sink position");

  int resamples = 0;
  for (;; ++resamples) {
    std::uint64_t attempt_seed = resamples == 0 ? seed : mix_seed(seed, resamples);
    Deployment dep = place_once(n_relays, field, holes, attempt_seed, opt);
    dep.resample_count = resamples;
    if (!opt.require_connected || dep.source_sink_connected()) return dep;
    if (resamples >= opt.max_connect_resamples)
      throw TopologyError("no connected deployment after " +
                          std::to_string(resamples + 1) + " samples");
  }
}

Deployment gen_plain(int n_relays, const Field& field, std::uint64_t seed,
                     const GenOptions& opt) {
  return gen_holes(n_relays, field, {}, seed, opt);
}

Deployment gen_grid(double radio_range) {
  Deployment dep;
  dep.field = Field{};
  dep.radio_range = radio_range;
  dep.nodes.push_back({0, kSourcePos, NodeRole::Source});
  dep.nodes.push_back({1, kSinkPos, NodeRole::Sink});
  // Columns 55..445 step 78, rows 10..190 step 60.
  for (int c = 0; c < 6; ++c) {
    for (int r = 0; r < 4; ++r) {
      Position p{55.0 + 78.0 * c, 10.0 + 60.0 * r};
      dep.nodes.push_back(
          {static_cast<NodeId>(dep.nodes.size()), p, NodeRole::Relay});
    }
  }
  return dep;
}

std::string deployment_to_json(const Deployment& dep) {
  nlohmann::json j;
  j["field"] = {{"width", dep.field.width}, {"height", dep.field.height}};
  j["radio_range"] = dep.radio_range;
  j["resample_count"] = dep.resample_count;
  auto& arr = j["nodes"] = nlohmann::json::array();
  for (const auto& n : dep.nodes) {
    arr.push_back({{"id", n.id},
                   {"x", n.pos.x},
                   {"y", n.pos.y},
                   {"role", to_string(n.role)}});
  }
  return j.dump(2) + "\n";
}

Deployment deployment_from_json(const std::string& text) {
  Deployment dep;
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    dep.field.width = j.at("field").at("width").get<double>();
    dep.field.height = j.at("field").at("height").get<double>();
    dep.radio_range = j.at("radio_range").get<double>();
    dep.resample_count = j.value("resample_count", 0);
    for (const auto& n : j.at("nodes")) {
      dep.nodes.push_back({n.at("id").get<NodeId>(),
                           {n.at("x").get<double>(), n.at("y").get<double>()},
                           role_from_string(n.at("role").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw TopologyError(std::string("bad deployment document: ") + e.what());
  }
  for (std::size_t i = 0; i < dep.nodes.size(); ++i)
    if (dep.nodes[i].id != i)
      throw TopologyError("node ids must be dense and ascending");
  return dep;
}

void save_deployment(const Deployment& dep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TopologyError("cannot write " + path);
  out << deployment_to_json(dep);
}

Deployment load_deployment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deployment_from_json(ss.str());
}

}  // namespace wmsn
