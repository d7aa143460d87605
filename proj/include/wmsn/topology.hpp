#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmsn/geometry.hpp"

namespace wmsn {

using NodeId = std::uint32_t;

enum class NodeRole { Source, Sink, Relay };

const char* to_string(NodeRole r);
NodeRole role_from_string(const std::string& s);

struct Field {
  double width = 500.0;   // meters
  double height = 200.0;  // meters
};

// Circular exclusion zone; no node is placed strictly inside it.
struct Hole {
  Position center;
  double radius = 0.0;
};

struct DeployedNode {
  NodeId id = 0;
  Position pos;
  NodeRole role = NodeRole::Relay;
};

// Thrown when placement or connectivity requirements cannot be met.
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Deployment {
public:
  std::vector<DeployedNode> nodes;  // indexed by id
  double radio_range = 80.0;        // meters, boundary inclusive
  Field field;
  int resample_count = 0;  // whole-deployment retries spent on connectivity

  const DeployedNode& node(NodeId id) const { return nodes.at(id); }
  NodeId source_id() const;
  NodeId sink_id() const;

  // Unit-disc adjacency: distance <= radio_range, id ascending.
  std::vector<NodeId> neighbors(NodeId id) const;
  std::vector<std::vector<NodeId>> adjacency() const;

  // Flood fill from the source over the unit-disc graph.
  bool source_sink_connected() const;
};

struct GenOptions {
  double min_separation = 1.0;  // strict lower bound on pairwise distance
  double radio_range = 80.0;
  bool require_connected = true;
  int max_place_attempts = 10000;  // per node
  int max_connect_resamples = 64;  // whole-deployment retries
};

// Uniform random placement of n relays plus the pinned source (10, 90) and
// sink (490, 90). Same inputs always produce the same deployment.
Deployment gen_plain(int n_relays, const Field& field, std::uint64_t seed,
                     const GenOptions& opt = {});

// gen_plain with circular exclusion zones. A zero-radius hole excludes
// nothing, so the result matches gen_plain for the same seed.
Deployment gen_holes(int n_relays, const Field& field,
                     const std::vector<Hole>& holes, std::uint64_t seed,
                     const GenOptions& opt = {});

// Fixed 26-node lattice: 6x4 relays spaced 78 m x 60 m plus source and sink.
// Axis-aligned lattice neighbors are in range at 80 m, diagonals are not.
Deployment gen_grid(double radio_range = 80.0);

// JSON round trip. Positions survive byte-exactly.
std::string deployment_to_json(const Deployment& dep);
Deployment deployment_from_json(const std::string& text);
void save_deployment(const Deployment& dep, const std::string& path);
Deployment load_deployment(const std::string& path);

}  // namespace wmsn
