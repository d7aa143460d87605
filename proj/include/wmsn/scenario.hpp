#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmsn/agem.hpp"
#include "wmsn/energy.hpp"
#include "wmsn/gpsr.hpp"
#include "wmsn/topology.hpp"

namespace wmsn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Protocol { Agem, Geams, Gpsr, Tpgf };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

struct TopologySpec {
  enum class Kind { Plain, Holes, Grid, File };
  Kind kind = Kind::Plain;
  int n_relays = 30;
  Field field;
  std::vector<Hole> holes;
  double radio_range = 80.0;
  double min_separation = 1.0;
  bool require_connected = true;
  std::string file;  // kind == File

  std::string label() const;
  // Total node count for generated kinds (relays + source + sink).
  int node_count() const;
};

// Builds the deployment for one (spec, seed) pair.
Deployment realize_topology(const TopologySpec& spec, std::uint64_t seed);

struct TrafficSpec {
  int images = 30;
  double image_bits = 10000.0;
  double image_period_s = 1.0;
  double packet_bits = 1000.0;
  int packets_per_image() const;
};

struct LinkModel {
  double data_rate_bps = 250000.0;
  double per_hop_processing_s = 0.001;
  int queue_capacity = 20;
};

struct BeaconConfig {
  bool enabled = true;
  double interval_s = 1.0;
  double bits = 200.0;
  bool spend_energy = true;
  int stale_intervals = 3;  // evict after this many silent intervals
};

struct TraceConfig {
  bool decisions = false;
  bool events = false;
  bool paths = false;  // per-packet node visit records
};

struct Scenario {
  Protocol protocol = Protocol::Agem;
  TopologySpec topology;
  std::uint64_t seed = 1;
  TrafficSpec traffic;
  LinkModel link;
  EnergyModelParams energy;
  double initial_energy_j = 1.0;
  BeaconConfig beacon;
  CompassConfig compass;  // adaptive forwarding protocols
  PlanarizationRule planarization = PlanarizationRule::Gabriel;
  int tpgf_max_paths = 0;  // 0 = all node-disjoint paths
  TraceConfig trace;

  std::string run_id() const;
};

// A cartesian sweep: protocols x topologies x seeds over shared parameters.
struct ExperimentPlan {
  std::vector<Protocol> protocols;
  std::vector<TopologySpec> topologies;
  std::vector<std::uint64_t> seeds;
  TrafficSpec traffic;
  LinkModel link;
  EnergyModelParams energy;
  double initial_energy_j = 1.0;
  BeaconConfig beacon;
  CompassConfig compass;
  PlanarizationRule planarization = PlanarizationRule::Gabriel;
  int tpgf_max_paths = 0;
  TraceConfig trace;
  std::string out_dir = "out";

  std::vector<Scenario> scenarios() const;
};

// Strict parsers: unknown keys anywhere are an error.
ExperimentPlan plan_from_json(const std::string& text);
std::string plan_to_json(const ExperimentPlan& plan);  // all fields resolved
std::string scenario_to_json(const Scenario& s);

}  // namespace wmsn
