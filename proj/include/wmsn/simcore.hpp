#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmsn/gpsr.hpp"
#include "wmsn/scenario.hpp"
#include "wmsn/topology.hpp"
#include "wmsn/tpgf.hpp"

namespace wmsn {

// A post-run invariant did not hold (packet or energy conservation, event
// causality). Always a bug or a corrupted input, never a tuning matter.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PacketKind { Data, Beacon, VoidAnnouncement };

enum class DropReason {
  QueueOverflow,
  DeadNode,       // dead source, dead receiver, or died with packets queued
  IsolatedVoid,   // walking back found no delegate
  PerimeterLoop,  // face tour closed without reaching the destination
  NoRoute,        // no precomputed path available
};

const char* to_string(DropReason r);

constexpr int kTrailCap = 32;

struct Packet {
  std::uint32_t stream = 0;
  NodeId source = 0;
  NodeId sink = 0;
  std::uint32_t seq = 0;
  int hop_count = 0;  // incremented by each sender at transmission
  double size_bits = 0.0;
  double created_at = 0.0;
  double delivered_at = -1.0;
  PacketKind kind = PacketKind::Data;

  NodeId prev = kNoNode;  // forwarder the packet arrived from
  Position prev_pos;
  PerimeterHeader gpsr;
  int tpgf_path = -1;
  int tpgf_pos = 0;

  std::vector<NodeId> trail;  // last kTrailCap forwarders, walk-back guard
};

struct DeliveryRecord {
  std::uint32_t stream = 0;
  std::uint32_t seq = 0;
  double created_at = 0.0;
  double delivered_at = 0.0;
  int hop_count = 0;
  bool duplicate = false;
};

struct DropRecord {
  double time = 0.0;
  NodeId node = 0;
  DropReason reason = DropReason::QueueOverflow;
  std::uint32_t stream = 0;
  std::uint32_t seq = 0;
  int hop_count = 0;
  std::string detail;
};

// (time, from, to, seq): every data-packet transmission decision. Collected
// when trace.paths is set.
struct ForwardRecord {
  double time = 0.0;
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t seq = 0;
};

struct RunResult {
  int sent = 0;
  int delivered = 0;
  int duplicates = 0;
  std::map<DropReason, int> drops;
  std::vector<DeliveryRecord> deliveries;
  std::vector<DropRecord> drop_records;
  std::vector<ForwardRecord> forwards;  // when trace.paths

  std::vector<double> final_residual_j;  // by node id
  double initial_energy_j = 0.0;         // per node
  double total_debited_j = 0.0;
  int clamp_events = 0;

  std::vector<int> data_tx_count;  // per node, data packets transmitted
  int walkback_episodes = 0;
  int perimeter_entries = 0;
  std::vector<std::pair<double, NodeId>> self_block_times;
  TpgfPathSet tpgf_paths;  // populated for the offline multipath protocol

  std::string decision_trace_csv;  // when trace.decisions
  std::string event_trace_csv;     // when trace.events
  double end_time_s = 0.0;

  int total_drops() const {
    int n = 0;
    for (const auto& [r, c] : drops) n += c;
    return n;
  }
};

// Runs the scenario over the given deployment to completion: every offered
// packet is delivered or dropped. Deterministic: same inputs, same result.
// Throws IntegrityError when a conservation check fails afterwards.
RunResult run_simulation(const Scenario& sc, const Deployment& dep);

}  // namespace wmsn
