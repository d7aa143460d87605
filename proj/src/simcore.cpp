#include "wmsn/simcore.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <sstream>

#include "wmsn/agem.hpp"
#include "wmsn/energy.hpp"

namespace wmsn {

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::QueueOverflow: return "queue-overflow";
    case DropReason::DeadNode: return "dead-node";
    case DropReason::IsolatedVoid: return "isolated-void";
    case DropReason::PerimeterLoop: return "perimeter-loop";
    case DropReason::NoRoute: return "no-route";
  }
  return "unknown";
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct NeighborEntry {
  Position pos;
  double energy = 0.0;
  double last_heard = 0.0;
};

struct NodeSim {
  EnergyStore store;
  std::map<NodeId, NeighborEntry> table;  // ordered: deterministic iteration
  std::deque<Packet> queue;               // front is in service while busy
  bool busy = false;
};

struct Ev {
  enum Kind { ImageEmit, Arrival, TxDone, BeaconTick, Announce };
  double t = 0.0;
  std::uint64_t order = 0;
  Kind kind = ImageEmit;
  NodeId node = 0;
  Packet pk;
  int image = 0;
  NodeId announcer = kNoNode;
  NodeId announce_sink = kNoNode;
};

struct EvAfter {
  bool operator()(const Ev& a, const Ev& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.order > b.order;  // FIFO among equal times
  }
};

struct Decision {
  enum Action { Forward, Drop } action = Drop;
  NodeId next = kNoNode;
  DropReason reason = DropReason::NoRoute;
  const char* detail = "";
  bool walkback = false;  // this hop hands the packet backward
};

class Sim {
 public:
  Sim(const Scenario& sc, const Deployment& dep)
      : sc_(sc), dep_(dep), n_(dep.nodes.size()) {
    source_ = dep_.source_id();
    sink_ = dep_.sink_id();
    pos_.resize(n_);
    for (const auto& nd : dep_.nodes) pos_[nd.id] = nd.pos;
    adj_ = dep_.adjacency();
    nodes_.resize(n_);
    for (auto& ns : nodes_)
      ns.store = EnergyStore{sc_.initial_energy_j, sc_.initial_energy_j};
    for (NodeId u = 0; u < n_; ++u)
      for (NodeId v : adj_[u])
        nodes_[u].table[v] = {pos_[v], sc_.initial_energy_j, 0.0};
    streams_.resize(n_);
    voids_.resize(n_);
    result_.data_tx_count.assign(n_, 0);
    result_.initial_energy_j = sc_.initial_energy_j;
    hop_budget_ = 20 * static_cast<int>(n_) + 200;
    if (sc_.protocol == Protocol::Tpgf)
      result_.tpgf_paths = tpgf_multipath(dep_, sc_.tpgf_max_paths);
    if (sc_.trace.decisions)
      dec_trace_ << "time_s,node,stream,seq,mode,alpha_deg,index,m,next,scores\n";
    if (sc_.trace.events)
      ev_trace_ << "time_s,event,node,stream,seq,detail\n";
  }

  RunResult run() {
    // Beacons are scheduled ahead of traffic so that at shared instants the
    // table refresh lands before the forwarding decision.
    if (sc_.beacon.enabled)
      for (NodeId u = 0; u < n_; ++u) schedule_beacon(u, sc_.beacon.interval_s);
    if (sc_.traffic.images > 0) schedule_emit(0, 0.0);

    const double max_time =
        sc_.traffic.images * sc_.traffic.image_period_s + 3600.0;
    while (!heap_.empty()) {
      if (images_emitted_ == sc_.traffic.images && outstanding_ == 0) break;
      Ev ev = heap_.top();
      heap_.pop();
      if (ev.t + 1e-12 < now_)
        throw IntegrityError("event time went backwards");
      if (ev.t > max_time)
        throw IntegrityError("simulation did not converge");
      now_ = std::max(now_, ev.t);
      dispatch(ev);
    }
    finish();
    return std::move(result_);
  }

 private:
  // --- event plumbing -----------------------------------------------------
  void push(Ev ev) {
    ev.order = next_order_++;
    heap_.push(std::move(ev));
  }

  void schedule_beacon(NodeId u, double t) {
    Ev ev;
    ev.t = t;
    ev.kind = Ev::BeaconTick;
    ev.node = u;
    push(ev);
  }

  void schedule_emit(int image, double t) {
    Ev ev;
    ev.t = t;
    ev.kind = Ev::ImageEmit;
    ev.node = source_;
    ev.image = image;
    push(ev);
  }

  void dispatch(const Ev& ev) {
    switch (ev.kind) {
      case Ev::ImageEmit: emit_image(ev.image); break;
      case Ev::Arrival: arrival(ev.node, ev.pk); break;
      case Ev::TxDone: tx_done(ev.node); break;
      case Ev::BeaconTick: beacon_tick(ev.node); break;
      case Ev::Announce: announce(ev.node, ev.announcer, ev.announce_sink); break;
    }
  }

  bool alive(NodeId u) const { return nodes_[u].store.alive(); }

  // --- energy ---------------------------------------------------------------
  void spend(NodeId u, double amount) {
    auto& st = nodes_[u].store;
    double applied = std::min(st.residual, amount);
    if (applied < amount) ++result_.clamp_events;
    bool was_alive = st.alive();
    st = debit(st, amount);
    result_.total_debited_j += applied;
    if (was_alive && !st.alive()) on_death(u);
  }

  void on_death(NodeId u) {
    trace_event("death", u, 0, 0, "");
    auto& q = nodes_[u].queue;
    std::size_t keep = nodes_[u].busy ? 1 : 0;  // in-service packet still flies
    for (std::size_t i = keep; i < q.size(); ++i)
      drop_packet(q[i], u, DropReason::DeadNode, "node-died");
    q.erase(q.begin() + static_cast<std::ptrdiff_t>(keep), q.end());
  }

  // --- traffic ----------------------------------------------------------------
  void emit_image(int image) {
    ++images_emitted_;
    if (image + 1 < sc_.traffic.images)
      schedule_emit(image + 1, (image + 1) * sc_.traffic.image_period_s);
    const auto& tr = sc_.traffic;
    int count = tr.packets_per_image();
    for (int f = 0; f < count; ++f) {
      Packet pk;
      pk.stream = 0;
      pk.source = source_;
      pk.sink = sink_;
      pk.seq = next_seq_++;
      pk.size_bits = std::min(tr.packet_bits, tr.image_bits - f * tr.packet_bits);
      pk.created_at = now_;
      ++result_.sent;
      ++outstanding_;
      trace_event("create", source_, pk.stream, pk.seq, "");
      if (sc_.protocol == Protocol::Tpgf) {
        if (result_.tpgf_paths.paths.empty()) {
          drop_packet(pk, source_, DropReason::NoRoute, "no-paths");
          continue;
        }
        pk.tpgf_path =
            static_cast<int>(pk.seq % result_.tpgf_paths.paths.size());
        pk.tpgf_pos = 0;
      }
      if (!alive(source_)) {
        drop_packet(pk, source_, DropReason::DeadNode, "source-dead");
        continue;
      }
      enqueue_or_drop(source_, std::move(pk));
    }
  }

  // --- queueing & transmission ---------------------------------------------
  void enqueue_or_drop(NodeId u, Packet pk) {
    auto& ns = nodes_[u];
    if (static_cast<int>(ns.queue.size()) >= sc_.link.queue_capacity) {
      drop_packet(pk, u, DropReason::QueueOverflow, "queue-full");
      return;
    }
    ns.queue.push_back(std::move(pk));
    start_service(u);
  }

  void start_service(NodeId u) {
    auto& ns = nodes_[u];
    while (!ns.busy && !ns.queue.empty()) {
      if (!ns.store.alive()) {
        while (!ns.queue.empty()) {
          drop_packet(ns.queue.front(), u, DropReason::DeadNode, "node-dead");
          ns.queue.pop_front();
        }
        break;
      }
      Packet& pk = ns.queue.front();
      Decision d = route(u, pk);
      if (d.action == Decision::Drop) {
        drop_packet(pk, u, d.reason, d.detail);
        ns.queue.pop_front();
        continue;
      }
      pk.hop_count += 1;
      // The trail lists nodes that delegated this packet backward, not every
      // forwarder: a stuck node may hand the packet to upstream nodes it has
      // visited, it just must not be chosen as a delegate twice.
      if (d.walkback) {
        pk.trail.push_back(u);
        if (pk.trail.size() > static_cast<std::size_t>(kTrailCap))
          pk.trail.erase(pk.trail.begin(), pk.trail.end() - kTrailCap);
      }
      double dist = distance(pos_[u], pos_[d.next]);
      // busy first: if this debit kills the sender, the in-service packet
      // must survive the queue drain.
      ns.busy = true;
      spend(u, tx_energy(sc_.energy, pk.size_bits, dist));
      if (pk.kind == PacketKind::Data) ++result_.data_tx_count[u];
      if (sc_.trace.paths)
        result_.forwards.push_back({now_, u, d.next, pk.seq});
      trace_event("tx_start", u, pk.stream, pk.seq,
                  "to=" + std::to_string(d.next));
      Packet out = pk;
      out.prev = u;
      out.prev_pos = pos_[u];
      double tx_end = now_ + pk.size_bits / sc_.link.data_rate_bps;
      Ev done;
      done.t = tx_end;
      done.kind = Ev::TxDone;
      done.node = u;
      push(done);
      Ev arr;
      arr.t = tx_end + sc_.link.per_hop_processing_s;
      arr.kind = Ev::Arrival;
      arr.node = d.next;
      arr.pk = std::move(out);
      push(std::move(arr));
    }
  }

  void tx_done(NodeId u) {
    auto& ns = nodes_[u];
    assert(ns.busy && !ns.queue.empty());
    ns.queue.pop_front();
    ns.busy = false;
    start_service(u);
  }

  void arrival(NodeId v, const Packet& pk_in) {
    trace_event("arrive", v, pk_in.stream, pk_in.seq,
                "from=" + std::to_string(pk_in.prev));
    if (!alive(v)) {
      drop_packet(pk_in, v, DropReason::DeadNode, "receiver-dead");
      return;
    }
    spend(v, rx_energy(sc_.energy, pk_in.size_bits));
    if (pk_in.sink == v) {
      deliver(pk_in);
      return;
    }
    enqueue_or_drop(v, pk_in);
  }

  void deliver(const Packet& pk) {
    double delay = now_ - pk.created_at;
    if (delay < 0) throw IntegrityError("delivery before creation");
    bool dup = !delivered_keys_.insert({pk.stream, pk.seq}).second;
    DeliveryRecord rec{pk.stream, pk.seq, pk.created_at, now_, pk.hop_count, dup};
    result_.deliveries.push_back(rec);
    if (dup) {
      ++result_.duplicates;
    } else {
      ++result_.delivered;
      --outstanding_;
    }
    trace_event("deliver", pk.sink, pk.stream, pk.seq,
                "delay=" + fmt(delay));
  }

  void drop_packet(const Packet& pk, NodeId at, DropReason reason,
                   const char* detail) {
    ++result_.drops[reason];
    --outstanding_;
    result_.drop_records.push_back(
        {now_, at, reason, pk.stream, pk.seq, pk.hop_count, detail});
    trace_event("drop", at, pk.stream, pk.seq,
                std::string(to_string(reason)) + ":" + detail);
  }

  // --- beacons & void control packets ----------------------------------------
  void beacon_tick(NodeId u) {
    auto& ns = nodes_[u];
    if (!ns.store.alive()) return;  // dead nodes stop beaconing for good
    double stale = sc_.beacon.stale_intervals * sc_.beacon.interval_s;
    for (auto it = ns.table.begin(); it != ns.table.end();) {
      if (now_ - it->second.last_heard > stale + 1e-9)
        it = ns.table.erase(it);
      else
        ++it;
    }
    if (sc_.beacon.spend_energy)
      spend(u, tx_energy(sc_.energy, sc_.beacon.bits, dep_.radio_range));
    trace_event("beacon", u, 0, 0, "");
    double reported = nodes_[u].store.residual;
    for (NodeId v : adj_[u]) {
      if (!alive(v)) continue;
      if (sc_.beacon.spend_energy) spend(v, rx_energy(sc_.energy, sc_.beacon.bits));
      nodes_[v].table[u] = {pos_[u], reported, now_};
    }
    if (images_emitted_ < sc_.traffic.images || outstanding_ > 0)
      schedule_beacon(u, now_ + sc_.beacon.interval_s);
  }

  void broadcast_void(NodeId u, NodeId sink) {
    if (sc_.beacon.spend_energy)
      spend(u, tx_energy(sc_.energy, sc_.beacon.bits, dep_.radio_range));
    trace_event("void_announce", u, 0, 0, "sink=" + std::to_string(sink));
    for (NodeId v : adj_[u]) {
      if (!alive(v)) continue;
      Ev ev;
      ev.t = now_ + sc_.link.per_hop_processing_s;
      ev.kind = Ev::Announce;
      ev.node = v;
      ev.announcer = u;
      ev.announce_sink = sink;
      push(ev);
    }
  }

  void announce(NodeId v, NodeId announcer, NodeId sink) {
    if (!alive(v)) return;
    if (sc_.beacon.spend_energy) spend(v, rx_energy(sc_.energy, sc_.beacon.bits));
    voids_[v].note_announcement(announcer, sink);
  }

  // --- routing ---------------------------------------------------------------
  Decision route(NodeId u, Packet& pk) {
    if (pk.hop_count > hop_budget_) {
      Decision d;
      d.action = Decision::Drop;
      d.reason = sc_.protocol == Protocol::Gpsr ? DropReason::PerimeterLoop
                                                : DropReason::IsolatedVoid;
      d.detail = "hop-budget";
      return d;
    }
    switch (sc_.protocol) {
      case Protocol::Agem:
      case Protocol::Geams: return route_adaptive(u, pk);
      case Protocol::Gpsr: return route_gpsr(u, pk);
      case Protocol::Tpgf: return route_tpgf(u, pk);
    }
    return {};
  }

  Decision route_adaptive(NodeId u, Packet& pk) {
    const Position self = pos_[u];
    const Position dest = pos_[pk.sink];
    auto& table = nodes_[u].table;
    Decision d;

    // The sink in radio range ends the search.
    if (table.count(pk.sink)) {
      d.action = Decision::Forward;
      d.next = pk.sink;
      trace_decision(u, pk, "direct", 0.0, 1, 1, pk.sink, {});
      return d;
    }

    double self_d = distance(self, dest);
    std::vector<ScoredCandidate> closer;
    for (const auto& [id, e] : table) {
      if (voids_[u].is_blocked(id, pk.sink)) continue;
      if (distance(e.pos, dest) < self_d)
        closer.push_back({id, e.pos,
                          neighbor_score(sc_.energy, e.energy,
                                         distance(self, e.pos))});
    }
    CompassConfig cfg = sc_.compass;
    cfg.geams_mode = sc_.protocol == Protocol::Geams;
    auto res = adaptive_candidates(self, dest, closer, cfg);
    if (!res) {
      auto& vs = voids_[u];
      if (!vs.self_blocked.count(pk.sink)) {
        vs.self_blocked.insert(pk.sink);
        ++result_.walkback_episodes;
        result_.self_block_times.push_back({now_, u});
        broadcast_void(u, pk.sink);
      }
      std::vector<WalkBackNeighbor> nbrs;
      for (const auto& [id, e] : table) nbrs.push_back({id, e.pos});
      auto delegate = pick_walkback_delegate(self, pk.sink, nbrs, vs, pk.trail);
      if (!delegate) {
        d.action = Decision::Drop;
        d.reason = DropReason::IsolatedVoid;
        d.detail = "isolated-void";
        return d;
      }
      d.action = Decision::Forward;
      d.next = *delegate;
      d.walkback = true;
      trace_decision(u, pk, "walkback", 0.0, 0, 0, *delegate, {});
      return d;
    }
    auto bns = build_best_neighbor_set(std::move(res->candidates));
    auto& st = streams_[u];
    auto it = st.find(pk.source);
    std::optional<StreamEntry> stored;
    if (it != st.end()) stored = it->second;
    auto dec = smart_forward(stored, bns, pk.hop_count);
    st[pk.source] = dec.state;
    std::vector<double> scores;
    for (const auto& e : bns.entries) scores.push_back(e.score);
    trace_decision(u, pk, "smart", res->final_alpha, dec.index, bns.m(),
                   dec.next, scores);
    d.action = Decision::Forward;
    d.next = dec.next;
    return d;
  }

  Decision route_gpsr(NodeId u, Packet& pk) {
    GpsrInput in;
    in.self = u;
    in.self_pos = pos_[u];
    in.dest_pos = pos_[pk.sink];
    in.prev = pk.prev;
    in.prev_pos = pk.prev_pos;
    in.rule = sc_.planarization;
    for (const auto& [id, e] : nodes_[u].table) in.neighbors.push_back({id, e.pos});
    auto g = gpsr_forward(in, pk.gpsr);
    if (g.entered_perimeter) ++result_.perimeter_entries;
    pk.gpsr = g.header;
    Decision d;
    if (g.action == GpsrDecision::Action::Drop) {
      d.action = Decision::Drop;
      d.reason = DropReason::PerimeterLoop;
      d.detail = g.drop_detail;
      return d;
    }
    d.action = Decision::Forward;
    d.next = g.next;
    trace_decision(u, pk,
                   g.mode_used == GpsrMode::Greedy ? "greedy" : "perimeter",
                   0.0, 0, 0, g.next, {});
    return d;
  }

  Decision route_tpgf(NodeId u, Packet& pk) {
    Decision d;
    const auto& paths = result_.tpgf_paths.paths;
    if (pk.tpgf_path < 0 ||
        pk.tpgf_path >= static_cast<int>(paths.size())) {
      d.action = Decision::Drop;
      d.reason = DropReason::NoRoute;
      d.detail = "no-path";
      return d;
    }
    const auto& path = paths[static_cast<std::size_t>(pk.tpgf_path)];
    auto pos = static_cast<std::size_t>(pk.tpgf_pos);
    if (pos >= path.size() || path[pos] != u || pos + 1 >= path.size()) {
      d.action = Decision::Drop;
      d.reason = DropReason::NoRoute;
      d.detail = "off-path";
      return d;
    }
    pk.tpgf_pos += 1;
    d.action = Decision::Forward;
    d.next = path[pos + 1];
    trace_decision(u, pk, "tpgf", 0.0, pk.tpgf_path + 1,
                   static_cast<int>(paths.size()), d.next, {});
    return d;
  }

  // --- traces ---------------------------------------------------------------
  void trace_decision(NodeId node, const Packet& pk, const char* mode,
                      double alpha, int index, int m, NodeId next,
                      const std::vector<double>& scores) {
    if (!sc_.trace.decisions) return;
    dec_trace_ << fmt(now_) << ',' << node << ',' << pk.stream << ','
               << pk.seq << ',' << mode << ',';
    if (alpha > 0) dec_trace_ << fmt(alpha);
    dec_trace_ << ',';
    if (index > 0) dec_trace_ << index;
    dec_trace_ << ',';
    if (m > 0) dec_trace_ << m;
    dec_trace_ << ',' << next << ',';
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (i) dec_trace_ << '|';
      dec_trace_ << fmt(scores[i]);
    }
    dec_trace_ << '\n';
  }

  void trace_event(const char* kind, NodeId node, std::uint32_t stream,
                   std::uint32_t seq, const std::string& detail) {
    if (!sc_.trace.events) return;
    ev_trace_ << fmt(now_) << ',' << kind << ',' << node << ',' << stream
              << ',' << seq << ',' << detail << '\n';
  }

  // --- wrap-up ---------------------------------------------------------------
  void finish() {
    result_.end_time_s = now_;
    result_.final_residual_j.resize(n_);
    double spent = 0.0;
    for (NodeId u = 0; u < n_; ++u) {
      result_.final_residual_j[u] = nodes_[u].store.residual;
      spent += nodes_[u].store.initial - nodes_[u].store.residual;
    }
    if (result_.sent != result_.delivered + result_.total_drops())
      throw IntegrityError("packet conservation violated");
    double total_initial = sc_.initial_energy_j * static_cast<double>(n_);
    if (std::fabs(spent - result_.total_debited_j) >
        1e-9 * std::max(1.0, total_initial))
      throw IntegrityError("energy conservation violated");
    if (sc_.trace.decisions) result_.decision_trace_csv = dec_trace_.str();
    if (sc_.trace.events) result_.event_trace_csv = ev_trace_.str();
  }

  // --- members ----------------------------------------------------------------
  const Scenario& sc_;
  const Deployment& dep_;
  NodeId n_;
  NodeId source_ = 0, sink_ = 0;
  std::vector<Position> pos_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<NodeSim> nodes_;
  std::vector<std::map<NodeId, StreamEntry>> streams_;
  std::vector<VoidState> voids_;
  std::priority_queue<Ev, std::vector<Ev>, EvAfter> heap_;
  std::uint64_t next_order_ = 0;
  double now_ = 0.0;
  std::uint32_t next_seq_ = 0;
  int images_emitted_ = 0;
  int outstanding_ = 0;
  int hop_budget_ = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> delivered_keys_;
  std::ostringstream dec_trace_, ev_trace_;
  RunResult result_;
};

}  // namespace

RunResult run_simulation(const Scenario& sc, const Deployment& dep) {
  Sim sim(sc, dep);
  return sim.run();
}

}  // namespace wmsn
