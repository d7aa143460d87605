#include "wmsn/agem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmsn {

std::optional<AdaptiveResult> adaptive_candidates(
    Position self, Position dest, const std::vector<ScoredCandidate>& closer,
    const CompassConfig& cfg) {
  if (closer.empty()) return std::nullopt;
  if (cfg.geams_mode) return AdaptiveResult{closer, cfg.alpha_max};

  std::vector<AngleDeg> offs(closer.size());
  for (std::size_t i = 0; i < closer.size(); ++i)
    offs[i] = angle_offset(self, closer[i].pos, dest);

  auto cone = [&](AngleDeg alpha) {
    std::vector<ScoredCandidate> in;
    for (std::size_t i = 0; i < closer.size(); ++i)
      if (offs[i] <= alpha) in.push_back(closer[i]);
    return in;
  };

  for (AngleDeg alpha = cfg.alpha0; alpha < cfg.alpha_max;
       alpha += cfg.delta_alpha) {
    auto in = cone(alpha);
    if (static_cast<int>(in.size()) >= cfg.n_min)
      return AdaptiveResult{std::move(in), alpha};
  }
  // Fully open cone: accept whatever is there, even below n_min.
  auto in = cone(cfg.alpha_max);
  if (in.empty()) return std::nullopt;
  return AdaptiveResult{std::move(in), cfg.alpha_max};
}

BestNeighborSet build_best_neighbor_set(std::vector<ScoredCandidate> cands) {
  if (cands.empty())
    throw std::invalid_argument("build_best_neighbor_set: empty set");
  std::sort(cands.begin(), cands.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
  // Distance to the mean, compared as |sum_k (s_i - s_k)| == m*|s_i - mean|.
  // The pairwise form keeps exact ties exact (fl(x-y) == -fl(y-x)), so a
  // two-candidate set always resolves to the first entry instead of breaking
  // on the rounding of sum/m.
  auto spread = [&](std::size_t i) {
    double d = 0.0;
    for (const auto& c : cands) d += cands[i].score - c.score;
    return std::fabs(d);
  };
  int j = 1;
  double best = spread(0);
  for (std::size_t i = 1; i < cands.size(); ++i) {
    double d = spread(i);
    if (d < best) {
      best = d;
      j = static_cast<int>(i) + 1;
    }
  }
  BestNeighborSet bns;
  bns.entries = std::move(cands);
  bns.j = j;
  return bns;
}

SmartDecision smart_forward(const std::optional<StreamEntry>& stored,
                            const BestNeighborSet& bns, int packet_hop_count) {
  const int m = bns.m();
  if (m < 1) throw std::invalid_argument("smart_forward: empty neighbor set");

  if (!stored) {
    // First packet of the stream: best neighbor, remember where we started.
    SmartDecision d;
    d.index = 1;
    d.next = bns.entries[0].id;
    d.state = {packet_hop_count, bns.j};
    return d;
  }

  int h = stored->hop_reference;
  // j persists as first recorded; it is only clamped for use when the set
  // has shrunk since then.
  int j = std::clamp(stored->mean_index, 1, m);
  int index = j + (h - packet_hop_count);
  if (index <= 0) {
    h = h - index + 1;
    index = 1;
  } else if (index > m) {
    h = h - index + m;
    index = m;
  }
  SmartDecision d;
  d.index = index;
  d.next = bns.entries[static_cast<std::size_t>(index - 1)].id;
  d.state = {h, stored->mean_index};
  return d;
}

std::optional<NodeId> pick_walkback_delegate(
    Position self, NodeId sink, const std::vector<WalkBackNeighbor>& neighbors,
    const VoidState& voids, const std::vector<NodeId>& trail) {
  std::optional<NodeId> best;
  double best_dist = 0.0;
  for (const auto& nb : neighbors) {
    if (voids.is_blocked(nb.id, sink)) continue;
    if (std::find(trail.begin(), trail.end(), nb.id) != trail.end()) continue;
    double d = distance(self, nb.pos);
    if (!best || d < best_dist || (d == best_dist && nb.id < *best)) {
      best = nb.id;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace wmsn
