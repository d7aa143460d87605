#include "wmsn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wmsn {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

GedStats ged(const std::vector<double>& residuals_j) {
  GedStats g;
  if (residuals_j.empty()) return g;
  double n = static_cast<double>(residuals_j.size());
  double sum = 0.0;
  for (double r : residuals_j) sum += r;
  g.mean_j = sum / n;
  double var = 0.0;
  for (double r : residuals_j) var += (r - g.mean_j) * (r - g.mean_j);
  g.std_j = std::sqrt(var / n);
  return g;
}

std::vector<LedBin> led(const Deployment& dep,
                        const std::vector<double>& residuals_j,
                        double bin_width) {
  double width = dep.field.width;
  int nbins = static_cast<int>(std::ceil(width / bin_width));
  std::vector<LedBin> bins(static_cast<std::size_t>(nbins));
  std::vector<double> sums(bins.size(), 0.0);
  for (int k = 0; k < nbins; ++k) {
    bins[static_cast<std::size_t>(k)].lo = k * bin_width;
    bins[static_cast<std::size_t>(k)].hi = std::min((k + 1) * bin_width, width);
  }
  for (const auto& nd : dep.nodes) {
    int k = static_cast<int>(std::floor(nd.pos.x / bin_width));
    if (k >= nbins) k = nbins - 1;  // x == field width lands in the last bin
    if (k < 0) k = 0;
    auto ki = static_cast<std::size_t>(k);
    bins[ki].count += 1;
    sums[ki] += residuals_j[nd.id];
  }
  for (std::size_t k = 0; k < bins.size(); ++k)
    if (bins[k].count > 0) bins[k].mean_residual_j = sums[k] / bins[k].count;
  return bins;
}

DelayStats delay_stats(const std::vector<DeliveryRecord>& deliveries) {
  DelayStats d;
  double sum = 0.0;
  for (const auto& rec : deliveries) {
    if (rec.duplicate) continue;
    double delay = rec.delivered_at - rec.created_at;
    if (d.count == 0) {
      d.min_s = d.max_s = delay;
    } else {
      d.min_s = std::min(d.min_s, delay);
      d.max_s = std::max(d.max_s, delay);
    }
    sum += delay;
    ++d.count;
  }
  if (d.count == 0) return d;
  d.mean_s = sum / d.count;
  double var = 0.0;
  for (const auto& rec : deliveries) {
    if (rec.duplicate) continue;
    double delay = rec.delivered_at - rec.created_at;
    var += (delay - d.mean_s) * (delay - d.mean_s);
  }
  d.std_s = std::sqrt(var / d.count);
  return d;
}

std::optional<double> loss_ratio(int sent, int delivered) {
  if (delivered > sent || delivered < 0)
    throw IntegrityError("delivered count exceeds sent count");
  if (sent == 0) return std::nullopt;
  return 100.0 * (sent - delivered) / sent;
}

MetricsRecord make_metrics(const Scenario& sc, const Deployment& dep,
                           const RunResult& rr) {
  MetricsRecord m;
  m.protocol = to_string(sc.protocol);
  m.topology = sc.topology.label();
  m.n_nodes = static_cast<int>(dep.nodes.size());
  m.seed = sc.seed;
  m.run_id = sc.run_id();
  m.initial_energy_j = rr.initial_energy_j;
  m.ged = ged(rr.final_residual_j);
  m.led = led(dep, rr.final_residual_j);
  m.delay = delay_stats(rr.deliveries);
  m.sent = rr.sent;
  m.delivered = rr.delivered;
  m.loss_pct = loss_ratio(rr.sent, rr.delivered);
  for (const auto& [reason, count] : rr.drops) {
    switch (reason) {
      case DropReason::QueueOverflow: m.drops_queue += count; break;
      case DropReason::DeadNode: m.drops_dead += count; break;
      case DropReason::IsolatedVoid:
      case DropReason::PerimeterLoop:
      case DropReason::NoRoute: m.drops_void += count; break;
    }
  }
  return m;
}

std::string metrics_csv_header() {
  return "protocol,topology,n_nodes,seed,ged_mean_pct,ged_std_pct,"
         "delay_mean_s,delay_std_s,loss_pct,drops_queue,drops_void,"
         "drops_dead\n";
}

std::string metrics_csv_row(const MetricsRecord& m) {
  std::ostringstream out;
  double scale = 100.0 / m.initial_energy_j;
  out << m.protocol << ',' << m.topology << ',' << m.n_nodes << ',' << m.seed
      << ',' << fmt(m.ged.mean_j * scale) << ',' << fmt(m.ged.std_j * scale)
      << ',';
  if (m.delay.count > 0)
    out << fmt(m.delay.mean_s) << ',' << fmt(m.delay.std_s);
  else
    out << ',';
  out << ',';
  if (m.loss_pct) out << fmt(*m.loss_pct);
  out << ',' << m.drops_queue << ',' << m.drops_void << ',' << m.drops_dead
      << '\n';
  return out.str();
}

std::string led_csv_header() {
  return "run_id,bin_lo,bin_hi,mean_residual_pct,node_count\n";
}

std::string led_csv_rows(const MetricsRecord& m) {
  std::ostringstream out;
  double scale = 100.0 / m.initial_energy_j;
  for (const auto& b : m.led) {
    out << m.run_id << ',' << fmt(b.lo) << ',' << fmt(b.hi) << ',';
    if (b.count > 0) out << fmt(b.mean_residual_j * scale);
    out << ',' << b.count << '\n';
  }
  return out.str();
}

}  // namespace wmsn
