#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmsn/scenario.hpp"
#include "wmsn/simcore.hpp"

namespace wmsn {

// Population mean and standard deviation of residual energy over all nodes,
// source and sink included.
struct GedStats {
  double mean_j = 0.0;
  double std_j = 0.0;
};

GedStats ged(const std::vector<double>& residuals_j);

// Residual energy aggregated by x coordinate. Bins are [k*w, (k+1)*w) with
// the final bin clipped to the field width and closed on the right, so a
// 500 m field with 40 m bins ends in [480, 500]. Empty bins stay empty.
struct LedBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  double mean_residual_j = 0.0;  // meaningless when count == 0
};

std::vector<LedBin> led(const Deployment& dep,
                        const std::vector<double>& residuals_j,
                        double bin_width = 40.0);

// End-to-end delay over delivered packets only (duplicates excluded).
// count == 0 means every statistic is undefined.
struct DelayStats {
  int count = 0;
  double mean_s = 0.0;
  double std_s = 0.0;
  double min_s = 0.0;
  double max_s = 0.0;
};

DelayStats delay_stats(const std::vector<DeliveryRecord>& deliveries);

// Percent of offered packets that never arrived. nullopt when nothing was
// sent. Throws IntegrityError when delivered exceeds sent.
std::optional<double> loss_ratio(int sent, int delivered);

struct MetricsRecord {
  std::string protocol;
  std::string topology;
  int n_nodes = 0;
  std::uint64_t seed = 0;
  std::string run_id;

  double initial_energy_j = 0.0;
  GedStats ged;
  std::vector<LedBin> led;
  DelayStats delay;
  int sent = 0;
  int delivered = 0;
  std::optional<double> loss_pct;
  int drops_queue = 0;
  int drops_void = 0;  // isolated voids, closed face tours, missing paths
  int drops_dead = 0;
};

MetricsRecord make_metrics(const Scenario& sc, const Deployment& dep,
                           const RunResult& rr);

// One row per run. Undefined values serialize as empty cells.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRecord& m);

// Long format, one row per (run, bin).
std::string led_csv_header();
std::string led_csv_rows(const MetricsRecord& m);

}  // namespace wmsn
