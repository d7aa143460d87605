#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wmsn/metrics.hpp"
#include "wmsn/scenario.hpp"

namespace wmsn {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;     // unreadable/invalid config or arguments
constexpr int kExitTopology = 2;   // generation or connectivity failure
constexpr int kExitIntegrity = 3;  // a run violated a conservation check

// Executes every scenario of the plan. Deployments are realized once per
// (topology, seed) and shared across protocols so the comparisons are on
// identical networks. Throws on any failure; produces no files.
struct PlanOutcome {
  std::vector<MetricsRecord> metrics;     // scenario order
  std::string metrics_csv;                // embedded resolved config + rows
  std::string led_csv;
  std::vector<std::pair<std::string, std::string>> trace_files;  // name, body
};

PlanOutcome execute_plan(const ExperimentPlan& plan);

// One parsed metrics.csv row, as written by execute_plan.
struct MetricsRow {
  std::string protocol;
  std::string topology;
  int n_nodes = 0;
  std::uint64_t seed = 0;
  double ged_mean_pct = 0.0;
  double ged_std_pct = 0.0;
  std::optional<double> delay_mean_s;
  std::optional<double> delay_std_s;
  std::optional<double> loss_pct;
  int drops_queue = 0;
  int drops_void = 0;
  int drops_dead = 0;
};

std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

// Subcommand bodies. They write human output to `out`, never to files other
// than those named, and throw ConfigError/TopologyError/IntegrityError.
void do_run(const std::string& config_path, const std::string& out_override,
            bool trace_all, const std::string& seeds_override,
            std::ostream& out);
void do_topo_generate(const TopologySpec& spec, std::uint64_t seed,
                      const std::string& out_path, std::ostream& out);
// Returns false when source and sink are disconnected.
bool do_topo_inspect(const std::string& path, std::ostream& out);
void do_compare(const std::vector<std::string>& csv_paths, std::ostream& out);

// Full argv interface: parses arguments, dispatches, maps exceptions to exit
// codes. The binary's main() is a one-liner over this.
int cli_main(int argc, const char* const* argv);

}  // namespace wmsn
