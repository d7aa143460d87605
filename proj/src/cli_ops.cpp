#include "wmsn/cli_ops.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmsn/simcore.hpp"

namespace wmsn {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write file: " + path);
  f << body;
}

std::string compact(const std::string& pretty_json) {
  return nlohmann::json::parse(pretty_json).dump();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split(s, ',')) {
    if (part.empty()) throw ConfigError("empty entry in seed list");
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("bad seed \"" + part + "\"");
    }
  }
  return seeds;
}

double min_pairwise_distance(const Deployment& dep) {
  double best = -1.0;
  for (std::size_t i = 0; i < dep.nodes.size(); ++i)
    for (std::size_t k = i + 1; k < dep.nodes.size(); ++k) {
      double d = distance(dep.nodes[i].pos, dep.nodes[k].pos);
      if (best < 0 || d < best) best = d;
    }
  return best;
}

void print_summary(const Deployment& dep, std::ostream& out) {
  int relays = 0;
  for (const auto& nd : dep.nodes)
    if (nd.role == NodeRole::Relay) ++relays;
  out << "nodes: " << dep.nodes.size() << " (" << relays
      << " relays + source + sink)\n";
  out << "field: " << fmt(dep.field.width) << "x" << fmt(dep.field.height)
      << "  radio_range: " << fmt(dep.radio_range) << "\n";
  out << "connected: " << (dep.source_sink_connected() ? "true" : "false")
      << "\n";
  if (dep.nodes.size() > 1)
    out << "min_pairwise_distance: " << fmt(min_pairwise_distance(dep))
        << "\n";
  out << "resamples: " << dep.resample_count << "\n";
}

}  // namespace

PlanOutcome execute_plan(const ExperimentPlan& plan) {
  std::set<std::string> labels;
  for (const auto& t : plan.topologies)
    if (!labels.insert(t.label()).second)
      throw ConfigError("plan: duplicate topology label \"" + t.label() +
                        "\" (deployments would be shared ambiguously)");

  PlanOutcome res;
  std::map<std::pair<std::string, std::uint64_t>, Deployment> cache;
  std::string cfg = compact(plan_to_json(plan));
  std::ostringstream mcsv, lcsv;
  mcsv << "# config " << cfg << "\n" << metrics_csv_header();
  lcsv << "# config " << cfg << "\n" << led_csv_header();
  for (const auto& sc : plan.scenarios()) {
    auto key = std::make_pair(sc.topology.label(), sc.seed);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, realize_topology(sc.topology, sc.seed)).first;
    RunResult rr = run_simulation(sc, it->second);
    MetricsRecord m = make_metrics(sc, it->second, rr);
    mcsv << metrics_csv_row(m);
    lcsv << led_csv_rows(m);
    std::string run_cfg = "# config " + compact(scenario_to_json(sc)) + "\n";
    if (sc.trace.decisions)
      res.trace_files.emplace_back(sc.run_id() + ".decisions.csv",
                                   run_cfg + rr.decision_trace_csv);
    if (sc.trace.events)
      res.trace_files.emplace_back(sc.run_id() + ".events.csv",
                                   run_cfg + rr.event_trace_csv);
    if (sc.trace.paths) {
      std::ostringstream pcsv;
      pcsv << run_cfg << "time_s,from,to,seq\n";
      for (const auto& f : rr.forwards)
        pcsv << fmt(f.time) << ',' << f.from << ',' << f.to << ',' << f.seq
             << '\n';
      res.trace_files.emplace_back(sc.run_id() + ".paths.csv", pcsv.str());
    }
    res.metrics.push_back(std::move(m));
  }
  res.metrics_csv = mcsv.str();
  res.led_csv = lcsv.str();
  return res;
}

void do_run(const std::string& config_path, const std::string& out_override,
            bool trace_all, const std::string& seeds_override,
            std::ostream& out) {
  ExperimentPlan plan = plan_from_json(read_file(config_path));
  if (!out_override.empty()) plan.out_dir = out_override;
  if (trace_all) plan.trace = TraceConfig{true, true, true};
  if (!seeds_override.empty()) plan.seeds = parse_seed_list(seeds_override);

  PlanOutcome res = execute_plan(plan);

  std::filesystem::create_directories(plan.out_dir);
  write_file(plan.out_dir + "/metrics.csv", res.metrics_csv);
  write_file(plan.out_dir + "/led.csv", res.led_csv);
  for (const auto& [name, body] : res.trace_files)
    write_file(plan.out_dir + "/" + name, body);

  for (const auto& m : res.metrics) {
    out << m.run_id << ": sent=" << m.sent << " delivered=" << m.delivered
        << " loss=";
    if (m.loss_pct)
      out << fmt(*m.loss_pct) << "%";
    else
      out << "n/a";
    out << " ged_mean=" << fmt(m.ged.mean_j * 100.0 / m.initial_energy_j)
        << "%\n";
  }
  out << "wrote " << plan.out_dir << "/metrics.csv (" << res.metrics.size()
      << " rows)\n";
}

void do_topo_generate(const TopologySpec& spec, std::uint64_t seed,
                      const std::string& out_path, std::ostream& out) {
  Deployment dep = realize_topology(spec, seed);
  save_deployment(dep, out_path);
  print_summary(dep, out);
  out << "wrote " << out_path << "\n";
}

bool do_topo_inspect(const std::string& path, std::ostream& out) {
  Deployment dep = load_deployment(path);
  print_summary(dep, out);
  return dep.source_sink_connected();
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& text) {
  std::vector<MetricsRow> rows;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  std::string expect = metrics_csv_header();
  expect.pop_back();  // trailing newline
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != expect)
        throw ConfigError("unrecognized metrics CSV header: " + line);
      saw_header = true;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 12)
      throw ConfigError("bad metrics CSV row: " + line);
    try {
      MetricsRow r;
      r.protocol = f[0];
      r.topology = f[1];
      r.n_nodes = std::stoi(f[2]);
      r.seed = std::stoull(f[3]);
      r.ged_mean_pct = std::stod(f[4]);
      r.ged_std_pct = std::stod(f[5]);
      if (!f[6].empty()) r.delay_mean_s = std::stod(f[6]);
      if (!f[7].empty()) r.delay_std_s = std::stod(f[7]);
      if (!f[8].empty()) r.loss_pct = std::stod(f[8]);
      r.drops_queue = std::stoi(f[9]);
      r.drops_void = std::stoi(f[10]);
      r.drops_dead = std::stoi(f[11]);
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ConfigError("bad metrics CSV row: " + line);
    }
  }
  if (!saw_header) throw ConfigError("metrics CSV has no header row");
  return rows;
}

namespace {

struct SeedPair {
  const MetricsRow* a = nullptr;
  const MetricsRow* b = nullptr;
};

// Seed-wise directional tally of `cmp(a, b)` over seeds where both sides are
// comparable. Passes on a strict majority.
template <typename Cmp>
void verdict_line(std::ostream& out, const std::string& topo,
                  const std::string& what,
                  const std::vector<SeedPair>& pairs, Cmp cmp) {
  int ok = 0, total = 0;
  for (const auto& p : pairs) {
    int r = cmp(*p.a, *p.b);
    if (r < 0) continue;  // not comparable for this seed
    ++total;
    ok += r;
  }
  out << "  " << topo << " " << what << ": ";
  if (total == 0) {
    out << "no comparable seeds\n";
    return;
  }
  out << ok << "/" << total << (2 * ok > total ? " pass" : " fail") << "\n";
}

}  // namespace

void do_compare(const std::vector<std::string>& csv_paths, std::ostream& out) {
  std::vector<MetricsRow> rows;
  for (const auto& p : csv_paths) {
    auto part = parse_metrics_csv(read_file(p));
    rows.insert(rows.end(), part.begin(), part.end());
  }

  std::set<std::string> protocols;
  std::set<std::string> topologies;
  // (topology, seed, protocol) -> row
  std::map<std::tuple<std::string, std::uint64_t, std::string>,
           const MetricsRow*> index;
  for (const auto& r : rows) {
    protocols.insert(r.protocol);
    topologies.insert(r.topology);
    auto key = std::make_tuple(r.topology, r.seed, r.protocol);
    if (!index.emplace(key, &r).second)
      throw ConfigError("duplicate run in inputs: " + r.protocol + " " +
                        r.topology + " seed " + std::to_string(r.seed));
  }
  if (protocols.size() < 2)
    throw ConfigError("comparison needs at least two protocols");

  // Every protocol must cover the same (topology, seed) grid with the same
  // node counts, otherwise the runs were not on shared deployments.
  std::set<std::pair<std::string, std::uint64_t>> grid;
  for (const auto& [key, r] : index)
    grid.insert({std::get<0>(key), std::get<1>(key)});
  for (const auto& [topo, seed] : grid) {
    int n_nodes = -1;
    for (const auto& proto : protocols) {
      auto it = index.find(std::make_tuple(topo, seed, proto));
      if (it == index.end())
        throw ConfigError("protocol \"" + proto + "\" is missing run " + topo +
                          " seed " + std::to_string(seed) +
                          " (comparisons must share deployments)");
      if (n_nodes < 0) n_nodes = it->second->n_nodes;
      if (it->second->n_nodes != n_nodes)
        throw ConfigError("node counts differ on " + topo + " seed " +
                          std::to_string(seed) +
                          " (comparisons must share deployments)");
    }
  }

  for (const auto& topo : topologies) {
    std::vector<std::uint64_t> seeds;
    for (const auto& [t, s] : grid)
      if (t == topo) seeds.push_back(s);
    out << "topology " << topo << ", " << seeds.size() << " seed"
        << (seeds.size() == 1 ? "" : "s") << "\n";
    out << "  protocol      ged_mean_pct  ged_std_pct  delay_mean_s  loss_pct\n";
    for (const auto& proto : protocols) {
      double ged_sum = 0, ged_std_sum = 0, delay_sum = 0, loss_sum = 0;
      int n = 0, n_delay = 0, n_loss = 0;
      for (auto s : seeds) {
        const auto& r = *index.at(std::make_tuple(topo, s, proto));
        ged_sum += r.ged_mean_pct;
        ged_std_sum += r.ged_std_pct;
        ++n;
        if (r.delay_mean_s) {
          delay_sum += *r.delay_mean_s;
          ++n_delay;
        }
        if (r.loss_pct) {
          loss_sum += *r.loss_pct;
          ++n_loss;
        }
      }
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %-12s  %12.4f  %11.4f", proto.c_str(),
                    ged_sum / n, ged_std_sum / n);
      out << buf;
      if (n_delay > 0)
        std::snprintf(buf, sizeof buf, "  %12.6f", delay_sum / n_delay);
      else
        std::snprintf(buf, sizeof buf, "  %12s", "n/a");
      out << buf;
      if (n_loss > 0)
        std::snprintf(buf, sizeof buf, "  %8.3f", loss_sum / n_loss);
      else
        std::snprintf(buf, sizeof buf, "  %8s", "n/a");
      out << buf << "\n";
    }
  }

  auto pairs_for = [&](const std::string& topo, const std::string& pa,
                       const std::string& pb) {
    std::vector<SeedPair> pairs;
    for (const auto& [t, s] : grid) {
      if (t != topo) continue;
      SeedPair p;
      p.a = index.at(std::make_tuple(topo, s, pa));
      p.b = index.at(std::make_tuple(topo, s, pb));
      pairs.push_back(p);
    }
    return pairs;
  };

  bool any_verdict = false;
  auto have = [&](const char* p) { return protocols.count(p) > 0; };
  out << "verdicts (seed-wise, strict majority)\n";
  for (const auto& topo : topologies) {
    if (have("agem") && have("gpsr")) {
      auto pairs = pairs_for(topo, "agem", "gpsr");
      verdict_line(out, topo, "ged_mean agem>gpsr", pairs,
                   [](const MetricsRow& a, const MetricsRow& b) {
                     return a.ged_mean_pct > b.ged_mean_pct ? 1 : 0;
                   });
      verdict_line(out, topo, "ged_std agem<gpsr", pairs,
                   [](const MetricsRow& a, const MetricsRow& b) {
                     return a.ged_std_pct < b.ged_std_pct ? 1 : 0;
                   });
      verdict_line(out, topo, "loss agem<=gpsr", pairs,
                   [](const MetricsRow& a, const MetricsRow& b) {
                     if (!a.loss_pct || !b.loss_pct) return -1;
                     return *a.loss_pct <= *b.loss_pct ? 1 : 0;
                   });
      verdict_line(out, topo, "delay agem<=gpsr", pairs,
                   [](const MetricsRow& a, const MetricsRow& b) {
                     if (!a.delay_mean_s || !b.delay_mean_s) return -1;
                     return *a.delay_mean_s <= *b.delay_mean_s ? 1 : 0;
                   });
      any_verdict = true;
    }
    if (have("tpgf") && have("agem")) {
      verdict_line(out, topo, "delay tpgf<=agem", pairs_for(topo, "tpgf", "agem"),
                   [](const MetricsRow& a, const MetricsRow& b) {
                     if (!a.delay_mean_s || !b.delay_mean_s) return -1;
                     return *a.delay_mean_s <= *b.delay_mean_s ? 1 : 0;
                   });
      any_verdict = true;
    }
  }
  if (!any_verdict)
    out << "  none (no protocol pair with directional claims present)\n";
}

namespace {

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TopologyError& e) {
    std::cerr << "topology error: " << e.what() << "\n";
    return kExitTopology;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

Hole parse_hole(const std::string& s) {
  auto f = split(s, ',');
  if (f.size() != 3) throw ConfigError("bad --hole, expected cx,cy,r: " + s);
  try {
    return Hole{{std::stod(f[0]), std::stod(f[1])}, std::stod(f[2])};
  } catch (const std::exception&) {
    throw ConfigError("bad --hole, expected cx,cy,r: " + s);
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"geographic routing simulator for wireless sensor networks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute an experiment plan");
  std::string config, run_out, seeds;
  bool trace = false;
  run->add_option("--config", config, "plan JSON")->required();
  run->add_option("--out", run_out, "output directory (overrides the plan)");
  run->add_flag("--trace", trace, "write decision/event/path traces");
  run->add_option("--seeds", seeds, "comma-separated seed override");

  auto* topo = app.add_subcommand("topo", "generate or inspect deployments");
  topo->require_subcommand(1);
  auto* gen = topo->add_subcommand("generate", "generate a deployment JSON");
  std::string kind = "plain", gen_out;
  std::vector<std::string> holes_raw;
  int relays = 30;
  std::uint64_t seed = 1;
  double range = 80.0, min_sep = 1.0, width = 500.0, height = 200.0;
  bool gen_allow_disc = false;
  gen->add_option("--kind", kind, "plain|holes|grid")
      ->check(CLI::IsMember({"plain", "holes", "grid"}));
  gen->add_option("--relays", relays, "relay count (plain/holes)");
  gen->add_option("--seed", seed, "placement seed");
  gen->add_option("--range", range, "radio range, meters");
  gen->add_option("--min-sep", min_sep, "minimum pairwise distance, meters");
  gen->add_option("--width", width, "field width, meters");
  gen->add_option("--height", height, "field height, meters");
  gen->add_option("--hole", holes_raw, "hole disc as cx,cy,r (repeatable)");
  gen->add_flag("--allow-disconnected", gen_allow_disc,
                "keep deployments whose source and sink are disconnected");
  gen->add_option("--out", gen_out, "output JSON path")->required();

  auto* ins = topo->add_subcommand("inspect", "summarize a deployment JSON");
  std::string ins_path;
  bool ins_allow_disc = false;
  ins->add_option("file", ins_path, "deployment JSON")->required();
  ins->add_flag("--allow-disconnected", ins_allow_disc,
                "exit 0 even when source and sink are disconnected");

  auto* cmp = app.add_subcommand("compare", "compare metrics CSVs");
  std::vector<std::string> csvs;
  cmp->add_option("files", csvs, "metrics.csv files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  return guarded([&]() -> int {
    if (run->parsed()) {
      do_run(config, run_out, trace, seeds, std::cout);
      return kExitOk;
    }
    if (gen->parsed()) {
      TopologySpec spec;
      if (kind == "grid") {
        spec.kind = TopologySpec::Kind::Grid;
      } else if (kind == "holes") {
        spec.kind = TopologySpec::Kind::Holes;
        if (holes_raw.empty())
          throw ConfigError("--kind holes needs at least one --hole");
      } else {
        spec.kind = TopologySpec::Kind::Plain;
        if (!holes_raw.empty())
          throw ConfigError("--hole requires --kind holes");
      }
      for (const auto& h : holes_raw) spec.holes.push_back(parse_hole(h));
      spec.n_relays = relays;
      spec.radio_range = range;
      spec.min_separation = min_sep;
      spec.field = Field{width, height};
      spec.require_connected = !gen_allow_disc;
      do_topo_generate(spec, seed, gen_out, std::cout);
      return kExitOk;
    }
    if (ins->parsed()) {
      bool connected = do_topo_inspect(ins_path, std::cout);
      return (connected || ins_allow_disc) ? kExitOk : kExitTopology;
    }
    if (cmp->parsed()) {
      do_compare(csvs, std::cout);
      return kExitOk;
    }
    return kExitConfig;
  });
}

}  // namespace wmsn
