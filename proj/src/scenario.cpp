#include "wmsn/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wmsn {

using nlohmann::json;

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Agem: return "agem";
    case Protocol::Geams: return "geams";
    case Protocol::Gpsr: return "gpsr";
    case Protocol::Tpgf: return "tpgf";
  }
  return "agem";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "agem") return Protocol::Agem;
  if (s == "geams") return Protocol::Geams;
  if (s == "gpsr") return Protocol::Gpsr;
  if (s == "tpgf") return Protocol::Tpgf;
  throw ConfigError("unknown protocol: " + s);
}

std::string TopologySpec::label() const {
  switch (kind) {
    case Kind::Plain: return "plain" + std::to_string(n_relays);
    case Kind::Holes:
      return "holes" + std::to_string(n_relays) + "x" +
             std::to_string(holes.size());
    case Kind::Grid: return "grid";
    case Kind::File: {
      auto slash = file.find_last_of('/');
      std::string base = slash == std::string::npos ? file : file.substr(slash + 1);
      auto dot = base.find_last_of('.');
      return dot == std::string::npos ? base : base.substr(0, dot);
    }
  }
  return "plain";
}

int TopologySpec::node_count() const {
  switch (kind) {
    case Kind::Plain:
    case Kind::Holes: return n_relays + 2;
    case Kind::Grid: return 26;
    case Kind::File: return -1;
  }
  return -1;
}

Deployment realize_topology(const TopologySpec& spec, std::uint64_t seed) {
  GenOptions opt;
  opt.min_separation = spec.min_separation;
  opt.radio_range = spec.radio_range;
  opt.require_connected = spec.require_connected;
  switch (spec.kind) {
    case TopologySpec::Kind::Plain:
      return gen_plain(spec.n_relays, spec.field, seed, opt);
    case TopologySpec::Kind::Holes:
      return gen_holes(spec.n_relays, spec.field, spec.holes, seed, opt);
    case TopologySpec::Kind::Grid: return gen_grid(spec.radio_range);
    case TopologySpec::Kind::File: return load_deployment(spec.file);
  }
  throw ConfigError("bad topology kind");
}

int TrafficSpec::packets_per_image() const {
  return static_cast<int>(std::ceil(image_bits / packet_bits));
}

std::string Scenario::run_id() const {
  std::ostringstream s;
  s << to_string(protocol) << "_" << topology.label() << "_s" << seed;
  return s.str();
}

std::vector<Scenario> ExperimentPlan::scenarios() const {
  std::vector<Scenario> out;
  for (const auto& topo : topologies) {
    for (std::uint64_t seed : seeds) {
      for (Protocol p : protocols) {
        Scenario s;
        s.protocol = p;
        s.topology = topo;
        s.seed = seed;
        s.traffic = traffic;
        s.link = link;
        s.energy = energy;
        s.initial_energy_j = initial_energy_j;
        s.beacon = beacon;
        s.compass = compass;
        s.planarization = planarization;
        s.tpgf_max_paths = tpgf_max_paths;
        s.trace = trace;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

TopologySpec topology_from(const json& j) {
  require_keys(j,
               {"kind", "n_relays", "field", "holes", "radio_range",
                "min_separation", "require_connected", "file"},
               "topology");
  TopologySpec t;
  std::string kind = get_or<std::string>(j, "kind", "plain");
  if (kind == "plain") t.kind = TopologySpec::Kind::Plain;
  else if (kind == "holes") t.kind = TopologySpec::Kind::Holes;
  else if (kind == "grid") t.kind = TopologySpec::Kind::Grid;
  else if (kind == "file") t.kind = TopologySpec::Kind::File;
  else throw ConfigError("topology: unknown kind \"" + kind + "\"");
  t.n_relays = get_or(j, "n_relays", t.n_relays);
  if (t.n_relays < 0) throw ConfigError("topology: n_relays < 0");
  if (j.contains("field")) {
    require_keys(j.at("field"), {"width", "height"}, "topology.field");
    t.field.width = get_or(j.at("field"), "width", t.field.width);
    t.field.height = get_or(j.at("field"), "height", t.field.height);
    if (t.field.width <= 0 || t.field.height <= 0)
      throw ConfigError("topology: field dimensions must be positive");
  }
  if (j.contains("holes")) {
    for (const auto& h : j.at("holes")) {
      require_keys(h, {"x", "y", "r"}, "topology.holes[]");
      Hole hole;
      hole.center = {get_or(h, "x", 0.0), get_or(h, "y", 0.0)};
      hole.radius = get_or(h, "r", 0.0);
      if (hole.radius < 0) throw ConfigError("topology: hole radius < 0");
      t.holes.push_back(hole);
    }
  }
  t.radio_range = get_or(j, "radio_range", t.radio_range);
  if (t.radio_range <= 0) throw ConfigError("topology: radio_range <= 0");
  t.min_separation = get_or(j, "min_separation", t.min_separation);
  t.require_connected = get_or(j, "require_connected", t.require_connected);
  t.file = get_or<std::string>(j, "file", "");
  if (t.kind == TopologySpec::Kind::File && t.file.empty())
    throw ConfigError("topology: kind \"file\" needs \"file\"");
  return t;
}

json topology_to(const TopologySpec& t) {
  json j;
  switch (t.kind) {
    case TopologySpec::Kind::Plain: j["kind"] = "plain"; break;
    case TopologySpec::Kind::Holes: j["kind"] = "holes"; break;
    case TopologySpec::Kind::Grid: j["kind"] = "grid"; break;
    case TopologySpec::Kind::File: j["kind"] = "file"; break;
  }
  j["n_relays"] = t.n_relays;
  j["field"] = {{"width", t.field.width}, {"height", t.field.height}};
  j["holes"] = json::array();
  for (const auto& h : t.holes)
    j["holes"].push_back({{"x", h.center.x}, {"y", h.center.y}, {"r", h.radius}});
  j["radio_range"] = t.radio_range;
  j["min_separation"] = t.min_separation;
  j["require_connected"] = t.require_connected;
  j["file"] = t.file;
  return j;
}

}  // namespace

ExperimentPlan plan_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(j,
               {"protocols", "topologies", "seeds", "traffic", "link", "energy",
                "beacon", "compass", "planarization", "tpgf_max_paths", "trace",
                "out_dir"},
               "plan");
  ExperimentPlan p;
  if (!j.contains("protocols") || j.at("protocols").empty())
    throw ConfigError("plan: \"protocols\" must list at least one protocol");
  for (const auto& s : j.at("protocols"))
    p.protocols.push_back(protocol_from_string(s.get<std::string>()));
  if (!j.contains("topologies") || j.at("topologies").empty())
    throw ConfigError("plan: \"topologies\" must list at least one topology");
  for (const auto& t : j.at("topologies")) p.topologies.push_back(topology_from(t));
  p.seeds = get_or(j, "seeds", std::vector<std::uint64_t>{1});
  if (p.seeds.empty()) throw ConfigError("plan: \"seeds\" is empty");

  if (j.contains("traffic")) {
    const auto& t = j.at("traffic");
    require_keys(t, {"images", "image_bits", "image_period_s", "packet_bits"},
                 "traffic");
    p.traffic.images = get_or(t, "images", p.traffic.images);
    p.traffic.image_bits = get_or(t, "image_bits", p.traffic.image_bits);
    p.traffic.image_period_s = get_or(t, "image_period_s", p.traffic.image_period_s);
    p.traffic.packet_bits = get_or(t, "packet_bits", p.traffic.packet_bits);
    if (p.traffic.images < 0 || p.traffic.image_bits <= 0 ||
        p.traffic.image_period_s <= 0 || p.traffic.packet_bits <= 0)
      throw ConfigError("traffic: values out of range");
  }
  if (j.contains("link")) {
    const auto& l = j.at("link");
    require_keys(l, {"data_rate_bps", "per_hop_processing_s", "queue_capacity"},
                 "link");
    p.link.data_rate_bps = get_or(l, "data_rate_bps", p.link.data_rate_bps);
    p.link.per_hop_processing_s =
        get_or(l, "per_hop_processing_s", p.link.per_hop_processing_s);
    p.link.queue_capacity = get_or(l, "queue_capacity", p.link.queue_capacity);
    if (p.link.data_rate_bps <= 0 || p.link.per_hop_processing_s < 0 ||
        p.link.queue_capacity < 1)
      throw ConfigError("link: values out of range");
  }
  if (j.contains("energy")) {
    const auto& e = j.at("energy");
    require_keys(e,
                 {"e_elec_j_per_bit", "eps_amp_j_per_bit_m2", "packet_bits",
                  "initial_j"},
                 "energy");
    p.energy.e_elec = get_or(e, "e_elec_j_per_bit", p.energy.e_elec);
    p.energy.eps_amp = get_or(e, "eps_amp_j_per_bit_m2", p.energy.eps_amp);
    p.energy.packet_bits = get_or(e, "packet_bits", p.energy.packet_bits);
    p.initial_energy_j = get_or(e, "initial_j", p.initial_energy_j);
    if (p.energy.e_elec < 0 || p.energy.eps_amp < 0 || p.initial_energy_j <= 0)
      throw ConfigError("energy: values out of range");
  }
  if (j.contains("beacon")) {
    const auto& b = j.at("beacon");
    require_keys(b, {"enabled", "interval_s", "bits", "spend_energy",
                     "stale_intervals"},
                 "beacon");
    p.beacon.enabled = get_or(b, "enabled", p.beacon.enabled);
    p.beacon.interval_s = get_or(b, "interval_s", p.beacon.interval_s);
    p.beacon.bits = get_or(b, "bits", p.beacon.bits);
    p.beacon.spend_energy = get_or(b, "spend_energy", p.beacon.spend_energy);
    p.beacon.stale_intervals = get_or(b, "stale_intervals", p.beacon.stale_intervals);
    if (p.beacon.interval_s <= 0 || p.beacon.bits < 0 || p.beacon.stale_intervals < 1)
      throw ConfigError("beacon: values out of range");
  }
  if (j.contains("compass")) {
    const auto& c = j.at("compass");
    require_keys(c, {"alpha0_deg", "delta_alpha_deg", "alpha_max_deg", "n_min"},
                 "compass");
    p.compass.alpha0 = get_or(c, "alpha0_deg", p.compass.alpha0);
    p.compass.delta_alpha = get_or(c, "delta_alpha_deg", p.compass.delta_alpha);
    p.compass.alpha_max = get_or(c, "alpha_max_deg", p.compass.alpha_max);
    p.compass.n_min = get_or(c, "n_min", p.compass.n_min);
    if (p.compass.alpha0 <= 0 || p.compass.alpha0 > p.compass.alpha_max ||
        p.compass.delta_alpha <= 0 || p.compass.alpha_max > 180.0 ||
        p.compass.n_min < 1)
      throw ConfigError("compass: values out of range");
  }
  if (j.contains("planarization")) {
    std::string r = j.at("planarization").get<std::string>();
    if (r == "gabriel") p.planarization = PlanarizationRule::Gabriel;
    else if (r == "rng") p.planarization = PlanarizationRule::RelativeNeighborhood;
    else throw ConfigError("planarization: expected \"gabriel\" or \"rng\"");
  }
  p.tpgf_max_paths = get_or(j, "tpgf_max_paths", p.tpgf_max_paths);
  if (p.tpgf_max_paths < 0) throw ConfigError("tpgf_max_paths < 0");
  if (j.contains("trace")) {
    const auto& t = j.at("trace");
    require_keys(t, {"decisions", "events", "paths"}, "trace");
    p.trace.decisions = get_or(t, "decisions", p.trace.decisions);
    p.trace.events = get_or(t, "events", p.trace.events);
    p.trace.paths = get_or(t, "paths", p.trace.paths);
  }
  p.out_dir = get_or<std::string>(j, "out_dir", p.out_dir);
  return p;
}

namespace {

json plan_to_json_obj(const ExperimentPlan& p) {
  json j;
  j["protocols"] = json::array();
  for (Protocol pr : p.protocols) j["protocols"].push_back(to_string(pr));
  j["topologies"] = json::array();
  for (const auto& t : p.topologies) j["topologies"].push_back(topology_to(t));
  j["seeds"] = p.seeds;
  j["traffic"] = {{"images", p.traffic.images},
                  {"image_bits", p.traffic.image_bits},
                  {"image_period_s", p.traffic.image_period_s},
                  {"packet_bits", p.traffic.packet_bits}};
  j["link"] = {{"data_rate_bps", p.link.data_rate_bps},
               {"per_hop_processing_s", p.link.per_hop_processing_s},
               {"queue_capacity", p.link.queue_capacity}};
  j["energy"] = {{"e_elec_j_per_bit", p.energy.e_elec},
                 {"eps_amp_j_per_bit_m2", p.energy.eps_amp},
                 {"packet_bits", p.energy.packet_bits},
                 {"initial_j", p.initial_energy_j}};
  j["beacon"] = {{"enabled", p.beacon.enabled},
                 {"interval_s", p.beacon.interval_s},
                 {"bits", p.beacon.bits},
                 {"spend_energy", p.beacon.spend_energy},
                 {"stale_intervals", p.beacon.stale_intervals}};
  j["compass"] = {{"alpha0_deg", p.compass.alpha0},
                  {"delta_alpha_deg", p.compass.delta_alpha},
                  {"alpha_max_deg", p.compass.alpha_max},
                  {"n_min", p.compass.n_min}};
  j["planarization"] = to_string(p.planarization);
  j["tpgf_max_paths"] = p.tpgf_max_paths;
  j["trace"] = {{"decisions", p.trace.decisions},
                {"events", p.trace.events},
                {"paths", p.trace.paths}};
  j["out_dir"] = p.out_dir;
  return j;
}

}  // namespace

std::string plan_to_json(const ExperimentPlan& p) {
  return plan_to_json_obj(p).dump(2) + "\n";
}

std::string scenario_to_json(const Scenario& s) {
  ExperimentPlan p;
  p.protocols = {s.protocol};
  p.topologies = {s.topology};
  p.seeds = {s.seed};
  p.traffic = s.traffic;
  p.link = s.link;
  p.energy = s.energy;
  p.initial_energy_j = s.initial_energy_j;
  p.beacon = s.beacon;
  p.compass = s.compass;
  p.planarization = s.planarization;
  p.tpgf_max_paths = s.tpgf_max_paths;
  p.trace = s.trace;
  json j = plan_to_json_obj(p);
  j.erase("out_dir");
  return j.dump(2) + "\n";
}

}  // namespace wmsn
