#pragma once

// Experiment plumbing: flat `section.key = value` configuration with a
// generated defaults dump, deterministic CSV emission (results + per-
// algorithm summary), a strict CSV round-trip parser, and SVG charts.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainsim/placement.hpp"
#include "chainsim/simulator.hpp"
#include "chainsim/svg.hpp"
#include "chainsim/topology.hpp"

namespace chainsim {

struct RunConfig {
  std::vector<Algorithm> algorithms{Algorithm::Gbmp, Algorithm::Ksmp, Algorithm::Ecmp,
                                    Algorithm::Ilps};
  std::vector<std::uint64_t> seeds;  // explicit list; empty = 1..seed_count
  int seed_count = 3;
  std::string out_dir = "out";
  bool plots = false;
  bool timings = false;  // when false, wall_ms is written as 0 for reproducible files
};

struct ExperimentConfig {
  TopologyConfig topology;
  ScenarioConfig scenario;
  PlacementParams placement;
  RunConfig run;

  std::vector<std::uint64_t> effective_seeds() const {
    if (!run.seeds.empty()) return run.seeds;
    std::vector<std::uint64_t> s;
    for (int i = 1; i <= run.seed_count; ++i) s.push_back(static_cast<std::uint64_t>(i));
    return s;
  }
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::int64_t parse_i64_value(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw std::invalid_argument("empty integer");
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (errno != 0 || end != t.c_str() + t.size())
    throw std::invalid_argument("not an integer: '" + t + "'");
  return v;
}

inline std::uint64_t parse_u64_value(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty() || t[0] == '-') throw std::invalid_argument("not a nonnegative integer: '" + t + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (errno != 0 || end != t.c_str() + t.size())
    throw std::invalid_argument("not an integer: '" + t + "'");
  return v;
}

inline double parse_f64_value(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (errno != 0 || end != t.c_str() + t.size())
    throw std::invalid_argument("not a number: '" + t + "'");
  return v;
}

inline bool parse_bool_value(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "off" || t == "no") return false;
  throw std::invalid_argument("not a boolean: '" + t + "'");
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw std::invalid_argument("empty list element");
    out.push_back(t);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt_csv(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct KeyDef {
  const char* key;
  const char* doc;
  std::string (*get)(const ExperimentConfig&);
  void (*set)(ExperimentConfig&, const std::string&);
};

inline const std::vector<KeyDef>& config_keys() {
  using C = ExperimentConfig;
  static const std::vector<KeyDef> keys = {
      // --- topology ---
      {"topology.ecn_count", "number of edge compute nodes (>= 1)",
       [](const C& c) { return std::to_string(c.topology.ecn_count); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.ecn_count = static_cast<int>(x);
       }},
      {"topology.tree_depth", "optical switch tree depth (>= 0; 0 = single hub)",
       [](const C& c) { return std::to_string(c.topology.tree_depth); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 0, "must be >= 0");
         c.topology.tree_depth = static_cast<int>(x);
       }},
      {"topology.tree_fanout", "children per switch level (>= 1)",
       [](const C& c) { return std::to_string(c.topology.tree_fanout); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.tree_fanout = static_cast<int>(x);
       }},
      {"topology.star_leaves_per_hub", "ECN attachment slots per access hub (>= 1)",
       [](const C& c) { return std::to_string(c.topology.star_leaves_per_hub); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.star_leaves_per_hub = static_cast<int>(x);
       }},
      {"topology.optical_bandwidth", "optical link bandwidth, bits/s (>= 1)",
       [](const C& c) { return std::to_string(c.topology.optical_bandwidth); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.optical_bandwidth = x;
       }},
      {"topology.wireless_bandwidth", "wireless channel bandwidth, bits/s (>= 1)",
       [](const C& c) { return std::to_string(c.topology.wireless_bandwidth); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.wireless_bandwidth = x;
       }},
      {"topology.wireless_channels", "wireless channels per access hub (>= 1)",
       [](const C& c) { return std::to_string(c.topology.wireless_channels); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.wireless_channels = static_cast<int>(x);
       }},
      {"topology.compute_capacity_mean", "mean ECN capacity, cycles/s (>= 1)",
       [](const C& c) { return std::to_string(c.topology.compute_capacity_mean); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.compute_capacity_mean = x;
       }},
      {"topology.compute_capacity_spread", "ECN capacity half-range, cycles/s (>= 0)",
       [](const C& c) { return std::to_string(c.topology.compute_capacity_spread); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 0, "must be >= 0");
         c.topology.compute_capacity_spread = x;
       }},
      {"topology.switch_capacity", "flow table entries per switch (>= 1)",
       [](const C& c) { return std::to_string(c.topology.switch_capacity); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.topology.switch_capacity = x;
       }},
      {"topology.rng_seed", "seed for capacity draws",
       [](const C& c) { return std::to_string(c.topology.rng_seed); },
       [](C& c, const std::string& v) { c.topology.rng_seed = parse_u64_value(v); }},
      {"topology.hub_ring", "ring links between access hubs for path diversity (bool)",
       [](const C& c) { return std::string(c.topology.hub_ring ? "true" : "false"); },
       [](C& c, const std::string& v) { c.topology.hub_ring = parse_bool_value(v); }},
      {"topology.optical_prop_delay_s", "per-link optical propagation delay, s (>= 0)",
       [](const C& c) { return fmt_g(c.topology.optical_prop_delay_s); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x >= 0, "must be >= 0");
         c.topology.optical_prop_delay_s = x;
       }},
      {"topology.wireless_prop_delay_s", "per-link wireless propagation delay, s (>= 0)",
       [](const C& c) { return fmt_g(c.topology.wireless_prop_delay_s); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x >= 0, "must be >= 0");
         c.topology.wireless_prop_delay_s = x;
       }},
      // --- scenario ---
      {"scenario.kind",
       "workload profile: data_intensive | user_intensive (re-defaults unset scenario keys)",
       [](const C& c) { return std::string(to_string(c.scenario.kind)); },
       [](C& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "data_intensive")
           c.scenario.kind = ScenarioKind::DataIntensive;
         else if (t == "user_intensive")
           c.scenario.kind = ScenarioKind::UserIntensive;
         else
           throw std::invalid_argument("must be data_intensive or user_intensive");
       }},
      {"scenario.chain_len_min", "minimum VNFs per chain (>= 0)",
       [](const C& c) { return std::to_string(c.scenario.chain_len_min); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 0, "must be >= 0");
         c.scenario.chain_len_min = static_cast<int>(x);
       }},
      {"scenario.chain_len_max", "maximum VNFs per chain (>= chain_len_min)",
       [](const C& c) { return std::to_string(c.scenario.chain_len_max); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 0, "must be >= 0");
         c.scenario.chain_len_max = static_cast<int>(x);
       }},
      {"scenario.cpu_demand_min", "minimum CPU work per stage, cycles (>= 1)",
       [](const C& c) { return std::to_string(c.scenario.cpu_demand_min); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.scenario.cpu_demand_min = x;
       }},
      {"scenario.cpu_demand_max", "maximum CPU work per stage, cycles (>= min)",
       [](const C& c) { return std::to_string(c.scenario.cpu_demand_max); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.scenario.cpu_demand_max = x;
       }},
      {"scenario.data_size_min", "minimum chain data size, bytes (>= 1)",
       [](const C& c) { return std::to_string(c.scenario.data_size_min); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.scenario.data_size_min = x;
       }},
      {"scenario.data_size_max", "maximum chain data size, bytes (>= min)",
       [](const C& c) { return std::to_string(c.scenario.data_size_max); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.scenario.data_size_max = x;
       }},
      {"scenario.bw_window_s", "nominal transfer window, s; demand = bits/window (> 0)",
       [](const C& c) { return fmt_g(c.scenario.bw_window_s); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x > 0, "must be > 0");
         c.scenario.bw_window_s = x;
       }},
      {"scenario.delay_bound_s", "end-to-end delay bound per request, s (> 0)",
       [](const C& c) { return fmt_g(c.scenario.delay_bound_s); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x > 0, "must be > 0");
         c.scenario.delay_bound_s = x;
       }},
      {"scenario.request_counts", "snapshot points, comma-separated request counts",
       [](const C& c) {
         std::string s;
         for (int x : c.scenario.request_counts) {
           if (!s.empty()) s += ",";
           s += std::to_string(x);
         }
         return s;
       },
       [](C& c, const std::string& v) {
         std::vector<int> counts;
         for (const auto& item : split_list(v)) {
           const auto x = parse_i64_value(item);
           require(x >= 0, "counts must be >= 0");
           counts.push_back(static_cast<int>(x));
         }
         c.scenario.request_counts = std::move(counts);
       }},
      {"scenario.vnf_catalog", "comma-separated VNF kind labels",
       [](const C& c) {
         std::string s;
         for (const auto& x : c.scenario.vnf_catalog) {
           if (!s.empty()) s += ",";
           s += x;
         }
         return s;
       },
       [](C& c, const std::string& v) { c.scenario.vnf_catalog = split_list(v); }},
      {"scenario.rng_seed", "request-stream seed used when run seeds are not given",
       [](const C& c) { return std::to_string(c.scenario.rng_seed); },
       [](C& c, const std::string& v) { c.scenario.rng_seed = parse_u64_value(v); }},
      // --- placement ---
      {"placement.max_paths", "split width / paths per query (>= 1)",
       [](const C& c) { return std::to_string(c.placement.max_paths); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.placement.max_paths = static_cast<int>(x);
       }},
      {"placement.candidate_pool_size", "greedy candidate pool size (0 = max_paths)",
       [](const C& c) { return std::to_string(c.placement.candidate_pool_size); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 0, "must be >= 0");
         c.placement.candidate_pool_size = static_cast<int>(x);
       }},
      {"placement.weight_compute", "objective weight for compute balance (>= 0)",
       [](const C& c) { return fmt_g(c.placement.weights.alpha); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x >= 0, "must be >= 0");
         c.placement.weights.alpha = x;
       }},
      {"placement.weight_network", "objective weight for link balance (>= 0)",
       [](const C& c) { return fmt_g(c.placement.weights.beta); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x >= 0, "must be >= 0");
         c.placement.weights.beta = x;
       }},
      {"placement.weight_switch", "objective weight for switch balance (>= 0)",
       [](const C& c) { return fmt_g(c.placement.weights.gamma); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x >= 0, "must be >= 0");
         c.placement.weights.gamma = x;
       }},
      {"placement.bisection_tol", "min-max split tolerance, fraction of demand (> 0)",
       [](const C& c) { return fmt_g(c.placement.bisection_tol); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x > 0, "must be > 0");
         c.placement.bisection_tol = x;
       }},
      {"placement.split_metric", "peak metric for min-max splits: utilization | absolute",
       [](const C& c) {
         return std::string(c.placement.split_metric == LoadMetric::Utilization ? "utilization"
                                                                                : "absolute");
       },
       [](C& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "utilization")
           c.placement.split_metric = LoadMetric::Utilization;
         else if (t == "absolute")
           c.placement.split_metric = LoadMetric::Absolute;
         else
           throw std::invalid_argument("must be utilization or absolute");
       }},
      {"placement.cpu_window_s", "window converting CPU work to a sustained rate, s (> 0)",
       [](const C& c) { return fmt_g(c.placement.cpu_window_s); },
       [](C& c, const std::string& v) {
         const double x = parse_f64_value(v);
         require(x > 0, "must be > 0");
         c.placement.cpu_window_s = x;
       }},
      {"placement.ilps_exact_budget", "max assignments scored by the single-path search (>= 1)",
       [](const C& c) { return std::to_string(c.placement.ilps_exact_budget); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.placement.ilps_exact_budget = x;
       }},
      // --- run ---
      {"run.algorithms", "comma-separated: gbmp, ksmp, ecmp, ilps",
       [](const C& c) {
         std::string s;
         for (Algorithm a : c.run.algorithms) {
           if (!s.empty()) s += ",";
           s += to_string(a);
         }
         return s;
       },
       [](C& c, const std::string& v) {
         std::vector<Algorithm> algos;
         for (const auto& item : split_list(v)) {
           const auto a = algorithm_from_string(item);
           if (!a) throw std::invalid_argument("unknown algorithm: '" + item + "'");
           algos.push_back(*a);
         }
         c.run.algorithms = std::move(algos);
       }},
      {"run.seeds", "explicit comma-separated seeds (overrides run.seed_count)",
       [](const C& c) {
         std::string s;
         for (auto x : c.run.seeds) {
           if (!s.empty()) s += ",";
           s += std::to_string(x);
         }
         return s;
       },
       [](C& c, const std::string& v) {
         std::vector<std::uint64_t> seeds;
         if (!trim(v).empty())
           for (const auto& item : split_list(v)) seeds.push_back(parse_u64_value(item));
         c.run.seeds = std::move(seeds);
       }},
      {"run.seed_count", "number of seeds 1..N when run.seeds is unset (>= 1)",
       [](const C& c) { return std::to_string(c.run.seed_count); },
       [](C& c, const std::string& v) {
         const auto x = parse_i64_value(v);
         require(x >= 1, "must be >= 1");
         c.run.seed_count = static_cast<int>(x);
       }},
      {"run.out_dir", "output directory for CSV/SVG files",
       [](const C& c) { return c.run.out_dir; },
       [](C& c, const std::string& v) {
         const std::string t = trim(v);
         require(!t.empty(), "must be nonempty");
         c.run.out_dir = t;
       }},
      {"run.plots", "emit SVG charts (bool)",
       [](const C& c) { return std::string(c.run.plots ? "true" : "false"); },
       [](C& c, const std::string& v) { c.run.plots = parse_bool_value(v); }},
      {"run.timings", "record wall-clock times in results.csv (breaks byte-reproducibility)",
       [](const C& c) { return std::string(c.run.timings ? "true" : "false"); },
       [](C& c, const std::string& v) { c.run.timings = parse_bool_value(v); }},
  };
  return keys;
}

inline const KeyDef* find_key(const std::string& key) {
  for (const auto& k : config_keys())
    if (key == k.key) return &k;
  return nullptr;
}

}  // namespace detail

// Cross-field validation shared by the parser and callers that build
// configs programmatically. Throws ConfigError.
inline void validate_config(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.scenario.chain_len_max < cfg.scenario.chain_len_min)
    fail("scenario.chain_len_max: must be >= scenario.chain_len_min");
  if (cfg.scenario.cpu_demand_max < cfg.scenario.cpu_demand_min)
    fail("scenario.cpu_demand_max: must be >= scenario.cpu_demand_min");
  if (cfg.scenario.data_size_max < cfg.scenario.data_size_min)
    fail("scenario.data_size_max: must be >= scenario.data_size_min");
  if (cfg.run.algorithms.empty()) fail("run.algorithms: must be nonempty");
  if (cfg.effective_seeds().empty()) fail("run.seeds: must be nonempty");
  try {
    detail::validate_scenario(cfg.scenario);
  } catch (const std::invalid_argument& e) {
    fail(std::string("scenario: ") + e.what());
  }
  try {
    (void)build_tree_star(cfg.topology);
  } catch (const std::invalid_argument& e) {
    fail(std::string("topology: ") + e.what());
  }
}

// Parses `section.key = value` text. `origin` names the source in error
// messages. Unknown keys, duplicate keys, and malformed lines fail fast
// with their line number. A scenario.kind assignment switches the
// scenario defaults before the remaining keys apply, wherever it
// appears in the file.
inline ExperimentConfig parse_config_text(const std::string& text,
                                          const std::string& origin = "<config>") {
  struct Assignment {
    int line;
    const detail::KeyDef* def;
    std::string value;
  };
  std::vector<Assignment> assignments;
  std::vector<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'section.key = value'");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    const auto* def = detail::find_key(key);
    if (!def)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    for (const auto& s : seen)
      if (s == key)
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                          "'");
    seen.push_back(key);
    assignments.push_back({line_no, def, value});
  }

  ExperimentConfig cfg;
  // Profile switch first, so explicit keys override the profile defaults
  // regardless of their position in the file.
  for (const auto& a : assignments)
    if (std::string(a.def->key) == "scenario.kind") {
      ScenarioKind kind = cfg.scenario.kind;
      try {
        ExperimentConfig probe;
        a.def->set(probe, a.value);
        kind = probe.scenario.kind;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ":" + std::to_string(a.line) + ": scenario.kind: " + e.what());
      }
      cfg.scenario = kind == ScenarioKind::UserIntensive ? ScenarioConfig::user_intensive()
                                                         : ScenarioConfig::data_intensive();
    }
  for (const auto& a : assignments) {
    if (std::string(a.def->key) == "scenario.kind") continue;
    try {
      a.def->set(cfg, a.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(origin + ":" + std::to_string(a.line) + ": " + a.def->key + ": " +
                        e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

// Generated defaults dump: every key with its documentation and default
// value (data-intensive profile).
inline std::string print_defaults() {
  ExperimentConfig cfg;
  std::string out;
  out += "# experiment configuration: 'section.key = value' lines, '#' comments\n";
  out += "# defaults shown below use the data_intensive scenario profile;\n";
  out += "# setting scenario.kind = user_intensive re-defaults the scenario keys\n";
  out += "# you leave unset\n";
  for (const auto& k : detail::config_keys()) {
    out += "\n# ";
    out += k.doc;
    out += "\n";
    out += k.key;
    out += " = ";
    const std::string v = k.get(cfg);
    out += v.empty() ? "" : v;
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission and round-trip
// ---------------------------------------------------------------------------

inline const char* results_csv_header() {
  return "algorithm,scenario,seed,n_requests,accepted,acceptance_ratio,network_utilization,"
         "link_util_stddev,lbi_c,lbi_n,lbi_s,lbi_composite,wall_ms";
}

inline std::string results_csv(const std::vector<SimulationResult>& results,
                               bool timings = false) {
  std::string out = results_csv_header();
  out += "\n";
  for (const auto& r : results)
    for (const auto& p : r.points) {
      out += to_string(r.algorithm);
      out += ",";
      out += to_string(r.scenario);
      out += ",";
      out += std::to_string(r.seed);
      out += ",";
      out += std::to_string(p.n_requests);
      out += ",";
      out += std::to_string(p.accepted);
      out += ",";
      out += detail::fmt_csv(p.acceptance_ratio);
      out += ",";
      out += detail::fmt_csv(p.network_utilization);
      out += ",";
      out += detail::fmt_csv(p.link_util_stddev);
      out += ",";
      out += detail::fmt_csv(p.lbi.lbi_c);
      out += ",";
      out += detail::fmt_csv(p.lbi.lbi_n);
      out += ",";
      out += detail::fmt_csv(p.lbi.lbi_s);
      out += ",";
      out += detail::fmt_csv(p.lbi.composite);
      out += ",";
      out += detail::fmt_csv(timings ? p.wall_ms : 0.0);
      out += "\n";
    }
  return out;
}

// Strict inverse of results_csv to printed precision.
inline std::vector<SimulationResult> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("results csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != results_csv_header()) throw std::invalid_argument("results csv: bad header");
  std::vector<SimulationResult> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 13)
      throw std::invalid_argument("results csv line " + std::to_string(line_no) +
                                  ": expected 13 fields");
    const auto algo = algorithm_from_string(f[0]);
    if (!algo)
      throw std::invalid_argument("results csv line " + std::to_string(line_no) +
                                  ": unknown algorithm '" + f[0] + "'");
    ScenarioKind kind;
    if (f[1] == "data_intensive")
      kind = ScenarioKind::DataIntensive;
    else if (f[1] == "user_intensive")
      kind = ScenarioKind::UserIntensive;
    else
      throw std::invalid_argument("results csv line " + std::to_string(line_no) +
                                  ": unknown scenario '" + f[1] + "'");
    const std::uint64_t seed = detail::parse_u64_value(f[2]);
    if (out.empty() || out.back().algorithm != *algo || out.back().scenario != kind ||
        out.back().seed != seed) {
      SimulationResult r;
      r.algorithm = *algo;
      r.scenario = kind;
      r.seed = seed;
      out.push_back(std::move(r));
    }
    SnapshotMetrics p;
    p.n_requests = static_cast<int>(detail::parse_i64_value(f[3]));
    p.accepted = static_cast<int>(detail::parse_i64_value(f[4]));
    p.acceptance_ratio = detail::parse_f64_value(f[5]);
    p.network_utilization = detail::parse_f64_value(f[6]);
    p.link_util_stddev = detail::parse_f64_value(f[7]);
    p.lbi.lbi_c = detail::parse_f64_value(f[8]);
    p.lbi.lbi_n = detail::parse_f64_value(f[9]);
    p.lbi.lbi_s = detail::parse_f64_value(f[10]);
    p.lbi.composite = detail::parse_f64_value(f[11]);
    p.wall_ms = detail::parse_f64_value(f[12]);
    out.back().points.push_back(p);
  }
  return out;
}

namespace detail {

struct SummaryCell {
  std::vector<double> acceptance, utilization, stddev, lbi_c, lbi_n, lbi_s, composite;
};

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stddev_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace detail

inline const char* summary_csv_header() {
  return "algorithm,scenario,n_requests,n_seeds,acceptance_ratio_mean,acceptance_ratio_std,"
         "network_utilization_mean,network_utilization_std,link_util_stddev_mean,"
         "link_util_stddev_std,lbi_c_mean,lbi_c_std,lbi_n_mean,lbi_n_std,lbi_s_mean,lbi_s_std,"
         "lbi_composite_mean,lbi_composite_std";
}

// Per-(algorithm, n_requests) means and population standard deviations
// over seeds. Algorithms keep their first-appearance order; points are
// ascending in n_requests.
inline std::string summary_csv(const std::vector<SimulationResult>& results) {
  std::vector<Algorithm> algo_order;
  ScenarioKind kind = results.empty() ? ScenarioKind::DataIntensive : results.front().scenario;
  std::map<std::pair<int, int>, detail::SummaryCell> cells;  // (algo rank, n_requests)
  for (const auto& r : results) {
    std::size_t rank = algo_order.size();
    for (std::size_t i = 0; i < algo_order.size(); ++i)
      if (algo_order[i] == r.algorithm) {
        rank = i;
        break;
      }
    if (rank == algo_order.size()) algo_order.push_back(r.algorithm);
    for (const auto& p : r.points) {
      auto& c = cells[{static_cast<int>(rank), p.n_requests}];
      c.acceptance.push_back(p.acceptance_ratio);
      c.utilization.push_back(p.network_utilization);
      c.stddev.push_back(p.link_util_stddev);
      c.lbi_c.push_back(p.lbi.lbi_c);
      c.lbi_n.push_back(p.lbi.lbi_n);
      c.lbi_s.push_back(p.lbi.lbi_s);
      c.composite.push_back(p.lbi.composite);
    }
  }
  std::string out = summary_csv_header();
  out += "\n";
  for (const auto& [key, c] : cells) {
    out += to_string(algo_order[static_cast<std::size_t>(key.first)]);
    out += ",";
    out += to_string(kind);
    out += ",";
    out += std::to_string(key.second);
    out += ",";
    out += std::to_string(c.acceptance.size());
    auto push = [&](const std::vector<double>& v) {
      out += ",";
      out += detail::fmt_csv(detail::mean_of(v));
      out += ",";
      out += detail::fmt_csv(detail::stddev_of(v));
    };
    push(c.acceptance);
    push(c.utilization);
    push(c.stddev);
    push(c.lbi_c);
    push(c.lbi_n);
    push(c.lbi_s);
    push(c.composite);
    out += "\n";
  }
  return out;
}

namespace detail {
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}
}  // namespace detail

inline void emit_csv(const std::vector<SimulationResult>& results, const std::string& out_dir,
                     bool timings = false) {
  if (results.empty()) throw std::invalid_argument("emit_csv: no results");
  std::filesystem::create_directories(out_dir);
  detail::write_text_file(std::filesystem::path(out_dir) / "results.csv",
                          results_csv(results, timings));
  detail::write_text_file(std::filesystem::path(out_dir) / "summary.csv", summary_csv(results));
}

// Four charts of per-algorithm seed means over request count.
inline void emit_plots(const std::vector<SimulationResult>& results,
                       const std::string& out_dir) {
  if (results.empty()) throw std::invalid_argument("emit_plots: no results");
  std::vector<Algorithm> algo_order;
  for (const auto& r : results) {
    bool found = false;
    for (Algorithm a : algo_order) found = found || a == r.algorithm;
    if (!found) algo_order.push_back(r.algorithm);
  }
  const std::string scenario_name = to_string(results.front().scenario);

  struct Acc {
    double sum = 0;
    int n = 0;
  };
  auto series_of = [&](double SnapshotMetrics::*field) {
    std::vector<ChartSeries> out;
    for (Algorithm a : algo_order) {
      std::map<int, Acc> acc;
      for (const auto& r : results) {
        if (r.algorithm != a) continue;
        for (const auto& p : r.points) {
          acc[p.n_requests].sum += p.*field;
          acc[p.n_requests].n += 1;
        }
      }
      ChartSeries s;
      s.label = to_string(a);
      for (const auto& [x, v] : acc)
        s.points.emplace_back(static_cast<double>(x), v.sum / std::max(1, v.n));
      out.push_back(std::move(s));
    }
    return out;
  };
  auto series_of_lbi = [&](double LoadBalanceIndicators::*field) {
    std::vector<ChartSeries> out;
    for (Algorithm a : algo_order) {
      std::map<int, Acc> acc;
      for (const auto& r : results) {
        if (r.algorithm != a) continue;
        for (const auto& p : r.points) {
          acc[p.n_requests].sum += p.lbi.*field;
          acc[p.n_requests].n += 1;
        }
      }
      ChartSeries s;
      s.label = to_string(a);
      for (const auto& [x, v] : acc)
        s.points.emplace_back(static_cast<double>(x), v.sum / std::max(1, v.n));
      out.push_back(std::move(s));
    }
    return out;
  };

  std::filesystem::create_directories(out_dir);
  const std::string x_label = "number of service chain requests";
  detail::write_text_file(
      std::filesystem::path(out_dir) / "fig_acceptance.svg",
      render_line_chart("Acceptance ratio (" + scenario_name + ")", x_label, "acceptance ratio",
                        series_of(&SnapshotMetrics::acceptance_ratio)));
  detail::write_text_file(
      std::filesystem::path(out_dir) / "fig_utilization.svg",
      render_line_chart("Network utilization (" + scenario_name + ")", x_label,
                        "network utilization", series_of(&SnapshotMetrics::network_utilization)));
  detail::write_text_file(
      std::filesystem::path(out_dir) / "fig_stddev.svg",
      render_line_chart("Link utilization spread (" + scenario_name + ")", x_label,
                        "stddev of link utilization",
                        series_of(&SnapshotMetrics::link_util_stddev)));
  detail::write_text_file(
      std::filesystem::path(out_dir) / "fig_lbi.svg",
      render_line_chart("Load balance indicator (" + scenario_name + ")", x_label,
                        "composite balance objective",
                        series_of_lbi(&LoadBalanceIndicators::composite)));
}

}  // namespace chainsim
