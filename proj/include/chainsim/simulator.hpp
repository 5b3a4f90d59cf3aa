#pragma once

// Scenario-driven experiment engine: builds deterministic request
// streams for the two IoT workload profiles, feeds them sequentially to
// a deployment algorithm, and snapshots the balance metrics at the
// configured request counts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainsim/chain_model.hpp"
#include "chainsim/placement.hpp"
#include "chainsim/topology.hpp"

namespace chainsim {

enum class ScenarioKind { DataIntensive, UserIntensive };

inline const char* to_string(ScenarioKind k) {
  return k == ScenarioKind::DataIntensive ? "data_intensive" : "user_intensive";
}

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::DataIntensive;
  int chain_len_min = 3;
  int chain_len_max = 5;
  std::int64_t cpu_demand_min = 500'000'000;      // cycles of work per stage
  std::int64_t cpu_demand_max = 1'000'000'000;
  std::int64_t data_size_min = 600'000'000;       // bytes carried by the chain
  std::int64_t data_size_max = 1'000'000'000;
  double bw_window_s = 5.0;       // nominal transfer window: demand = bits / window
  double delay_bound_s = 30.0;    // end-to-end bound stamped on every request
  std::vector<int> request_counts{10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  std::vector<std::string> vnf_catalog{"firewall", "ids",     "nat",     "proxy",
                                       "cache",    "encoder", "monitor", "shaper"};
  std::uint64_t rng_seed = 1;

  // Bulk-transfer profile: few heavy chains (hundreds of MB, ~1 Gcycle
  // stages) pushed until the optical links saturate.
  static ScenarioConfig data_intensive() { return ScenarioConfig{}; }

  // Interactive profile: many light chains (hundreds of KB, tens of
  // Mcycles) with a tight transfer window.
  static ScenarioConfig user_intensive() {
    ScenarioConfig s;
    s.kind = ScenarioKind::UserIntensive;
    s.cpu_demand_min = 10'000'000;
    s.cpu_demand_max = 100'000'000;
    s.data_size_min = 300'000;
    s.data_size_max = 800'000;
    s.bw_window_s = 0.1;
    s.delay_bound_s = 10.0;
    s.request_counts = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
    return s;
  }
};

namespace detail {
inline void validate_scenario(const ScenarioConfig& s) {
  if (s.chain_len_min < 0 || s.chain_len_max < s.chain_len_min)
    throw std::invalid_argument("scenario: bad chain length range");
  if (s.cpu_demand_min <= 0 || s.cpu_demand_max < s.cpu_demand_min)
    throw std::invalid_argument("scenario: bad cpu demand range");
  if (s.data_size_min <= 0 || s.data_size_max < s.data_size_min)
    throw std::invalid_argument("scenario: bad data size range");
  if (s.bw_window_s <= 0) throw std::invalid_argument("scenario: bad transfer window");
  if (s.delay_bound_s <= 0) throw std::invalid_argument("scenario: bad delay bound");
  if (s.vnf_catalog.empty()) throw std::invalid_argument("scenario: empty VNF catalog");
  if (s.request_counts.empty()) throw std::invalid_argument("scenario: no request counts");
  for (int c : s.request_counts)
    if (c < 0) throw std::invalid_argument("scenario: negative request count");
}
}  // namespace detail

// Deterministic request stream: depends only on (scenario, seed, net).
// Draw order per request is fixed (length, kinds, cpu, data, ingress,
// egress) so any prefix of a longer stream equals the shorter stream.
inline std::vector<ServiceChainRequest> generate_requests(const ScenarioConfig& scenario,
                                                          int n,
                                                          const PhysicalNetwork& net) {
  detail::validate_scenario(scenario);
  if (n < 0) throw std::invalid_argument("generate_requests: n must be >= 0");
  const auto access = net.access_node_ids();
  if (access.size() < 2)
    throw std::invalid_argument("generate_requests: need at least two access nodes");

  Rng rng(scenario.rng_seed);
  std::vector<ServiceChainRequest> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ServiceChainRequest req;
    req.id = i;
    const int len = static_cast<int>(
        rng.uniform_i64(scenario.chain_len_min, scenario.chain_len_max));
    for (int s = 0; s < len; ++s) {
      const auto pick = static_cast<std::size_t>(
          rng.uniform_i64(0, static_cast<std::int64_t>(scenario.vnf_catalog.size()) - 1));
      req.vnf_sequence.push_back(VnfKind{scenario.vnf_catalog[pick]});
    }
    req.cpu_demand = rng.uniform_i64(scenario.cpu_demand_min, scenario.cpu_demand_max);
    req.data_size = rng.uniform_i64(scenario.data_size_min, scenario.data_size_max);
    req.bandwidth_demand = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(
               static_cast<double>(req.data_size) * 8.0 / scenario.bw_window_s)));
    req.delay_bound = scenario.delay_bound_s;
    const auto in_pick = static_cast<std::size_t>(
        rng.uniform_i64(0, static_cast<std::int64_t>(access.size()) - 1));
    auto eg_pick = static_cast<std::size_t>(
        rng.uniform_i64(0, static_cast<std::int64_t>(access.size()) - 2));
    if (eg_pick >= in_pick) ++eg_pick;  // distinct endpoints
    req.ingress = access[in_pick];
    req.egress = access[eg_pick];
    out.push_back(std::move(req));
  }
  return out;
}

struct SnapshotMetrics {
  int n_requests = 0;
  int accepted = 0;
  double acceptance_ratio = 1.0;
  double network_utilization = 0.0;  // sum of link loads / sum of bandwidths
  double link_util_stddev = 0.0;
  LoadBalanceIndicators lbi;
  double wall_ms = 0.0;  // elapsed time from run start to this snapshot
};

struct SimulationResult {
  Algorithm algorithm = Algorithm::Gbmp;
  ScenarioKind scenario = ScenarioKind::DataIntensive;
  std::uint64_t seed = 0;
  std::vector<SnapshotMetrics> points;
};

// Everything a test needs to audit a run: the result, the loaded
// network, the applied plans, and each request's outcome.
struct RunArtifacts {
  SimulationResult result;
  PhysicalNetwork final_net;
  std::vector<DeploymentPlan> plans;        // accepted, in admission order
  std::vector<RejectReason> outcomes;       // per request; None = accepted
};

namespace detail {
inline double network_utilization(const PhysicalNetwork& net) {
  std::int64_t load = 0, cap = 0;
  for (const auto& l : net.links()) {
    load += l.load;
    cap += l.bandwidth;
  }
  return cap > 0 ? static_cast<double>(load) / static_cast<double>(cap) : 0.0;
}
}  // namespace detail

inline RunArtifacts run_simulation_detailed(const PhysicalNetwork& net_in,
                                            const ScenarioConfig& scenario,
                                            Algorithm algorithm,
                                            const PlacementParams& params,
                                            std::uint64_t seed) {
  detail::validate_scenario(scenario);
  RunArtifacts art;
  art.final_net = net_in;
  PhysicalNetwork& net = art.final_net;
  const PlacementContext ctx = PlacementContext::build(net, params.max_paths);

  ScenarioConfig streamed = scenario;
  streamed.rng_seed = seed;
  std::vector<int> counts = scenario.request_counts;
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  const int total = counts.empty() ? 0 : counts.back();
  const auto requests = generate_requests(streamed, total, net);

  art.result.algorithm = algorithm;
  art.result.scenario = scenario.kind;
  art.result.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  int accepted = 0;
  std::size_t next_snapshot = 0;
  auto take_snapshot = [&](int n_done) {
    SnapshotMetrics snap;
    snap.n_requests = n_done;
    snap.accepted = accepted;
    snap.acceptance_ratio =
        n_done > 0 ? static_cast<double>(accepted) / static_cast<double>(n_done) : 1.0;
    snap.network_utilization = detail::network_utilization(net);
    snap.lbi = compute_lbi(net, params.weights);
    snap.link_util_stddev = snap.lbi.lbi_n;
    snap.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    art.result.points.push_back(snap);
  };

  while (next_snapshot < counts.size() && counts[next_snapshot] == 0) {
    take_snapshot(0);
    ++next_snapshot;
  }
  for (int i = 0; i < total; ++i) {
    auto outcome = deploy(algorithm, net, requests[static_cast<std::size_t>(i)], params, &ctx);
    if (outcome.accepted()) {
      ++accepted;
      art.plans.push_back(std::move(*outcome.plan));
      art.outcomes.push_back(RejectReason::None);
    } else {
      art.outcomes.push_back(outcome.reason);
    }
    while (next_snapshot < counts.size() && counts[next_snapshot] == i + 1) {
      take_snapshot(i + 1);
      ++next_snapshot;
    }
  }
  return art;
}

inline SimulationResult run_simulation(const PhysicalNetwork& net,
                                       const ScenarioConfig& scenario, Algorithm algorithm,
                                       const PlacementParams& params, std::uint64_t seed) {
  return run_simulation_detailed(net, scenario, algorithm, params, seed).result;
}

// Cartesian product of algorithms x seeds, each run on an independent
// fresh network built from `net_config`. Result order follows the given
// algorithm order, then the given seed order.
inline std::vector<SimulationResult> sweep(const TopologyConfig& net_config,
                                           const ScenarioConfig& scenario,
                                           const std::vector<Algorithm>& algorithms,
                                           const std::vector<std::uint64_t>& seeds,
                                           const PlacementParams& params) {
  if (algorithms.empty()) throw std::invalid_argument("sweep: no algorithms");
  if (seeds.empty()) throw std::invalid_argument("sweep: no seeds");
  std::vector<SimulationResult> out;
  out.reserve(algorithms.size() * seeds.size());
  for (Algorithm a : algorithms)
    for (std::uint64_t s : seeds) {
      const PhysicalNetwork net = build_tree_star(net_config);
      out.push_back(run_simulation(net, scenario, a, params, s));
    }
  return out;
}

}  // namespace chainsim
