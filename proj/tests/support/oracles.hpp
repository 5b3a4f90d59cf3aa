#pragma once

// Independent reference implementations ("oracles") used only by tests.
// Each deliberately takes a different algorithmic route than the library
// code it checks: pair-counting BFS instead of Brandes, exhaustive DFS
// path enumeration instead of Yen, closed-form water levels instead of
// bisection, greedy cheapest-fill instead of tableau simplex, and
// map-based resource re-summation instead of footprint accounting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chainsim/chain_model.hpp"
#include "chainsim/placement.hpp"
#include "chainsim/solvers.hpp"
#include "chainsim/topology.hpp"

namespace oracles {

using chainsim::DeploymentPlan;
using chainsim::LinkId;
using chainsim::NodeId;
using chainsim::NodeKind;
using chainsim::Path;
using chainsim::PhysicalNetwork;
using chainsim::Rng;
using chainsim::ServiceChainRequest;
using chainsim::SplitProblem;

// ---------------------------------------------------------------------------
// Graph oracles
// ---------------------------------------------------------------------------

inline std::vector<int> bfs_dist(const PhysicalNetwork& net, NodeId src) {
  std::vector<int> dist(static_cast<std::size_t>(net.node_count()), -1);
  std::deque<NodeId> q{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (const auto& [v, l] : net.neighbors(u)) {
      (void)l;
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

// Counts shortest unweighted paths from src to every node.
inline std::vector<double> bfs_sigma(const PhysicalNetwork& net, NodeId src,
                                     const std::vector<int>& dist) {
  std::vector<double> sigma(static_cast<std::size_t>(net.node_count()), 0.0);
  sigma[static_cast<std::size_t>(src)] = 1.0;
  std::vector<NodeId> order;
  for (int n = 0; n < net.node_count(); ++n) order.push_back(n);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
  });
  for (NodeId v : order) {
    if (dist[static_cast<std::size_t>(v)] <= 0) continue;
    for (const auto& [u, l] : net.neighbors(v)) {
      (void)l;
      if (dist[static_cast<std::size_t>(u)] == dist[static_cast<std::size_t>(v)] - 1)
        sigma[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(u)];
    }
  }
  return sigma;
}

// Betweenness by direct pair counting: for every unordered pair (s,t)
// and interior node v on some shortest s-t path, add
// sigma_s(v) * sigma_t(v) / sigma_s(t).
inline std::vector<double> brute_betweenness(const PhysicalNetwork& net) {
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<double> bc(n, 0.0);
  for (NodeId s = 0; s < net.node_count(); ++s) {
    const auto ds = bfs_dist(net, s);
    const auto sig_s = bfs_sigma(net, s, ds);
    for (NodeId t = s + 1; t < net.node_count(); ++t) {
      if (ds[static_cast<std::size_t>(t)] < 0) continue;
      const auto dt = bfs_dist(net, t);
      const auto sig_t = bfs_sigma(net, t, dt);
      const double total = sig_s[static_cast<std::size_t>(t)];
      if (total <= 0) continue;
      for (NodeId v = 0; v < net.node_count(); ++v) {
        if (v == s || v == t) continue;
        if (ds[static_cast<std::size_t>(v)] < 0) continue;
        if (ds[static_cast<std::size_t>(v)] + dt[static_cast<std::size_t>(v)] !=
            ds[static_cast<std::size_t>(t)])
          continue;
        bc[static_cast<std::size_t>(v)] +=
            sig_s[static_cast<std::size_t>(v)] * sig_t[static_cast<std::size_t>(v)] / total;
      }
    }
  }
  return bc;
}

// Exhaustive enumeration of all simple src->dst paths.
inline std::vector<Path> all_simple_paths(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                          const std::vector<double>& link_cost) {
  std::vector<Path> out;
  std::vector<char> visited(static_cast<std::size_t>(net.node_count()), 0);
  Path cur;
  cur.nodes.push_back(src);
  visited[static_cast<std::size_t>(src)] = 1;
  std::vector<std::size_t> edge_pos{0};
  while (!cur.nodes.empty()) {
    const NodeId u = cur.nodes.back();
    const auto& nbrs = net.neighbors(u);
    bool advanced = false;
    for (std::size_t& i = edge_pos.back(); i < nbrs.size(); ++i) {
      const auto [v, l] = nbrs[i];
      if (visited[static_cast<std::size_t>(v)]) continue;
      ++i;
      cur.nodes.push_back(v);
      cur.links.push_back(l);
      if (v == dst) {
        Path found = cur;
        found.cost = 0.0;
        for (LinkId fl : found.links) found.cost += link_cost[static_cast<std::size_t>(fl)];
        out.push_back(std::move(found));
        cur.nodes.pop_back();
        cur.links.pop_back();
      } else {
        visited[static_cast<std::size_t>(v)] = 1;
        edge_pos.push_back(0);
      }
      advanced = true;
      break;
    }
    if (!advanced) {
      visited[static_cast<std::size_t>(u)] = 0;
      cur.nodes.pop_back();
      if (!cur.links.empty()) cur.links.pop_back();
      edge_pos.pop_back();
    }
  }
  return out;
}

// K cheapest simple paths by (cost, lexicographic node sequence).
inline std::vector<Path> brute_ksp(const PhysicalNetwork& net, NodeId src, NodeId dst, int k,
                                   const std::vector<double>& link_cost) {
  auto paths = all_simple_paths(net, src, dst, link_cost);
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.nodes < b.nodes;
  });
  if (paths.size() > static_cast<std::size_t>(k)) paths.resize(static_cast<std::size_t>(k));
  return paths;
}

// Random connected graph of switching nodes (for graph-algorithm tests).
inline PhysicalNetwork random_graph(Rng& rng, int n, double extra_edge_prob,
                                    std::int64_t bandwidth = 1'000'000'000) {
  PhysicalNetwork net;
  for (int i = 0; i < n; ++i) net.add_switching_node(1000);
  for (int i = 1; i < n; ++i) {
    const NodeId parent = static_cast<NodeId>(rng.uniform_i64(0, i - 1));
    net.add_link(parent, i, chainsim::LinkKind::Optical, bandwidth, 1e-4);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!net.find_link(a, b) && rng.uniform_real() < extra_edge_prob)
        net.add_link(a, b, chainsim::LinkKind::Optical, bandwidth, 1e-4);
  return net;
}

// ---------------------------------------------------------------------------
// Split-solver oracles
// ---------------------------------------------------------------------------

// Closed-form water level for min max_k(u_k + x_k), sum x = demand,
// 0 <= x_k <= min(capacity_k - u_k, link_cap_k). Returns the minimal
// absolute peak, or nullopt when infeasible.
inline std::optional<double> waterlevel_abs_peak(const SplitProblem& p) {
  const std::size_t n = p.candidates.size();
  std::vector<double> ub(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cap = p.candidates[i].capacity - p.candidates[i].current_load;
    if (!p.link_caps.empty()) cap = std::min(cap, p.link_caps[i]);
    ub[i] = std::max(0.0, cap);
    total += ub[i];
  }
  if (total + 1e-9 * p.demand < p.demand) return std::nullopt;
  auto assignable = [&](double level) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += std::min(ub[i], std::max(0.0, level - p.candidates[i].current_load));
    return s;
  };
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::max(lo, p.candidates[i].current_load);
    hi = std::max(hi, p.candidates[i].current_load + p.demand);
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (assignable(mid) >= p.demand)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Same water level on the utilization scale: minimize
// max_k((u_k + x_k) / capacity_k).
inline std::optional<double> waterlevel_util_peak(const SplitProblem& p) {
  const std::size_t n = p.candidates.size();
  std::vector<double> ub(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cap = p.candidates[i].capacity - p.candidates[i].current_load;
    if (!p.link_caps.empty()) cap = std::min(cap, p.link_caps[i]);
    ub[i] = std::max(0.0, cap);
    total += ub[i];
  }
  if (total + 1e-9 * p.demand < p.demand) return std::nullopt;
  auto assignable = [&](double level) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += std::min(ub[i],
                    std::max(0.0, level * p.candidates[i].capacity -
                                      p.candidates[i].current_load));
    return s;
  };
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double base = p.candidates[i].current_load / p.candidates[i].capacity;
    lo = std::max(lo, base);
    hi = std::max(hi, base + p.demand / p.candidates[i].capacity);
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (assignable(mid) >= p.demand)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// LP oracle for min sum c_k x_k, sum x = demand, 0 <= x_k <= ub_k: fill
// cheapest candidates first (optimal for a single equality constraint
// with box bounds; every step is a vertex move).
// Returns the minimal cost in ratio units (cost per unit of demand),
// matching simplex_min_cost's objective convention.
inline std::optional<double> greedy_fill_min_cost(const SplitProblem& p) {
  const std::size_t n = p.candidates.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.candidates[a].unit_cost < p.candidates[b].unit_cost;
  });
  double remaining = p.demand, cost = 0.0;
  for (std::size_t i : order) {
    double ub = p.candidates[i].capacity - p.candidates[i].current_load;
    if (!p.link_caps.empty()) ub = std::min(ub, p.link_caps[i]);
    ub = std::max(0.0, ub);
    const double take = std::min(ub, remaining);
    cost += take * p.candidates[i].unit_cost;
    remaining -= take;
    if (remaining <= 1e-12 * p.demand) return cost / p.demand;
  }
  return remaining <= 1e-9 * p.demand ? std::optional<double>(cost / p.demand) : std::nullopt;
}

// ---------------------------------------------------------------------------
// Plan re-checker (independent C1-C4 audit)
// ---------------------------------------------------------------------------

struct Recheck {
  bool ok = true;
  std::string why;
};

inline Recheck fail(const std::string& why) { return {false, why}; }

// Re-derives every resource sum from the plan itself and checks the
// constraint set against the supplied (pre-apply) network state.
inline Recheck recheck_plan(const DeploymentPlan& plan, const ServiceChainRequest& req,
                            const PhysicalNetwork& net) {
  const int m = static_cast<int>(req.vnf_sequence.size());
  if (plan.stage_count() != m) return fail("stage count mismatch");
  if (plan.ingress != req.ingress || plan.egress != req.egress) return fail("endpoint mismatch");

  // Structure: hosts are distinct ECNs per stage, allocations positive.
  for (const auto& stage : plan.stages) {
    if (stage.empty()) return fail("empty stage");
    std::set<NodeId> hosts;
    for (const auto& inst : stage) {
      if (inst.host < 0 || inst.host >= net.node_count()) return fail("host out of range");
      if (net.node(inst.host).kind != NodeKind::EdgeCompute) return fail("host not an ECN");
      if (inst.allocated_cpu <= 0) return fail("nonpositive allocation");
      if (!hosts.insert(inst.host).second) return fail("duplicate host in stage");
    }
  }

  // Routes: valid boundaries, contiguous simple paths with endpoints on
  // the right hosts, positive flow.
  auto host_at = [&](int boundary, int idx, bool from) -> std::optional<NodeId> {
    if (from) {
      if (boundary == 0) return plan.ingress;
      const auto& stage = plan.stages[static_cast<std::size_t>(boundary - 1)];
      if (idx < 0 || idx >= static_cast<int>(stage.size())) return std::nullopt;
      return stage[static_cast<std::size_t>(idx)].host;
    }
    if (boundary == m) return plan.egress;
    const auto& stage = plan.stages[static_cast<std::size_t>(boundary)];
    if (idx < 0 || idx >= static_cast<int>(stage.size())) return std::nullopt;
    return stage[static_cast<std::size_t>(idx)].host;
  };
  for (const auto& r : plan.routes) {
    if (r.boundary < 0 || r.boundary > m) return fail("route boundary out of range");
    if (r.assigned_bps <= 0) return fail("nonpositive route flow");
    const auto from = host_at(r.boundary, r.from_index, true);
    const auto to = host_at(r.boundary, r.to_index, false);
    if (!from || !to) return fail("route index out of range");
    if (r.path.nodes.empty()) {
      if (*from != *to) return fail("empty path between distinct hosts");
      if (!r.path.links.empty()) return fail("links without nodes");
      continue;
    }
    if (r.path.nodes.front() != *from || r.path.nodes.back() != *to)
      return fail("path endpoints mismatch");
    if (r.path.links.size() + 1 != r.path.nodes.size()) return fail("path length mismatch");
    std::set<NodeId> seen;
    for (std::size_t i = 0; i < r.path.links.size(); ++i) {
      const auto& link = net.link(r.path.links[i]);
      const NodeId a = r.path.nodes[i], b = r.path.nodes[i + 1];
      if (!((link.a == a && link.b == b) || (link.a == b && link.b == a)))
        return fail("path link does not join its nodes");
      if (!seen.insert(a).second) return fail("path repeats a node");
    }
    if (seen.count(r.path.nodes.back())) return fail("path repeats a node");
  }

  // Flow conservation at every boundary and every instance.
  std::vector<std::int64_t> boundary_sum(static_cast<std::size_t>(m) + 1, 0);
  std::map<std::pair<int, int>, std::int64_t> inflow, outflow;
  for (const auto& r : plan.routes) {
    boundary_sum[static_cast<std::size_t>(r.boundary)] += r.assigned_bps;
    if (r.boundary < m) inflow[{r.boundary + 1, r.to_index}] += r.assigned_bps;
    if (r.boundary > 0) outflow[{r.boundary, r.from_index}] += r.assigned_bps;
  }
  for (int b = 0; b <= m; ++b)
    if (boundary_sum[static_cast<std::size_t>(b)] != req.bandwidth_demand)
      return fail("boundary flow does not equal the demand");
  for (int s = 1; s <= m; ++s) {
    const auto& stage = plan.stages[static_cast<std::size_t>(s - 1)];
    for (int j = 0; j < static_cast<int>(stage.size()); ++j) {
      const auto in = inflow.count({s, j}) ? inflow[{s, j}] : 0;
      const auto out = outflow.count({s, j}) ? outflow[{s, j}] : 0;
      if (in != out) return fail("instance inflow != outflow");
      if (in <= 0) return fail("instance carries no flow");
      const double share = static_cast<double>(in) / static_cast<double>(req.bandwidth_demand);
      if (std::fabs(share - stage[static_cast<std::size_t>(j)].flow_share) > 1e-9)
        return fail("flow_share inconsistent with routed flow");
    }
  }

  // Capacities against the pre-apply network state.
  std::map<NodeId, std::int64_t> cpu_add;
  std::map<LinkId, std::int64_t> bw_add;
  std::map<NodeId, std::int64_t> table_add;
  for (const auto& stage : plan.stages)
    for (const auto& inst : stage) cpu_add[inst.host] += inst.allocated_cpu;
  for (const auto& r : plan.routes) {
    for (LinkId l : r.path.links) bw_add[l] += r.assigned_bps;
    for (NodeId nd : r.path.nodes)
      if (net.node(nd).kind == NodeKind::Switching) table_add[nd] += 1;
  }
  for (const auto& [k, add] : cpu_add)
    if (net.node(k).compute_load + add > net.node(k).compute_capacity)
      return fail("compute capacity exceeded");
  for (const auto& [l, add] : bw_add)
    if (net.link(l).load + add > net.link(l).bandwidth) return fail("link bandwidth exceeded");
  for (const auto& [k, add] : table_add)
    if (net.node(k).switch_load + add > net.node(k).switch_capacity)
      return fail("switch table exceeded");

  // Worst-case delay: longest arrival over the boundary DAG plus
  // execution at each entered instance.
  std::vector<std::vector<double>> arrive(static_cast<std::size_t>(m) + 2);
  arrive[0] = {0.0};
  for (int s = 1; s <= m; ++s)
    arrive[static_cast<std::size_t>(s)].assign(plan.stages[static_cast<std::size_t>(s - 1)].size(),
                                               -1.0);
  arrive[static_cast<std::size_t>(m) + 1] = {-1.0};
  for (int b = 0; b <= m; ++b) {
    for (const auto& r : plan.routes) {
      if (r.boundary != b) continue;
      const double from_t = arrive[static_cast<std::size_t>(b)][static_cast<std::size_t>(
          b == 0 ? 0 : r.from_index)];
      if (from_t < 0) return fail("route from an unreached instance");
      double t = from_t;
      for (LinkId l : r.path.links)
        t += r.ratio * static_cast<double>(req.data_size) * 8.0 /
                 static_cast<double>(net.link(l).bandwidth) +
             net.link(l).prop_delay;
      if (b < m) {
        const auto& inst =
            plan.stages[static_cast<std::size_t>(b)][static_cast<std::size_t>(r.to_index)];
        t += inst.flow_share * static_cast<double>(req.cpu_demand) /
             static_cast<double>(inst.allocated_cpu);
        auto& slot =
            arrive[static_cast<std::size_t>(b) + 1][static_cast<std::size_t>(r.to_index)];
        slot = std::max(slot, t);
      } else {
        auto& slot = arrive[static_cast<std::size_t>(m) + 1][0];
        slot = std::max(slot, t);
      }
    }
  }
  const double worst = arrive[static_cast<std::size_t>(m) + 1][0];
  if (worst < 0) return fail("no flow reaches the egress");
  if (worst > req.delay_bound) return fail("delay bound exceeded");
  return {};
}

// ---------------------------------------------------------------------------
// Load accounting oracles
// ---------------------------------------------------------------------------

// Expected loads after applying `plans` to an idle copy of `base`.
inline bool loads_match_plan_sums(const PhysicalNetwork& base, const PhysicalNetwork& loaded,
                                  const std::vector<DeploymentPlan>& plans) {
  std::map<NodeId, std::int64_t> cpu;
  std::map<LinkId, std::int64_t> bw;
  std::map<NodeId, std::int64_t> tables;
  for (const auto& plan : plans) {
    for (const auto& stage : plan.stages)
      for (const auto& inst : stage) cpu[inst.host] += inst.allocated_cpu;
    for (const auto& r : plan.routes) {
      for (LinkId l : r.path.links) bw[l] += r.assigned_bps;
      for (NodeId nd : r.path.nodes)
        if (base.node(nd).kind == NodeKind::Switching) tables[nd] += 1;
    }
  }
  for (NodeId k = 0; k < base.node_count(); ++k) {
    const auto want_cpu = base.node(k).compute_load + (cpu.count(k) ? cpu[k] : 0);
    const auto want_tab = base.node(k).switch_load + (tables.count(k) ? tables[k] : 0);
    if (loaded.node(k).compute_load != want_cpu) return false;
    if (loaded.node(k).switch_load != want_tab) return false;
  }
  for (LinkId l = 0; l < base.link_count(); ++l)
    if (loaded.link(l).load != base.link(l).load + (bw.count(l) ? bw[l] : 0)) return false;
  return true;
}

inline bool networks_identical(const PhysicalNetwork& a, const PhysicalNetwork& b) {
  if (a.node_count() != b.node_count() || a.link_count() != b.link_count()) return false;
  for (NodeId k = 0; k < a.node_count(); ++k) {
    const auto& x = a.node(k);
    const auto& y = b.node(k);
    if (x.kind != y.kind || x.compute_capacity != y.compute_capacity ||
        x.compute_load != y.compute_load || x.switch_capacity != y.switch_capacity ||
        x.switch_load != y.switch_load || x.fiwi_hub != y.fiwi_hub ||
        x.wireless_capacity != y.wireless_capacity)
      return false;
  }
  for (LinkId l = 0; l < a.link_count(); ++l) {
    const auto& x = a.link(l);
    const auto& y = b.link(l);
    if (x.a != y.a || x.b != y.b || x.kind != y.kind || x.bandwidth != y.bandwidth ||
        x.load != y.load || x.prop_delay != y.prop_delay)
      return false;
  }
  return true;
}

inline bool all_loads_zero(const PhysicalNetwork& net) {
  for (const auto& n : net.nodes())
    if (n.compute_load != 0 || n.switch_load != 0) return false;
  for (const auto& l : net.links())
    if (l.load != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Exhaustive placement oracles (tiny instances)
// ---------------------------------------------------------------------------

// Composite objective of a hypothetical load state, computed directly.
inline double composite_of_state(const PhysicalNetwork& net,
                                 const std::vector<double>& cpu_add,
                                 const std::vector<double>& link_add,
                                 const std::vector<double>& table_add,
                                 const chainsim::ObjectiveWeights& w) {
  double max_c = 0, sum_c = 0;
  int n_c = 0;
  double max_s = 0, sum_s = 0;
  int n_s = 0;
  for (const auto& node : net.nodes()) {
    if (node.kind == NodeKind::EdgeCompute) {
      const double u = (static_cast<double>(node.compute_load) +
                        cpu_add[static_cast<std::size_t>(node.id)]) /
                       static_cast<double>(node.compute_capacity);
      max_c = std::max(max_c, u);
      sum_c += u;
      ++n_c;
    } else {
      const double u = (static_cast<double>(node.switch_load) +
                        table_add[static_cast<std::size_t>(node.id)]) /
                       static_cast<double>(node.switch_capacity);
      max_s = std::max(max_s, u);
      sum_s += u;
      ++n_s;
    }
  }
  double mean_sq = 0, mean = 0;
  for (const auto& link : net.links()) {
    const double u = (static_cast<double>(link.load) +
                      link_add[static_cast<std::size_t>(link.id)]) /
                     static_cast<double>(link.bandwidth);
    mean += u;
    mean_sq += u * u;
  }
  const auto n_l = static_cast<double>(net.link_count());
  mean /= n_l;
  mean_sq /= n_l;
  const double lbi_c = (n_c == 0 || sum_c == 0) ? 1.0 : max_c / (sum_c / n_c);
  const double lbi_n = std::sqrt(std::max(0.0, mean_sq - mean * mean));
  const double lbi_s = (n_s == 0 || sum_s == 0) ? 1.0 : max_s / (sum_s / n_s);
  return w.alpha * lbi_c + w.beta * lbi_n + w.gamma * lbi_s;
}

// Exhaustive single-path search: the whole chain rides the one minimum-hop
// ingress-to-egress path with every instance on a compute node on the path
// or one pendant link off it, visited in flow order (a pendant link
// carries the demand down and back up per visit). Reference for the exact
// single-path optimizer: take the same fewest-hop route, enumerate every
// in-order stage assignment, rebuild the transport legs at each leaf from
// scratch, and return the best feasible composite (nullopt when none
// exists).
inline std::optional<double> single_path_exhaustive(const PhysicalNetwork& net,
                                                    const ServiceChainRequest& req,
                                                    const chainsim::PlacementParams& params) {
  const int m = static_cast<int>(req.vnf_sequence.size());
  const double rate_d = static_cast<double>(req.cpu_demand) / params.cpu_window_s;
  const auto rate = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(rate_d)));

  std::optional<double> best;

  struct Leg {
    std::vector<LinkId> links;
    std::vector<NodeId> nodes;
  };

  // Full re-evaluation of one assignment: apply the legs and the stage
  // loads to fresh delta arrays, check every constraint, keep the best.
  auto evaluate_leaf = [&](const std::vector<Leg>& legs, const std::vector<NodeId>& hosts) {
    std::vector<double> cpu_add(static_cast<std::size_t>(net.node_count()), 0.0);
    std::vector<double> link_add(static_cast<std::size_t>(net.link_count()), 0.0);
    std::vector<double> table_add(static_cast<std::size_t>(net.node_count()), 0.0);
    double delay = 0.0;
    for (NodeId h : hosts) {
      cpu_add[static_cast<std::size_t>(h)] += static_cast<double>(rate);
      delay += static_cast<double>(req.cpu_demand) / static_cast<double>(rate);
    }
    for (const Leg& leg : legs) {
      for (LinkId l : leg.links) {
        link_add[static_cast<std::size_t>(l)] += static_cast<double>(req.bandwidth_demand);
        delay += static_cast<double>(req.data_size) * 8.0 /
                     static_cast<double>(net.link(l).bandwidth) +
                 net.link(l).prop_delay;
      }
      for (NodeId nd : leg.nodes)
        if (net.node(nd).kind == NodeKind::Switching)
          table_add[static_cast<std::size_t>(nd)] += 1.0;
    }
    if (delay > req.delay_bound) return;
    for (NodeId k : net.ecn_ids())
      if (static_cast<double>(net.node(k).compute_load) + cpu_add[static_cast<std::size_t>(k)] >
          static_cast<double>(net.node(k).compute_capacity))
        return;
    for (LinkId l = 0; l < net.link_count(); ++l)
      if (static_cast<double>(net.link(l).load) + link_add[static_cast<std::size_t>(l)] >
          static_cast<double>(net.link(l).bandwidth))
        return;
    for (NodeId k = 0; k < net.node_count(); ++k)
      if (net.node(k).kind == NodeKind::Switching &&
          static_cast<double>(net.node(k).switch_load) +
                  table_add[static_cast<std::size_t>(k)] >
              static_cast<double>(net.node(k).switch_capacity))
        return;
    const double obj = composite_of_state(net, cpu_add, link_add, table_add, params.weights);
    if (!best || obj < *best) best = obj;
  };

  // Loop request: the chain must fit on the shared endpoint itself.
  if (req.ingress == req.egress) {
    if (m == 0 || net.node(req.ingress).kind == NodeKind::EdgeCompute) {
      evaluate_leaf({}, std::vector<NodeId>(static_cast<std::size_t>(m), req.ingress));
    }
    return best;
  }

  struct Cand {
    NodeId host = -1;
    std::size_t attach = 0;
    LinkId up = -1;  // pendant link; -1 when the host is on the path
  };

  std::vector<double> hop_cost(static_cast<std::size_t>(net.link_count()), 1.0);
  const auto paths = brute_ksp(net, req.ingress, req.egress, 1, hop_cost);
  for (const auto& p : paths) {
    // Candidate hosts: compute nodes on the path, then compute nodes one
    // pendant (non-path) link away, attached at the earliest backbone
    // position that reaches them.
    std::vector<Cand> cands;
    auto have = [&](NodeId h) {
      for (const auto& c : cands)
        if (c.host == h) return true;
      return false;
    };
    auto on_path = [&](NodeId h) {
      for (NodeId nd : p.nodes)
        if (nd == h) return true;
      return false;
    };
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      if (net.node(p.nodes[i]).kind == NodeKind::EdgeCompute)
        cands.push_back({p.nodes[i], i, -1});
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      for (const auto& [nb, l] : net.neighbors(p.nodes[i]))
        if (!on_path(nb) && net.node(nb).kind == NodeKind::EdgeCompute && !have(nb))
          cands.push_back({nb, i, l});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.attach != b.attach) return a.attach < b.attach;
      return a.host < b.host;
    });
    if (m > 0 && cands.empty()) continue;

    std::vector<std::size_t> pick(static_cast<std::size_t>(m));
    auto at_leaf = [&]() {
      std::vector<Leg> legs;
      std::vector<NodeId> hosts;
      const Cand* prev = nullptr;
      std::size_t cur = 0;
      auto make_leg = [&](const Cand* from, const Cand* to, std::size_t to_pos) {
        Leg leg;
        if (from != nullptr && from->up >= 0) {
          leg.nodes.push_back(from->host);
          leg.links.push_back(from->up);
        }
        for (std::size_t i = cur; i <= to_pos; ++i) leg.nodes.push_back(p.nodes[i]);
        for (std::size_t i = cur; i < to_pos; ++i) leg.links.push_back(p.links[i]);
        if (to != nullptr && to->up >= 0) {
          leg.nodes.push_back(to->host);
          leg.links.push_back(to->up);
        }
        if (!leg.links.empty()) legs.push_back(std::move(leg));
      };
      for (int s = 0; s < m; ++s) {
        const Cand& c = cands[pick[static_cast<std::size_t>(s)]];
        hosts.push_back(c.host);
        if (prev != nullptr && prev->host == c.host) continue;  // co-located
        make_leg(prev, &c, c.attach);
        cur = c.attach;
        prev = &c;
      }
      make_leg(prev, nullptr, p.nodes.size() - 1);
      evaluate_leaf(legs, hosts);
    };
    std::function<void(int, std::size_t)> rec = [&](int s, std::size_t lo) {
      if (s == m) {
        at_leaf();
        return;
      }
      for (std::size_t i = lo; i < cands.size(); ++i) {
        pick[static_cast<std::size_t>(s)] = i;
        rec(s + 1, i);
      }
    };
    rec(0, 0);
  }
  return best;
}

// Grid oracle for the multipath heuristics: exhaustive host subsets of
// size <= 2 per stage, split ratios on a 1/8 grid, widest min-hop
// routing, independent feasibility and objective evaluation. Gives the
// best composite over the discretized multipath space.
inline std::optional<double> multipath_grid_best(const PhysicalNetwork& net,
                                                 const ServiceChainRequest& req,
                                                 const chainsim::PlacementParams& params) {
  const int m = static_cast<int>(req.vnf_sequence.size());
  const auto ecns = net.ecn_ids();
  const double rate = std::max(1.0, static_cast<double>(req.cpu_demand) / params.cpu_window_s);
  const double bw = static_cast<double>(req.bandwidth_demand);

  // Host-set options per stage: single hosts and unordered pairs.
  struct HostOption {
    std::vector<NodeId> hosts;
    std::vector<double> shares;  // per host, sums to 1
  };
  std::vector<HostOption> options;
  for (NodeId a : ecns) options.push_back({{a}, {1.0}});
  for (std::size_t i = 0; i < ecns.size(); ++i)
    for (std::size_t j = i + 1; j < ecns.size(); ++j)
      for (int g = 1; g < 8; ++g)
        options.push_back({{ecns[i], ecns[j]}, {g / 8.0, 1.0 - g / 8.0}});

  // Routing between fixed endpoints: widest min-hop path on the idle
  // structure (deterministic, mirrors the heuristics' routing choice).
  std::map<std::pair<NodeId, NodeId>, std::optional<Path>> route_cache;
  auto route = [&](NodeId a, NodeId b) -> const std::optional<Path>& {
    auto it = route_cache.find({a, b});
    if (it != route_cache.end()) return it->second;
    std::optional<Path> p;
    if (a == b)
      p = Path{};
    else if (auto w = chainsim::widest_min_hop_path(net, a, b))
      p = w->path;
    return route_cache.emplace(std::make_pair(a, b), std::move(p)).first->second;
  };

  std::optional<double> best;
  std::vector<const HostOption*> chosen(static_cast<std::size_t>(m));

  auto evaluate = [&]() {
    std::vector<double> cpu_add(static_cast<std::size_t>(net.node_count()), 0.0);
    std::vector<double> link_add(static_cast<std::size_t>(net.link_count()), 0.0);
    std::vector<double> table_add(static_cast<std::size_t>(net.node_count()), 0.0);
    // Previous frontier: hosts and their share of the flow.
    std::vector<NodeId> prev{req.ingress};
    std::vector<double> prev_share{1.0};
    for (int s = 0; s <= m; ++s) {
      const bool egress_leg = s == m;
      const std::vector<NodeId> cur =
          egress_leg ? std::vector<NodeId>{req.egress} : chosen[static_cast<std::size_t>(s)]->hosts;
      const std::vector<double> cur_share =
          egress_leg ? std::vector<double>{1.0} : chosen[static_cast<std::size_t>(s)]->shares;
      for (std::size_t j = 0; j < prev.size(); ++j)
        for (std::size_t t = 0; t < cur.size(); ++t) {
          const double flow = bw * prev_share[j] * cur_share[t];
          if (flow <= 0) continue;
          const auto& p = route(prev[j], cur[t]);
          if (!p) return;  // unroutable pair
          for (LinkId l : p->links) link_add[static_cast<std::size_t>(l)] += flow;
          for (NodeId nd : p->nodes)
            if (net.node(nd).kind == NodeKind::Switching)
              table_add[static_cast<std::size_t>(nd)] += 1.0;
        }
      if (!egress_leg)
        for (std::size_t t = 0; t < cur.size(); ++t)
          cpu_add[static_cast<std::size_t>(cur[t])] += rate * cur_share[t];
      prev = cur;
      prev_share = cur_share;
    }
    for (NodeId k : ecns)
      if (static_cast<double>(net.node(k).compute_load) + cpu_add[static_cast<std::size_t>(k)] >
          static_cast<double>(net.node(k).compute_capacity) * (1 + 1e-12))
        return;
    for (LinkId l = 0; l < net.link_count(); ++l)
      if (static_cast<double>(net.link(l).load) + link_add[static_cast<std::size_t>(l)] >
          static_cast<double>(net.link(l).bandwidth) * (1 + 1e-12))
        return;
    const double obj = composite_of_state(net, cpu_add, link_add, table_add, params.weights);
    if (!best || obj < *best) best = obj;
  };

  std::function<void(int)> rec = [&](int s) {
    if (s == m) {
      evaluate();
      return;
    }
    for (const auto& opt : options) {
      chosen[static_cast<std::size_t>(s)] = &opt;
      rec(s + 1);
    }
  };
  rec(0);
  return best;
}

// ---------------------------------------------------------------------------
// Statistics helpers
// ---------------------------------------------------------------------------

inline double chi_square_statistic(const std::vector<int>& observed, double expected_each) {
  double chi = 0.0;
  for (int o : observed) {
    const double d = o - expected_each;
    chi += d * d / expected_each;
  }
  return chi;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace oracles
