#pragma once

// Service chains and their deployments. A request is an ordered VNF
// sequence with per-stage compute demand and a bandwidth demand between
// consecutive stages. A deployment plan places one or more instances per
// stage and routes split sub-flows between consecutive stages; stage 0
// is the ingress node and stage M+1 the egress node.
//
// All resource accounting is integral (bits/sec, cycles/sec, flow-table
// entries), so applying and releasing a plan restores loads exactly.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chainsim/topology.hpp"

namespace chainsim {

struct VnfKind {
  std::string label;
};

struct ServiceChainRequest {
  int id = 0;
  NodeId ingress = -1;
  NodeId egress = -1;
  std::vector<VnfKind> vnf_sequence;
  std::int64_t cpu_demand = 0;        // cycles of work per stage
  std::int64_t data_size = 0;         // bytes carried end to end
  std::int64_t bandwidth_demand = 0;  // bits/sec between consecutive stages
  double delay_bound = 0.0;           // seconds, worst-case end-to-end
};

struct VnfInstance {
  int chain_id = 0;
  int stage = 0;           // 1-based stage index
  int instance_index = 0;  // 0-based within the stage
  NodeId host = -1;
  std::int64_t allocated_cpu = 0;  // cycles/sec granted on the host
  double flow_share = 0.0;         // fraction of the chain flow arriving here
};

// One routed sub-flow between an instance of stage `boundary` and an
// instance of stage `boundary + 1` (0 = ingress side, M = egress side).
// An empty path means both endpoints share a host.
struct RouteAssignment {
  int boundary = 0;
  int from_index = 0;  // instance index in stage `boundary` (0 for ingress)
  int to_index = 0;    // instance index in stage `boundary + 1` (0 for egress)
  Path path;
  double ratio = 0.0;            // fraction of the chain's total flow
  std::int64_t assigned_bps = 0; // quantized bandwidth for this sub-flow
};

struct DeploymentPlan {
  int chain_id = 0;
  NodeId ingress = -1;
  NodeId egress = -1;
  std::vector<std::vector<VnfInstance>> stages;
  std::vector<RouteAssignment> routes;

  int stage_count() const { return static_cast<int>(stages.size()); }
};

// ---------------------------------------------------------------------------
// Load-balance indicators.
// ---------------------------------------------------------------------------

struct ObjectiveWeights {
  double alpha = 1.0 / 3.0;  // compute indicator
  double beta = 1.0 / 3.0;   // link indicator
  double gamma = 1.0 / 3.0;  // switch indicator
};

struct LoadBalanceIndicators {
  double lbi_c = 1.0;      // max/mean ECN utilization (1 when idle)
  double lbi_n = 0.0;      // population stddev of link utilizations
  double lbi_s = 1.0;      // max/mean switch utilization (1 when idle)
  double composite = 0.0;  // weighted sum of the three
  double link_util_max_avg = 1.0;  // secondary: max/mean link utilization
};

inline double composite_objective(const LoadBalanceIndicators& lbi,
                                  const ObjectiveWeights& w) {
  return w.alpha * lbi.lbi_c + w.beta * lbi.lbi_n + w.gamma * lbi.lbi_s;
}

inline LoadBalanceIndicators compute_lbi(const PhysicalNetwork& net,
                                         const ObjectiveWeights& w = {}) {
  LoadBalanceIndicators out;
  double max_u = 0.0, sum_u = 0.0;
  int n_ecn = 0;
  for (const auto& node : net.nodes()) {
    if (node.kind != NodeKind::EdgeCompute) continue;
    const double u = static_cast<double>(node.compute_load) /
                     static_cast<double>(node.compute_capacity);
    max_u = std::max(max_u, u);
    sum_u += u;
    ++n_ecn;
  }
  out.lbi_c = (n_ecn == 0 || sum_u == 0.0) ? 1.0 : max_u / (sum_u / n_ecn);

  double sum_l = 0.0, sumsq_l = 0.0, max_l = 0.0;
  int n_link = 0;
  for (const auto& link : net.links()) {
    const double u =
        static_cast<double>(link.load) / static_cast<double>(link.bandwidth);
    sum_l += u;
    sumsq_l += u * u;
    max_l = std::max(max_l, u);
    ++n_link;
  }
  if (n_link > 0) {
    const double mean = sum_l / n_link;
    out.lbi_n = std::sqrt(std::max(0.0, sumsq_l / n_link - mean * mean));
    out.link_util_max_avg = (sum_l == 0.0) ? 1.0 : max_l / mean;
  }

  double max_s = 0.0, sum_s = 0.0;
  int n_sw = 0;
  for (const auto& node : net.nodes()) {
    if (node.kind != NodeKind::Switching) continue;
    const double u = static_cast<double>(node.switch_load) /
                     static_cast<double>(node.switch_capacity);
    max_s = std::max(max_s, u);
    sum_s += u;
    ++n_sw;
  }
  out.lbi_s = (n_sw == 0 || sum_s == 0.0) ? 1.0 : max_s / (sum_s / n_sw);

  out.composite = composite_objective(out, w);
  return out;
}

// ---------------------------------------------------------------------------
// Constraint checking.
// ---------------------------------------------------------------------------

enum class ConstraintKind {
  ComputeCapacity,   // per-ECN CPU headroom
  LinkBandwidth,     // per-link bandwidth headroom
  DelayBound,        // worst-case end-to-end delay
  PlanStructure,     // integral placements, matched endpoints, conservation
  SwitchTable,       // per-switch flow-table headroom
};

struct Violation {
  ConstraintKind kind;
  std::int64_t entity;  // node/link id, or -1 for plan-level findings
  std::string detail;
};

namespace detail {

// Per-resource deltas a plan adds to the network.
struct PlanFootprint {
  std::map<NodeId, std::int64_t> cpu;       // cycles/sec per ECN
  std::map<LinkId, std::int64_t> bw;        // bits/sec per link
  std::map<NodeId, std::int64_t> entries;   // flow-table entries per switch
};

inline PlanFootprint plan_footprint(const PhysicalNetwork& net, const DeploymentPlan& plan) {
  PlanFootprint fp;
  for (const auto& stage : plan.stages)
    for (const auto& inst : stage) fp.cpu[inst.host] += inst.allocated_cpu;
  for (const auto& r : plan.routes) {
    for (LinkId l : r.path.links) fp.bw[l] += r.assigned_bps;
    for (NodeId nd : r.path.nodes)
      if (net.node(nd).kind == NodeKind::Switching) fp.entries[nd] += 1;
  }
  return fp;
}

}  // namespace detail

// Worst-case end-to-end delay of a plan: the longest ingress-to-egress
// chain through instances with positive flow, where each traversed link
// contributes its sub-flow transmission time plus propagation delay and
// each instance contributes its execution time
// (flow_share * cpu_demand / allocated_cpu).
inline double end_to_end_delay(const DeploymentPlan& plan, const ServiceChainRequest& req,
                               const PhysicalNetwork& net) {
  const int m = plan.stage_count();
  constexpr double kUnreached = -1.0;
  // arrive[s][j]: worst-case time the flow reaches stage-s instance j,
  // execution included. Stage 0/egress are single virtual nodes.
  std::vector<std::vector<double>> arrive(static_cast<std::size_t>(m) + 2);
  arrive[0] = {0.0};
  for (int s = 1; s <= m; ++s)
    arrive[static_cast<std::size_t>(s)]
        .assign(plan.stages[static_cast<std::size_t>(s - 1)].size(), kUnreached);
  arrive[static_cast<std::size_t>(m) + 1] = {kUnreached};

  auto transit = [&](const RouteAssignment& r) {
    double t = 0.0;
    for (LinkId l : r.path.links) {
      const auto& link = net.link(l);
      t += r.ratio * static_cast<double>(req.data_size) * 8.0 /
               static_cast<double>(link.bandwidth) +
           link.prop_delay;
    }
    return t;
  };

  for (int b = 0; b <= m; ++b) {
    for (const auto& r : plan.routes) {
      if (r.boundary != b || r.assigned_bps <= 0) continue;
      const double from = arrive[static_cast<std::size_t>(b)]
                                [static_cast<std::size_t>(r.from_index)];
      if (from == kUnreached) continue;
      double t = from + transit(r);
      if (b < m) {
        const auto& inst = plan.stages[static_cast<std::size_t>(b)]
                                      [static_cast<std::size_t>(r.to_index)];
        if (inst.allocated_cpu <= 0)
          throw std::invalid_argument("end_to_end_delay: instance without allocated CPU");
        t += inst.flow_share * static_cast<double>(req.cpu_demand) /
             static_cast<double>(inst.allocated_cpu);
      }
      auto& slot = arrive[static_cast<std::size_t>(b) + 1]
                         [static_cast<std::size_t>(r.to_index)];
      slot = std::max(slot, t);
    }
  }
  const double total = arrive[static_cast<std::size_t>(m) + 1][0];
  if (total == kUnreached)
    throw std::invalid_argument("end_to_end_delay: no ingress-to-egress flow");
  return total;
}

// Full constraint check of a plan against the network's current state.
// Returns every violation found; an empty vector means deployable.
inline std::vector<Violation> check_feasibility(const DeploymentPlan& plan,
                                                const ServiceChainRequest& req,
                                                const PhysicalNetwork& net) {
  std::vector<Violation> out;
  auto structural = [&](const std::string& msg) {
    out.push_back({ConstraintKind::PlanStructure, -1, msg});
  };

  if (plan.chain_id != req.id) structural("plan/request id mismatch");
  if (plan.ingress != req.ingress || plan.egress != req.egress)
    structural("plan endpoints do not match request");
  if (plan.stage_count() != static_cast<int>(req.vnf_sequence.size()))
    structural("stage count does not match VNF sequence");
  if (!out.empty()) return out;

  const int m = plan.stage_count();
  for (int s = 0; s < m; ++s) {
    const auto& stage = plan.stages[static_cast<std::size_t>(s)];
    if (stage.empty()) structural("stage " + std::to_string(s + 1) + " has no instances");
    std::vector<NodeId> hosts;
    for (std::size_t j = 0; j < stage.size(); ++j) {
      const auto& inst = stage[j];
      if (inst.stage != s + 1 || inst.instance_index != static_cast<int>(j))
        structural("instance indices inconsistent");
      if (inst.host < 0 || inst.host >= net.node_count() ||
          net.node(inst.host).kind != NodeKind::EdgeCompute)
        structural("instance host is not an edge compute node");
      else
        hosts.push_back(inst.host);
      if (inst.allocated_cpu <= 0) structural("instance has no allocated CPU");
      if (inst.flow_share <= 0.0 || inst.flow_share > 1.0 + 1e-12)
        structural("instance flow share outside (0, 1]");
    }
    std::sort(hosts.begin(), hosts.end());
    if (std::adjacent_find(hosts.begin(), hosts.end()) != hosts.end())
      structural("two instances of one stage share a host");
  }
  if (!out.empty()) return out;

  // Routes: endpoints, path integrity, quantized flow conservation.
  auto host_of = [&](int boundary_side, int index) -> NodeId {
    if (boundary_side == 0) return plan.ingress;
    if (boundary_side == m + 1) return plan.egress;
    return plan.stages[static_cast<std::size_t>(boundary_side - 1)]
                      [static_cast<std::size_t>(index)].host;
  };
  std::vector<std::int64_t> boundary_sum(static_cast<std::size_t>(m) + 1, 0);
  // inflow/outflow per stage instance, cross-checked below.
  std::vector<std::vector<std::int64_t>> inflow(static_cast<std::size_t>(m)),
      outflow(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    inflow[static_cast<std::size_t>(s)].assign(plan.stages[static_cast<std::size_t>(s)].size(), 0);
    outflow[static_cast<std::size_t>(s)].assign(plan.stages[static_cast<std::size_t>(s)].size(), 0);
  }
  for (const auto& r : plan.routes) {
    if (r.boundary < 0 || r.boundary > m) {
      structural("route boundary out of range");
      continue;
    }
    const int from_stage_size =
        r.boundary == 0 ? 1 : static_cast<int>(plan.stages[static_cast<std::size_t>(r.boundary - 1)].size());
    const int to_stage_size =
        r.boundary == m ? 1 : static_cast<int>(plan.stages[static_cast<std::size_t>(r.boundary)].size());
    if (r.from_index < 0 || r.from_index >= from_stage_size || r.to_index < 0 ||
        r.to_index >= to_stage_size) {
      structural("route instance index out of range");
      continue;
    }
    if (r.assigned_bps <= 0) structural("route with non-positive bandwidth");
    if (r.ratio <= 0.0 || r.ratio > 1.0 + 1e-12) structural("route ratio outside (0, 1]");
    const NodeId from = host_of(r.boundary, r.from_index);
    const NodeId to = host_of(r.boundary + 1, r.to_index);
    if (r.path.nodes.empty()) {
      if (from != to) structural("empty path between distinct hosts");
      if (!r.path.links.empty()) structural("empty path with links");
    } else {
      if (r.path.nodes.front() != from || r.path.nodes.back() != to)
        structural("route path endpoints do not match hosts");
      if (r.path.links.size() + 1 != r.path.nodes.size())
        structural("path link/node count mismatch");
      else {
        for (std::size_t i = 0; i < r.path.links.size(); ++i) {
          const LinkId l = r.path.links[i];
          if (l < 0 || l >= net.link_count()) {
            structural("path references unknown link");
            break;
          }
          const auto& link = net.link(l);
          const NodeId u = r.path.nodes[i], v = r.path.nodes[i + 1];
          if (!((link.a == u && link.b == v) || (link.a == v && link.b == u))) {
            structural("path link does not connect consecutive nodes");
            break;
          }
        }
        auto uniq = r.path.nodes;
        std::sort(uniq.begin(), uniq.end());
        if (std::adjacent_find(uniq.begin(), uniq.end()) != uniq.end())
          structural("path revisits a node");
      }
    }
    boundary_sum[static_cast<std::size_t>(r.boundary)] += r.assigned_bps;
    if (r.boundary > 0)
      outflow[static_cast<std::size_t>(r.boundary - 1)]
             [static_cast<std::size_t>(r.from_index)] += r.assigned_bps;
    if (r.boundary < m)
      inflow[static_cast<std::size_t>(r.boundary)]
            [static_cast<std::size_t>(r.to_index)] += r.assigned_bps;
  }
  for (int b = 0; b <= m; ++b)
    if (boundary_sum[static_cast<std::size_t>(b)] != req.bandwidth_demand)
      structural("stage boundary " + std::to_string(b) + " does not carry the full demand");
  for (int s = 0; s < m; ++s)
    for (std::size_t j = 0; j < inflow[static_cast<std::size_t>(s)].size(); ++j) {
      if (inflow[static_cast<std::size_t>(s)][j] != outflow[static_cast<std::size_t>(s)][j])
        structural("instance inflow != outflow at stage " + std::to_string(s + 1));
      const auto& inst = plan.stages[static_cast<std::size_t>(s)][j];
      const double share = static_cast<double>(inflow[static_cast<std::size_t>(s)][j]) /
                           static_cast<double>(req.bandwidth_demand);
      if (std::abs(share - inst.flow_share) > 1e-9)
        structural("instance flow share inconsistent with routed flow");
    }
  if (!out.empty()) return out;

  // Capacity constraints against current loads.
  const auto fp = detail::plan_footprint(net, plan);
  for (const auto& [id, add] : fp.cpu) {
    const auto& node = net.node(id);
    if (node.compute_load + add > node.compute_capacity)
      out.push_back({ConstraintKind::ComputeCapacity, id,
                     "ECN " + std::to_string(id) + " over capacity"});
  }
  for (const auto& [id, add] : fp.bw) {
    const auto& link = net.link(id);
    if (link.load + add > link.bandwidth)
      out.push_back({ConstraintKind::LinkBandwidth, id,
                     "link " + std::to_string(id) + " over bandwidth"});
  }
  for (const auto& [id, add] : fp.entries) {
    const auto& node = net.node(id);
    if (node.switch_load + add > node.switch_capacity)
      out.push_back({ConstraintKind::SwitchTable, id,
                     "switch " + std::to_string(id) + " flow table full"});
  }

  const double delay = end_to_end_delay(plan, req, net);
  if (delay > req.delay_bound)
    out.push_back({ConstraintKind::DelayBound, -1,
                   "worst-case delay " + std::to_string(delay) + "s exceeds bound"});
  return out;
}

// Applies the plan's resource footprint. The capacity checks run first
// against a scratch footprint, so an oversubscribed plan leaves the
// network untouched. Returns false when rejected.
inline bool apply_plan(PhysicalNetwork& net, const DeploymentPlan& plan) {
  const auto fp = detail::plan_footprint(net, plan);
  for (const auto& [id, add] : fp.cpu) {
    const auto& node = net.node(id);
    if (node.kind != NodeKind::EdgeCompute || node.compute_load + add > node.compute_capacity)
      return false;
  }
  for (const auto& [id, add] : fp.bw)
    if (net.link(id).load + add > net.link(id).bandwidth) return false;
  for (const auto& [id, add] : fp.entries)
    if (net.node(id).switch_load + add > net.node(id).switch_capacity) return false;
  for (const auto& [id, add] : fp.cpu) net.node(id).compute_load += add;
  for (const auto& [id, add] : fp.bw) net.link(id).load += add;
  for (const auto& [id, add] : fp.entries) net.node(id).switch_load += add;
  return true;
}

// Exact inverse of apply_plan for a plan that was previously applied.
inline void release_plan(PhysicalNetwork& net, const DeploymentPlan& plan) {
  const auto fp = detail::plan_footprint(net, plan);
  for (const auto& [id, add] : fp.cpu) net.node(id).compute_load -= add;
  for (const auto& [id, add] : fp.bw) net.link(id).load -= add;
  for (const auto& [id, add] : fp.entries) net.node(id).switch_load -= add;
}

// Line-oriented plan dump for debugging and golden tests.
inline std::string dump_plan(const DeploymentPlan& plan) {
  std::ostringstream os;
  os << "chain " << plan.chain_id << " ingress " << plan.ingress << " egress "
     << plan.egress << '\n';
  for (const auto& stage : plan.stages)
    for (const auto& inst : stage) {
      char share[32];
      std::snprintf(share, sizeof share, "%.9g", inst.flow_share);
      os << "instance " << inst.stage << ' ' << inst.instance_index << " host "
         << inst.host << " cpu " << inst.allocated_cpu << " share " << share << '\n';
    }
  for (const auto& r : plan.routes) {
    os << "route " << r.boundary << ' ' << r.from_index << ' ' << r.to_index << " bps "
       << r.assigned_bps << " nodes";
    for (NodeId nd : r.path.nodes) os << ' ' << nd;
    os << '\n';
  }
  return os.str();
}

}  // namespace chainsim
