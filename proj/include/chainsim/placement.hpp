#pragma once

// Deployment algorithms. All four share the same outcome contract: on
// success the plan has passed a full feasibility check and its footprint
// is applied to the network; on rejection the network is untouched.
//
//  - gbmp_deploy: greedy weight-ranked candidates per stage; a stage is
//    either placed whole on the best candidate (when it stays under the
//    network-mean ECN utilization) or min-max split across the pool.
//  - ksmp_deploy: per stage, rank target ECNs by path-utilization cost,
//    gather k-shortest paths from each upstream instance, and split the
//    flow by a minimum-cost LP.
//  - ecmp_deploy: one best-weight ECN per stage, flow split equally over
//    all minimum-hop paths, no load awareness.
//  - ilps_deploy: the whole chain rides the single minimum-hop path with
//    every instance on a compute node along it, chosen by exhaustive
//    enumeration to minimize the composite load-balance objective.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chainsim/chain_model.hpp"
#include "chainsim/solvers.hpp"
#include "chainsim/topology.hpp"

namespace chainsim {

struct PlacementParams {
  int max_paths = 4;             // MP: split width / paths per query
  int candidate_pool_size = 0;   // GBMP candidate set size; 0 = max_paths
  ObjectiveWeights weights{};
  double bisection_tol = 1e-9;   // min-max split tolerance, demand units
  LoadMetric split_metric = LoadMetric::Utilization;
  double cpu_window_s = 1.0;     // CPU work -> sustained rate conversion
  std::int64_t ilps_exact_budget = 100'000;  // single-path search: max assignments scored

  int pool_size() const { return candidate_pool_size > 0 ? candidate_pool_size : max_paths; }
};

enum class RejectReason { None, NoCapacity, NoPath, DelayViolation, LpInfeasible };

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::NoCapacity: return "no_capacity";
    case RejectReason::NoPath: return "no_path";
    case RejectReason::DelayViolation: return "delay_violation";
    case RejectReason::LpInfeasible: return "lp_infeasible";
  }
  return "unknown";
}

struct PlacementOutcome {
  std::optional<DeploymentPlan> plan;
  RejectReason reason = RejectReason::None;
  bool accepted() const { return plan.has_value(); }
};

// Static per-network facts shared by every deploy call of a run:
// betweenness, hop distances, diameter, the largest link bandwidth, and
// a lazy cache of hop-count k-shortest paths (topology-only, so safe to
// reuse while loads change).
struct PlacementContext {
  std::vector<double> betweenness;
  std::vector<std::vector<int>> hops;
  int diameter = 1;
  std::int64_t max_bandwidth = 1;
  int hop_ksp_k = 0;
  mutable std::map<std::pair<NodeId, NodeId>, std::vector<Path>> hop_ksp_cache;

  static PlacementContext build(const PhysicalNetwork& net, int hop_ksp_k = 4) {
    PlacementContext ctx;
    ctx.betweenness = betweenness_centrality(net);
    ctx.hops = all_pairs_hops(net);
    ctx.diameter = std::max(1, network_diameter(net));
    for (const auto& l : net.links()) ctx.max_bandwidth = std::max(ctx.max_bandwidth, l.bandwidth);
    ctx.hop_ksp_k = hop_ksp_k;
    return ctx;
  }

  const std::vector<Path>& hop_paths(const PhysicalNetwork& net, NodeId u, NodeId v) const {
    auto it = hop_ksp_cache.find({u, v});
    if (it != hop_ksp_cache.end()) return it->second;
    std::vector<double> unit(static_cast<std::size_t>(net.link_count()), 1.0);
    auto paths = k_shortest_paths(net, u, v, hop_ksp_k, unit);
    return hop_ksp_cache.emplace(std::make_pair(u, v), std::move(paths)).first->second;
  }
};

// Candidate weight: (betweenness + degree) scaled up by the normalized
// residual bandwidth toward the candidate and down by the normalized hop
// distance from the feeding instances (worst case over feeders; a feeder
// on the candidate itself counts as distance 1 and full bandwidth).
inline double node_weight(const PhysicalNetwork& net, const PlacementContext& ctx,
                          NodeId candidate, const std::vector<NodeId>& prev_hosts) {
  if (net.node(candidate).kind != NodeKind::EdgeCompute)
    throw std::invalid_argument("node_weight: candidate must be an ECN");
  if (prev_hosts.empty()) throw std::invalid_argument("node_weight: no feeding hosts");
  double b_norm = 1.0;
  int dist = 1;
  for (NodeId prev : prev_hosts) {
    if (prev == candidate) continue;  // co-located feeder: no transport leg
    const auto w = widest_min_hop_path(net, prev, candidate);
    const double b = w ? static_cast<double>(w->bottleneck) : 0.0;
    b_norm = std::min(b_norm, b / static_cast<double>(ctx.max_bandwidth));
    const int h = ctx.hops[static_cast<std::size_t>(prev)][static_cast<std::size_t>(candidate)];
    if (h < 0) return 0.0;  // unreachable feeder
    dist = std::max(dist, h);
  }
  const double d_norm = static_cast<double>(dist) / static_cast<double>(ctx.diameter);
  const double base = ctx.betweenness[static_cast<std::size_t>(candidate)] +
                      static_cast<double>(net.degree(candidate));
  return base * b_norm / d_norm;
}

namespace detail {

// Splits `total` into integer parts proportional to `weights`
// (largest-remainder rounding, ties to the lower index). The parts sum
// to `total` exactly.
inline std::vector<std::int64_t> proportional_split(std::int64_t total,
                                                    const std::vector<double>& weights) {
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("proportional_split: negative weight");
    wsum += w;
  }
  if (!(wsum > 0)) throw std::invalid_argument("proportional_split: zero weight sum");
  const std::size_t n = weights.size();
  std::vector<std::int64_t> parts(n, 0);
  std::vector<double> frac(n, 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = static_cast<double>(total) * (weights[i] / wsum);
    parts[i] = std::min<std::int64_t>(total, static_cast<std::int64_t>(std::floor(raw)));
    frac[i] = raw - std::floor(raw);
    assigned += parts[i];
  }
  std::int64_t rem = total - assigned;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; rem > 0 && i < n; ++i, --rem) parts[order[i]] += 1;
  // Guard against accumulated float drift (rem < 0 cannot occur with floor,
  // but a defensive trim keeps the sum exact regardless).
  for (std::size_t i = 0; rem < 0 && i < n; ++i) {
    const std::int64_t cut = std::min(-rem, parts[i]);
    parts[i] -= cut;
    rem += cut;
  }
  return parts;
}

// Sustained CPU rate demanded by one stage of the request.
inline std::int64_t stage_cpu_rate(const ServiceChainRequest& req, const PlacementParams& p) {
  const double r = static_cast<double>(req.cpu_demand) / p.cpu_window_s;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(r)));
}

inline void validate_request(const PhysicalNetwork& net, const ServiceChainRequest& req) {
  if (req.ingress < 0 || req.ingress >= net.node_count() || req.egress < 0 ||
      req.egress >= net.node_count())
    throw std::invalid_argument("request endpoints out of range");
  if (req.bandwidth_demand <= 0) throw std::invalid_argument("bandwidth demand must be positive");
  if (req.cpu_demand <= 0) throw std::invalid_argument("cpu demand must be positive");
  if (req.delay_bound <= 0) throw std::invalid_argument("delay bound must be positive");
}

// Incremental plan assembly against a scratch copy of the network, so
// each stage sees the load the previous stages of the same chain already
// claimed. Nothing touches the real network until the finished plan
// passes check_feasibility.
class PlanBuilder {
 public:
  struct PendingRoute {
    int from_index = 0;        // index into the current frontier
    std::size_t target_slot = 0;  // index into the stage host list
    Path path;                 // empty = co-located
    std::int64_t bps = 0;
  };

  PlanBuilder(const PhysicalNetwork& net, const ServiceChainRequest& req,
              std::int64_t stage_rate)
      : scratch_(net), req_(&req), stage_rate_(stage_rate) {
    plan_.chain_id = req.id;
    plan_.ingress = req.ingress;
    plan_.egress = req.egress;
    front_hosts_ = {req.ingress};
    front_arrivals_ = {req.bandwidth_demand};
  }

  const PhysicalNetwork& scratch() const { return scratch_; }
  const std::vector<NodeId>& front_hosts() const { return front_hosts_; }
  const std::vector<std::int64_t>& front_arrivals() const { return front_arrivals_; }
  std::int64_t stage_rate() const { return stage_rate_; }

  void commit_stage(int stage, const std::vector<NodeId>& hosts,
                    const std::vector<PendingRoute>& routes) {
    std::vector<std::int64_t> arrivals(hosts.size(), 0);
    for (const auto& r : routes) arrivals.at(r.target_slot) += r.bps;
    std::vector<double> weights(arrivals.begin(), arrivals.end());
    const auto allocs = proportional_split(stage_rate_, weights);
    std::vector<VnfInstance> instances;
    for (std::size_t j = 0; j < hosts.size(); ++j) {
      if (arrivals[j] <= 0)
        throw std::logic_error("commit_stage: target without inbound flow");
      VnfInstance inst;
      inst.chain_id = req_->id;
      inst.stage = stage;
      inst.instance_index = static_cast<int>(j);
      inst.host = hosts[j];
      inst.allocated_cpu = std::max<std::int64_t>(1, allocs[j]);
      inst.flow_share = static_cast<double>(arrivals[j]) /
                        static_cast<double>(req_->bandwidth_demand);
      scratch_.node(hosts[j]).compute_load += inst.allocated_cpu;
      instances.push_back(inst);
    }
    for (const auto& r : routes) append_route(stage - 1, r);
    plan_.stages.push_back(std::move(instances));
    front_hosts_ = hosts;
    front_arrivals_ = std::move(arrivals);
  }

  void commit_egress(const std::vector<PendingRoute>& routes) {
    for (const auto& r : routes) append_route(plan_.stage_count(), r);
  }

  DeploymentPlan take_plan() { return std::move(plan_); }

 private:
  void append_route(int boundary, const PendingRoute& r) {
    RouteAssignment ra;
    ra.boundary = boundary;
    ra.from_index = r.from_index;
    ra.to_index = static_cast<int>(r.target_slot);
    ra.path = r.path;
    ra.ratio = static_cast<double>(r.bps) / static_cast<double>(req_->bandwidth_demand);
    ra.assigned_bps = r.bps;
    for (LinkId l : ra.path.links) scratch_.link(l).load += ra.assigned_bps;
    for (NodeId nd : ra.path.nodes)
      if (scratch_.node(nd).kind == NodeKind::Switching) scratch_.node(nd).switch_load += 1;
    plan_.routes.push_back(std::move(ra));
  }

  PhysicalNetwork scratch_;
  DeploymentPlan plan_;
  const ServiceChainRequest* req_;
  std::int64_t stage_rate_;
  std::vector<NodeId> front_hosts_;
  std::vector<std::int64_t> front_arrivals_;
};

// Shared tail: verify against the real network, apply, classify failures.
inline PlacementOutcome finalize(PhysicalNetwork& net, const ServiceChainRequest& req,
                                 DeploymentPlan&& plan) {
  const auto violations = check_feasibility(plan, req, net);
  if (violations.empty()) {
    const bool ok = apply_plan(net, plan);
    if (!ok) throw std::logic_error("finalize: feasible plan failed to apply");
    PlacementOutcome out;
    out.plan = std::move(plan);
    return out;
  }
  PlacementOutcome out;
  out.reason = RejectReason::DelayViolation;
  for (const auto& v : violations)
    if (v.kind != ConstraintKind::DelayBound) {
      out.reason = RejectReason::NoCapacity;
      break;
    }
  return out;
}

inline double mean_ecn_load(const PhysicalNetwork& net) {
  double sum = 0.0;
  int n = 0;
  for (const auto& node : net.nodes())
    if (node.kind == NodeKind::EdgeCompute) {
      sum += static_cast<double>(node.compute_load);
      ++n;
    }
  return n > 0 ? sum / n : 0.0;
}

// Residual bandwidth of the widest min-hop route between two nodes on
// the scratch network; co-located pairs are unconstrained.
inline std::int64_t route_bottleneck(const PhysicalNetwork& net, NodeId from, NodeId to) {
  if (from == to) return std::numeric_limits<std::int64_t>::max();
  const auto w = widest_min_hop_path(net, from, to);
  return w ? w->bottleneck : 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GBMP
// ---------------------------------------------------------------------------
inline PlacementOutcome gbmp_deploy(PhysicalNetwork& net, const ServiceChainRequest& req,
                                    const PlacementParams& params,
                                    const PlacementContext* ctx_in = nullptr) {
  detail::validate_request(net, req);
  PlacementContext local;
  if (!ctx_in) local = PlacementContext::build(net, params.max_paths);
  const PlacementContext& ctx = ctx_in ? *ctx_in : local;

  detail::PlanBuilder builder(net, req, detail::stage_cpu_rate(req, params));
  const int m = static_cast<int>(req.vnf_sequence.size());

  for (int stage = 1; stage <= m; ++stage) {
    const auto& scratch = builder.scratch();
    const auto& front = builder.front_hosts();
    const auto& arrivals = builder.front_arrivals();

    // Rank candidates by weight; keep the pool.
    std::vector<std::pair<double, NodeId>> ranked;
    for (NodeId ecn : scratch.ecn_ids()) {
      if (scratch.compute_residual(ecn) <= 0) continue;
      ranked.emplace_back(node_weight(scratch, ctx, ecn, front), ecn);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (ranked.size() > static_cast<std::size_t>(params.pool_size()))
      ranked.resize(static_cast<std::size_t>(params.pool_size()));
    if (ranked.empty()) return {std::nullopt, RejectReason::NoCapacity};

    const std::int64_t rate = builder.stage_rate();
    const double mean_load = detail::mean_ecn_load(scratch);

    // Single-instance branch: scan the pool in weight order and give the
    // whole stage to the first candidate whose free capacity still
    // exceeds the network-wide average ECN load. Such a node has room to
    // spare, and splitting there would only multiply the route footprint;
    // once every candidate is tighter than that, fall through to the
    // min-max split.
    bool placed_single = false;
    for (const auto& [weight, best] : ranked) {
      (void)weight;
      const std::int64_t residual = scratch.compute_residual(best);
      if (static_cast<double>(residual) <= mean_load) continue;
      bool fits = residual >= rate;
      for (std::size_t j = 0; fits && j < front.size(); ++j)
        fits = detail::route_bottleneck(scratch, front[j], best) >= arrivals[j];
      if (!fits) continue;
      std::vector<detail::PlanBuilder::PendingRoute> routes;
      bool routed = true;
      for (std::size_t j = 0; j < front.size(); ++j) {
        detail::PlanBuilder::PendingRoute r;
        r.from_index = static_cast<int>(j);
        r.target_slot = 0;
        if (front[j] != best) {
          auto w = widest_min_hop_path(scratch, front[j], best);
          if (!w) {
            routed = false;
            break;
          }
          r.path = std::move(w->path);
        }
        r.bps = arrivals[j];
        routes.push_back(std::move(r));
      }
      if (!routed) continue;  // feeder unreachable: try the next candidate
      builder.commit_stage(stage, {best}, routes);
      placed_single = true;
      break;
    }
    if (placed_single) continue;

    // Split branch: min-max split of the stage demand across the pool,
    // each candidate capped by its CPU headroom and by the residual
    // bandwidth of the paths feeding it.
    SplitProblem sp;
    sp.demand = static_cast<double>(rate);
    sp.metric = params.split_metric;
    for (const auto& [w, ecn] : ranked) {
      (void)w;
      SplitCandidate c;
      c.current_load = static_cast<double>(scratch.node(ecn).compute_load);
      c.capacity = static_cast<double>(scratch.node(ecn).compute_capacity);
      sp.candidates.push_back(c);
      double feed_cap = 1.0;  // fraction of the stage the feeders can carry
      for (std::size_t j = 0; j < front.size(); ++j) {
        const std::int64_t b = detail::route_bottleneck(scratch, front[j], ecn);
        if (arrivals[j] > 0)
          feed_cap = std::min(feed_cap, static_cast<double>(b) /
                                            static_cast<double>(arrivals[j]));
      }
      sp.link_caps.push_back(std::max(0.0, feed_cap) * sp.demand);
    }
    const auto sol = greedy_bisection_minmax(sp, params.bisection_tol * sp.demand);
    if (!sol) return {std::nullopt, RejectReason::NoCapacity};

    std::vector<NodeId> hosts;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < ranked.size(); ++i)
      if (sol->ratios[i] > 1e-12) {
        hosts.push_back(ranked[i].second);
        ratios.push_back(sol->ratios[i]);
      }
    if (hosts.empty()) return {std::nullopt, RejectReason::NoCapacity};

    std::vector<detail::PlanBuilder::PendingRoute> routes;
    bool dropped = false;
    for (std::size_t j = 0; j < front.size(); ++j) {
      auto parts = detail::proportional_split(arrivals[j], ratios);
      for (std::size_t t = 0; t < hosts.size(); ++t) {
        if (parts[t] <= 0) continue;
        detail::PlanBuilder::PendingRoute r;
        r.from_index = static_cast<int>(j);
        r.target_slot = t;
        if (front[j] != hosts[t]) {
          auto w = widest_min_hop_path(builder.scratch(), front[j], hosts[t]);
          if (!w) {
            dropped = true;
            break;
          }
          r.path = std::move(w->path);
        }
        r.bps = parts[t];
        routes.push_back(std::move(r));
      }
      if (dropped) break;
    }
    if (dropped) return {std::nullopt, RejectReason::NoPath};
    // A target may end up with zero inbound flow after quantization;
    // compact the host list so every instance carries flow.
    std::vector<std::int64_t> arr(hosts.size(), 0);
    for (const auto& r : routes) arr[r.target_slot] += r.bps;
    std::vector<NodeId> kept;
    std::vector<std::size_t> remap(hosts.size(), SIZE_MAX);
    for (std::size_t t = 0; t < hosts.size(); ++t)
      if (arr[t] > 0) {
        remap[t] = kept.size();
        kept.push_back(hosts[t]);
      }
    for (auto& r : routes) r.target_slot = remap[r.target_slot];
    builder.commit_stage(stage, kept, routes);
  }

  // Egress boundary: each final-stage instance sends its arrival share
  // to the egress node over the widest min-hop route.
  std::vector<detail::PlanBuilder::PendingRoute> tail;
  {
    const auto& front = builder.front_hosts();
    const auto& arrivals = builder.front_arrivals();
    for (std::size_t j = 0; j < front.size(); ++j) {
      detail::PlanBuilder::PendingRoute r;
      r.from_index = static_cast<int>(j);
      r.target_slot = 0;
      if (front[j] != req.egress) {
        auto w = widest_min_hop_path(builder.scratch(), front[j], req.egress);
        if (!w) return {std::nullopt, RejectReason::NoPath};
        r.path = std::move(w->path);
      }
      r.bps = arrivals[j];
      tail.push_back(std::move(r));
    }
  }
  builder.commit_egress(tail);
  return detail::finalize(net, req, builder.take_plan());
}

// ---------------------------------------------------------------------------
// KSMP
// ---------------------------------------------------------------------------
inline PlacementOutcome ksmp_deploy(PhysicalNetwork& net, const ServiceChainRequest& req,
                                    const PlacementParams& params,
                                    const PlacementContext* ctx_in = nullptr) {
  detail::validate_request(net, req);
  (void)ctx_in;  // ranking is load-driven; no static facts needed

  detail::PlanBuilder builder(net, req, detail::stage_cpu_rate(req, params));
  const int m = static_cast<int>(req.vnf_sequence.size());
  const std::int64_t rate = builder.stage_rate();

  // Edge cost for routing and the LP: link utilization plus a small
  // per-hop term. Without the hop term every empty path costs zero and
  // the router happily takes arbitrarily long detours on a cold network,
  // wasting bandwidth; with it, load differences still dominate once
  // links carry real traffic.
  constexpr double kHopCost = 0.05;

  for (int stage = 1; stage <= m; ++stage) {
    const auto& scratch = builder.scratch();
    const auto& front = builder.front_hosts();
    const auto& arrivals = builder.front_arrivals();

    std::vector<double> util_cost(static_cast<std::size_t>(scratch.link_count()));
    for (const auto& l : scratch.links())
      util_cost[static_cast<std::size_t>(l.id)] =
          static_cast<double>(l.load) / static_cast<double>(l.bandwidth) + kHopCost;

    // Rank target ECNs by flow-weighted path cost plus node utilization.
    struct Target {
      double cost;
      NodeId id;
    };
    std::vector<Target> targets;
    std::vector<char> no_node(static_cast<std::size_t>(scratch.node_count()), 0);
    std::vector<char> no_link(static_cast<std::size_t>(scratch.link_count()), 0);
    for (NodeId ecn : scratch.ecn_ids()) {
      if (scratch.compute_residual(ecn) <= 0) continue;
      double cost = static_cast<double>(scratch.node(ecn).compute_load) /
                    static_cast<double>(scratch.node(ecn).compute_capacity);
      bool reachable = true;
      for (std::size_t j = 0; j < front.size(); ++j) {
        if (front[j] == ecn) continue;
        const auto p = detail::best_path(scratch, front[j], ecn, util_cost, no_node, no_link);
        if (!p) {
          reachable = false;
          break;
        }
        cost += p->cost * static_cast<double>(arrivals[j]) /
                static_cast<double>(req.bandwidth_demand);
      }
      if (reachable) targets.push_back({cost, ecn});
    }
    std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.id < b.id;
    });
    if (targets.size() > static_cast<std::size_t>(params.max_paths))
      targets.resize(static_cast<std::size_t>(params.max_paths));
    if (targets.empty()) return {std::nullopt, RejectReason::NoCapacity};

    std::vector<NodeId> hosts;
    for (const auto& t : targets) hosts.push_back(t.id);

    // Per feeder: pool k-shortest paths to every target, keep the MP
    // cheapest, and solve the min-cost split. CPU and bandwidth already
    // promised to earlier feeders of this stage are reserved so later
    // feeders see the reduced headroom.
    std::map<NodeId, std::int64_t> cpu_reserved;
    std::map<LinkId, std::int64_t> bw_reserved;
    std::vector<detail::PlanBuilder::PendingRoute> routes;
    for (std::size_t j = 0; j < front.size(); ++j) {
      struct Option {
        double cost;
        std::size_t slot;
        Path path;  // empty = co-located
      };
      std::vector<Option> options;
      for (std::size_t t = 0; t < hosts.size(); ++t) {
        const NodeId target = hosts[t];
        const double node_term = static_cast<double>(scratch.node(target).compute_load) /
                                 static_cast<double>(scratch.node(target).compute_capacity);
        if (front[j] == target) {
          options.push_back({node_term, t, Path{}});
          continue;
        }
        for (auto& p : k_shortest_paths(scratch, front[j], target, params.max_paths, util_cost))
          options.push_back({p.cost + node_term, t, std::move(p)});
      }
      std::stable_sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        if (a.slot != b.slot) return a.slot < b.slot;
        return path_node_seq_less(a.path, b.path);
      });
      if (options.size() > static_cast<std::size_t>(params.max_paths))
        options.resize(static_cast<std::size_t>(params.max_paths));
      if (options.empty()) return {std::nullopt, RejectReason::NoPath};

      SplitProblem sp;
      sp.demand = static_cast<double>(arrivals[j]);
      sp.metric = LoadMetric::Absolute;
      for (const auto& o : options) {
        const NodeId target = hosts[o.slot];
        // Headroom in flow units: path residual bandwidth and the
        // target's CPU headroom translated through rate/demand.
        std::int64_t bw_room = std::numeric_limits<std::int64_t>::max();
        for (LinkId l : o.path.links)
          bw_room = std::min(bw_room, scratch.link_residual(l) -
                                          (bw_reserved.count(l) ? bw_reserved[l] : 0));
        const std::int64_t cpu_free =
            scratch.compute_residual(target) -
            (cpu_reserved.count(target) ? cpu_reserved[target] : 0);
        const double cpu_room = static_cast<double>(cpu_free) *
                                static_cast<double>(req.bandwidth_demand) /
                                static_cast<double>(rate);
        SplitCandidate c;
        c.current_load = 0.0;
        c.capacity = std::max(0.0, std::min(static_cast<double>(bw_room), cpu_room));
        c.unit_cost = o.cost;
        sp.candidates.push_back(c);
      }
      const auto sol = simplex_min_cost(sp);
      if (!sol) return {std::nullopt, RejectReason::LpInfeasible};
      // Honor the LP shares exactly against the live residuals. The LP
      // prices options independently, so two options sharing a tight link
      // can jointly exceed it; when that happens the split has failed and
      // the request is rejected.
      auto parts = detail::proportional_split(arrivals[j], sol->ratios);
      for (std::size_t i = 0; i < options.size(); ++i) {
        const std::int64_t want = parts[i];
        if (want <= 0) continue;
        const NodeId target = hosts[options[i].slot];
        std::int64_t room = std::numeric_limits<std::int64_t>::max();
        for (LinkId l : options[i].path.links)
          room = std::min(room, scratch.link_residual(l) - bw_reserved[l]);
        const double cpu_room =
            static_cast<double>(scratch.compute_residual(target) - cpu_reserved[target]) *
            static_cast<double>(req.bandwidth_demand) / static_cast<double>(rate);
        room = std::min(room, static_cast<std::int64_t>(std::max(0.0, cpu_room)));
        if (want > room) return {std::nullopt, RejectReason::LpInfeasible};
        detail::PlanBuilder::PendingRoute r;
        r.from_index = static_cast<int>(j);
        r.target_slot = options[i].slot;
        r.path = options[i].path;
        r.bps = want;
        for (LinkId l : r.path.links) bw_reserved[l] += want;
        cpu_reserved[target] +=
            static_cast<std::int64_t>(static_cast<double>(rate) * static_cast<double>(want) /
                                      static_cast<double>(req.bandwidth_demand)) + 1;
        routes.push_back(std::move(r));
      }
    }
    // Drop targets that received nothing.
    std::vector<std::int64_t> arr(hosts.size(), 0);
    for (const auto& r : routes) arr[r.target_slot] += r.bps;
    std::vector<NodeId> kept;
    std::vector<std::size_t> remap(hosts.size(), SIZE_MAX);
    for (std::size_t t = 0; t < hosts.size(); ++t)
      if (arr[t] > 0) {
        remap[t] = kept.size();
        kept.push_back(hosts[t]);
      }
    if (kept.empty()) return {std::nullopt, RejectReason::LpInfeasible};
    for (auto& r : routes) r.target_slot = remap[r.target_slot];
    builder.commit_stage(stage, kept, routes);
  }

  // Egress boundary: cheapest utilization-cost path per final instance.
  std::vector<detail::PlanBuilder::PendingRoute> tail;
  {
    const auto& scratch = builder.scratch();
    const auto& front = builder.front_hosts();
    const auto& arrivals = builder.front_arrivals();
    std::vector<double> util_cost(static_cast<std::size_t>(scratch.link_count()));
    for (const auto& l : scratch.links())
      util_cost[static_cast<std::size_t>(l.id)] =
          static_cast<double>(l.load) / static_cast<double>(l.bandwidth) + kHopCost;
    std::vector<char> no_node(static_cast<std::size_t>(scratch.node_count()), 0);
    std::vector<char> no_link(static_cast<std::size_t>(scratch.link_count()), 0);
    for (std::size_t j = 0; j < front.size(); ++j) {
      detail::PlanBuilder::PendingRoute r;
      r.from_index = static_cast<int>(j);
      r.target_slot = 0;
      if (front[j] != req.egress) {
        auto p = detail::best_path(scratch, front[j], req.egress, util_cost, no_node, no_link);
        if (!p) return {std::nullopt, RejectReason::NoPath};
        r.path = std::move(*p);
      }
      r.bps = arrivals[j];
      tail.push_back(std::move(r));
    }
  }
  builder.commit_egress(tail);
  return detail::finalize(net, req, builder.take_plan());
}

// ---------------------------------------------------------------------------
// ECMP
// ---------------------------------------------------------------------------
inline PlacementOutcome ecmp_deploy(PhysicalNetwork& net, const ServiceChainRequest& req,
                                    const PlacementParams& params,
                                    const PlacementContext* ctx_in = nullptr) {
  detail::validate_request(net, req);
  PlacementContext local;
  if (!ctx_in) local = PlacementContext::build(net, params.max_paths);
  const PlacementContext& ctx = ctx_in ? *ctx_in : local;

  detail::PlanBuilder builder(net, req, detail::stage_cpu_rate(req, params));
  const int m = static_cast<int>(req.vnf_sequence.size());

  auto equal_split_routes = [&](NodeId to, std::size_t slot,
                                std::vector<detail::PlanBuilder::PendingRoute>& routes) -> bool {
    const auto& front = builder.front_hosts();
    const auto& arrivals = builder.front_arrivals();
    for (std::size_t j = 0; j < front.size(); ++j) {
      if (front[j] == to) {
        detail::PlanBuilder::PendingRoute r;
        r.from_index = static_cast<int>(j);
        r.target_slot = slot;
        r.bps = arrivals[j];
        routes.push_back(std::move(r));
        continue;
      }
      auto paths = min_hop_paths(builder.scratch(), front[j], to);
      if (paths.empty()) return false;
      const std::vector<double> equal(paths.size(), 1.0);
      auto parts = detail::proportional_split(arrivals[j], equal);
      for (std::size_t p = 0; p < paths.size(); ++p) {
        if (parts[p] <= 0) continue;
        detail::PlanBuilder::PendingRoute r;
        r.from_index = static_cast<int>(j);
        r.target_slot = slot;
        r.path = paths[p];
        r.bps = parts[p];
        routes.push_back(std::move(r));
      }
    }
    return true;
  };

  for (int stage = 1; stage <= m; ++stage) {
    const auto& scratch = builder.scratch();
    NodeId best = -1;
    double best_w = -1.0;
    for (NodeId ecn : scratch.ecn_ids()) {
      if (scratch.compute_residual(ecn) <= 0) continue;
      const double w = node_weight(scratch, ctx, ecn, builder.front_hosts());
      if (w > best_w || (w == best_w && (best < 0 || ecn < best))) {
        best_w = w;
        best = ecn;
      }
    }
    if (best < 0) return {std::nullopt, RejectReason::NoCapacity};
    std::vector<detail::PlanBuilder::PendingRoute> routes;
    if (!equal_split_routes(best, 0, routes)) return {std::nullopt, RejectReason::NoPath};
    builder.commit_stage(stage, {best}, routes);
  }

  std::vector<detail::PlanBuilder::PendingRoute> tail;
  if (!equal_split_routes(req.egress, 0, tail)) return {std::nullopt, RejectReason::NoPath};
  builder.commit_egress(tail);
  return detail::finalize(net, req, builder.take_plan());
}

// ---------------------------------------------------------------------------
// ILPS
// ---------------------------------------------------------------------------
// Single-path deployment: the whole chain rides the one minimum-hop
// ingress-to-egress path. Every instance sits on a compute node on that
// path or one pendant link off it, visited in flow order: the undivided
// demand crosses each backbone link exactly once and detours down and back
// up each pendant attachment (that link carries it twice per visit). The
// search enumerates every in-order assignment of stages to the path's
// candidate hosts (consecutive stages may share a node) and keeps the
// feasible choice with the smallest composite objective; there is no
// alternative route when the path is full.
inline PlacementOutcome ilps_deploy(PhysicalNetwork& net, const ServiceChainRequest& req,
                                    const PlacementParams& params,
                                    const PlacementContext* ctx_in = nullptr) {
  detail::validate_request(net, req);
  PlacementContext local;
  if (!ctx_in) local = PlacementContext::build(net, params.max_paths);
  const PlacementContext& ctx = ctx_in ? *ctx_in : local;

  const int m = static_cast<int>(req.vnf_sequence.size());
  const std::int64_t rate = detail::stage_cpu_rate(req, params);
  const double exec_delay = static_cast<double>(req.cpu_demand) / static_cast<double>(rate);

  // Loop request: the only single path is the empty walk at the shared
  // endpoint, so the whole chain must fit there with no transport legs.
  if (req.ingress == req.egress) {
    const auto& node = net.node(req.ingress);
    if (m > 0 && (node.kind != NodeKind::EdgeCompute ||
                  node.compute_load + rate * static_cast<std::int64_t>(m) > node.compute_capacity))
      return {std::nullopt, RejectReason::NoCapacity};
    if (static_cast<double>(m) * exec_delay > req.delay_bound)
      return {std::nullopt, RejectReason::DelayViolation};
    detail::PlanBuilder builder(net, req, rate);
    for (int s = 0; s < m; ++s) {
      detail::PlanBuilder::PendingRoute r;
      r.from_index = 0;
      r.target_slot = 0;
      r.bps = req.bandwidth_demand;
      builder.commit_stage(s + 1, {req.ingress}, {r});
    }
    detail::PlanBuilder::PendingRoute tail;
    tail.from_index = 0;
    tail.target_slot = 0;
    tail.bps = req.bandwidth_demand;
    builder.commit_egress({tail});
    return detail::finalize(net, req, builder.take_plan());
  }

  const auto& all_paths = ctx.hop_paths(net, req.ingress, req.egress);
  if (all_paths.empty()) return {std::nullopt, RejectReason::NoPath};
  // The single path: the fewest-hop route (head of the hop-ranked window).
  const std::span<const Path> paths{all_paths.data(), 1};

  // Candidate host: a compute node on the backbone path (attach = its own
  // position, no pendant link) or one pendant link off it (attach = the
  // backbone position it hangs from).
  struct Cand {
    NodeId host = -1;
    std::size_t attach = 0;
    LinkId up = -1;  // pendant link; -1 when the host is on the path
  };
  struct Choice {
    const Path* path = nullptr;
    std::vector<Cand> stops;  // one per stage, attach positions non-decreasing
    double objective = 0.0;
  };
  std::optional<Choice> best;
  bool saw_capacity = false;
  bool saw_delay = false;
  std::int64_t budget = std::max<std::int64_t>(1, params.ilps_exact_budget);

  const auto n_nodes = static_cast<std::size_t>(net.node_count());
  const auto n_links = static_cast<std::size_t>(net.link_count());
  std::vector<std::int64_t> link_add(n_links, 0);
  std::vector<std::int64_t> cpu_add(n_nodes, 0);
  std::vector<std::int64_t> table_add(n_nodes, 0);
  std::vector<char> link_mark(n_links, 0);
  std::vector<char> node_mark(n_nodes, 0);
  std::vector<LinkId> touched_links;
  std::vector<NodeId> touched_nodes;
  std::vector<char> on_path(n_nodes, 0);
  std::vector<std::size_t> seq(static_cast<std::size_t>(m));

  for (const auto& p : paths) {
    if (budget <= 0) break;

    // Whatever the assignment, every backbone link carries the whole demand
    // at least once; prune paths that cannot even do that.
    bool backbone_ok = true;
    for (LinkId l : p.links)
      if (net.link(l).load + req.bandwidth_demand > net.link(l).bandwidth) backbone_ok = false;
    if (!backbone_ok) {
      saw_capacity = true;
      continue;
    }

    // Candidate hosts for this path. A host adjacent to several backbone
    // nodes attaches at the earliest: the backbone consumption is the same
    // either way, so one canonical attachment suffices.
    on_path.assign(on_path.size(), 0);
    for (NodeId nd : p.nodes) on_path[static_cast<std::size_t>(nd)] = 1;
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      if (net.node(p.nodes[i]).kind == NodeKind::EdgeCompute)
        cands.push_back({p.nodes[i], i, -1});
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      for (const auto& [nb, l] : net.neighbors(p.nodes[i])) {
        if (on_path[static_cast<std::size_t>(nb)] != 0) continue;
        if (net.node(nb).kind != NodeKind::EdgeCompute) continue;
        bool seen = false;
        for (const auto& c : cands) seen = seen || c.host == nb;
        if (!seen) cands.push_back({nb, i, l});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.attach != b.attach) return a.attach < b.attach;
      return a.host < b.host;
    });
    if (m > 0 && cands.empty()) {
      saw_capacity = true;
      continue;
    }

    auto add_link = [&](LinkId l) {
      const auto li = static_cast<std::size_t>(l);
      if (link_mark[li] == 0) {
        link_mark[li] = 1;
        touched_links.push_back(l);
      }
      link_add[li] += req.bandwidth_demand;
    };
    auto mark_node = [&](NodeId nd) {
      const auto ni = static_cast<std::size_t>(nd);
      if (node_mark[ni] == 0) {
        node_mark[ni] = 1;
        touched_nodes.push_back(nd);
      }
    };
    auto add_table = [&](NodeId nd) {
      if (net.node(nd).kind != NodeKind::Switching) return;
      mark_node(nd);
      table_add[static_cast<std::size_t>(nd)] += 1;
    };
    auto clear_deltas = [&]() {
      for (LinkId l : touched_links) {
        link_add[static_cast<std::size_t>(l)] = 0;
        link_mark[static_cast<std::size_t>(l)] = 0;
      }
      for (NodeId nd : touched_nodes) {
        cpu_add[static_cast<std::size_t>(nd)] = 0;
        table_add[static_cast<std::size_t>(nd)] = 0;
        node_mark[static_cast<std::size_t>(nd)] = 0;
      }
      touched_links.clear();
      touched_nodes.clear();
    };

    // Applies one transport leg between consecutive stops: the previous
    // host's pendant link up (if any), the backbone segment, and the next
    // host's pendant link down (if any). Every switching node the leg
    // visits installs one forwarding entry. A leg with no links at all is
    // co-location and leaves no trace.
    auto apply_leg = [&](const Cand* from, std::size_t from_pos, const Cand* to,
                         std::size_t to_pos) {
      const bool from_pendant = from != nullptr && from->up >= 0;
      const bool to_pendant = to != nullptr && to->up >= 0;
      if (from_pos == to_pos && !from_pendant && !to_pendant) return;
      if (from_pendant) add_link(from->up);
      if (to_pendant) add_link(to->up);
      for (std::size_t i = from_pos; i < to_pos; ++i) add_link(p.links[i]);
      for (std::size_t i = from_pos; i <= to_pos; ++i) add_table(p.nodes[i]);
    };

    auto consider = [&]() {
      --budget;
      double transit = 0.0;
      const Cand* prev = nullptr;
      std::size_t cur_pos = 0;
      for (int s = 0; s < m; ++s) {
        const Cand& c = cands[seq[static_cast<std::size_t>(s)]];
        if (prev == nullptr || prev->host != c.host) {
          apply_leg(prev, cur_pos, &c, c.attach);
          cur_pos = c.attach;
        }
        mark_node(c.host);
        cpu_add[static_cast<std::size_t>(c.host)] += rate;
        prev = &c;
      }
      apply_leg(prev, cur_pos, nullptr, p.nodes.size() - 1);

      bool cap_ok = true;
      for (LinkId l : touched_links) {
        const auto& link = net.link(l);
        if (link.load + link_add[static_cast<std::size_t>(l)] > link.bandwidth) cap_ok = false;
        transit += static_cast<double>(link_add[static_cast<std::size_t>(l)]) /
                   static_cast<double>(req.bandwidth_demand) *
                   (static_cast<double>(req.data_size) * 8.0 /
                        static_cast<double>(link.bandwidth) +
                    link.prop_delay);
      }
      for (NodeId nd : touched_nodes) {
        const auto& node = net.node(nd);
        if (node.kind == NodeKind::Switching) {
          if (node.switch_load + table_add[static_cast<std::size_t>(nd)] > node.switch_capacity)
            cap_ok = false;
        } else if (node.kind == NodeKind::EdgeCompute) {
          if (node.compute_load + cpu_add[static_cast<std::size_t>(nd)] > node.compute_capacity)
            cap_ok = false;
        }
      }
      if (!cap_ok) {
        saw_capacity = true;
        clear_deltas();
        return;
      }
      if (transit + static_cast<double>(m) * exec_delay > req.delay_bound) {
        saw_delay = true;
        clear_deltas();
        return;
      }

      LoadBalanceIndicators lbi;
      {
        double max_c = 0.0, sum_c = 0.0;
        int n_c = 0;
        double max_s = 0.0, sum_s = 0.0;
        int n_s = 0;
        for (const auto& node : net.nodes()) {
          if (node.kind == NodeKind::EdgeCompute) {
            const double u = (static_cast<double>(node.compute_load) +
                              static_cast<double>(cpu_add[static_cast<std::size_t>(node.id)])) /
                             static_cast<double>(node.compute_capacity);
            max_c = std::max(max_c, u);
            sum_c += u;
            ++n_c;
          } else if (node.kind == NodeKind::Switching) {
            const double u = (static_cast<double>(node.switch_load) +
                              static_cast<double>(table_add[static_cast<std::size_t>(node.id)])) /
                             static_cast<double>(node.switch_capacity);
            max_s = std::max(max_s, u);
            sum_s += u;
            ++n_s;
          }
        }
        lbi.lbi_c = (n_c == 0 || sum_c == 0.0) ? 1.0 : max_c / (sum_c / n_c);
        lbi.lbi_s = (n_s == 0 || sum_s == 0.0) ? 1.0 : max_s / (sum_s / n_s);
        double sum_l = 0.0, sumsq_l = 0.0;
        for (const auto& link : net.links()) {
          const double u = (static_cast<double>(link.load) +
                            static_cast<double>(link_add[static_cast<std::size_t>(link.id)])) /
                           static_cast<double>(link.bandwidth);
          sum_l += u;
          sumsq_l += u * u;
        }
        if (net.link_count() > 0) {
          const double n_l = static_cast<double>(net.link_count());
          const double mean = sum_l / n_l;
          lbi.lbi_n = std::sqrt(std::max(0.0, sumsq_l / n_l - mean * mean));
        }
      }
      const double obj = composite_objective(lbi, params.weights);
      if (!best || obj < best->objective) {
        Choice c;
        c.path = &p;
        c.stops.reserve(static_cast<std::size_t>(m));
        for (int s = 0; s < m; ++s) c.stops.push_back(cands[seq[static_cast<std::size_t>(s)]]);
        c.objective = obj;
        best = std::move(c);
      }
      clear_deltas();
    };
    auto rec = [&](auto&& self, int s, std::size_t lo) -> void {
      if (budget <= 0) return;
      if (s == m) {
        consider();
        return;
      }
      for (std::size_t i = lo; i < cands.size(); ++i) {
        seq[static_cast<std::size_t>(s)] = i;
        self(self, s + 1, i);
      }
    };
    rec(rec, 0, 0);
  }

  if (!best) {
    if (saw_delay && !saw_capacity) return {std::nullopt, RejectReason::DelayViolation};
    return {std::nullopt, RejectReason::NoCapacity};
  }

  // Materialize the winning choice as one transport leg per stage boundary.
  const Path& p = *best->path;
  auto leg_path = [&](const Cand* from, std::size_t from_pos, const Cand* to,
                      std::size_t to_pos) {
    Path lp;
    if (from != nullptr && from->up >= 0) {
      lp.nodes.push_back(from->host);
      lp.links.push_back(from->up);
    }
    lp.nodes.insert(lp.nodes.end(), p.nodes.begin() + static_cast<std::ptrdiff_t>(from_pos),
                    p.nodes.begin() + static_cast<std::ptrdiff_t>(to_pos) + 1);
    lp.links.insert(lp.links.end(), p.links.begin() + static_cast<std::ptrdiff_t>(from_pos),
                    p.links.begin() + static_cast<std::ptrdiff_t>(to_pos));
    if (to != nullptr && to->up >= 0) {
      lp.nodes.push_back(to->host);
      lp.links.push_back(to->up);
    }
    if (lp.links.empty()) return Path{};  // co-located endpoints: no transport leg
    return lp;
  };
  detail::PlanBuilder builder(net, req, rate);
  const Cand* prev = nullptr;
  std::size_t cur_pos = 0;
  for (int s = 0; s < m; ++s) {
    const Cand& c = best->stops[static_cast<std::size_t>(s)];
    detail::PlanBuilder::PendingRoute r;
    r.from_index = 0;
    r.target_slot = 0;
    r.bps = req.bandwidth_demand;
    if (prev == nullptr || prev->host != c.host) {
      r.path = leg_path(prev, cur_pos, &c, c.attach);
      cur_pos = c.attach;
    }
    builder.commit_stage(s + 1, {c.host}, {r});
    prev = &c;
  }
  detail::PlanBuilder::PendingRoute tail;
  tail.from_index = 0;
  tail.target_slot = 0;
  tail.path = leg_path(prev, cur_pos, nullptr, p.nodes.size() - 1);
  tail.bps = req.bandwidth_demand;
  builder.commit_egress({tail});
  return detail::finalize(net, req, builder.take_plan());
}

// Algorithm selector shared by the simulator and the CLI.
enum class Algorithm { Gbmp, Ksmp, Ecmp, Ilps };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gbmp: return "gbmp";
    case Algorithm::Ksmp: return "ksmp";
    case Algorithm::Ecmp: return "ecmp";
    case Algorithm::Ilps: return "ilps";
  }
  return "unknown";
}

inline std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  if (s == "gbmp") return Algorithm::Gbmp;
  if (s == "ksmp") return Algorithm::Ksmp;
  if (s == "ecmp") return Algorithm::Ecmp;
  if (s == "ilps") return Algorithm::Ilps;
  return std::nullopt;
}

inline PlacementOutcome deploy(Algorithm algo, PhysicalNetwork& net,
                               const ServiceChainRequest& req, const PlacementParams& params,
                               const PlacementContext* ctx = nullptr) {
  switch (algo) {
    case Algorithm::Gbmp: return gbmp_deploy(net, req, params, ctx);
    case Algorithm::Ksmp: return ksmp_deploy(net, req, params, ctx);
    case Algorithm::Ecmp: return ecmp_deploy(net, req, params, ctx);
    case Algorithm::Ilps: return ilps_deploy(net, req, params, ctx);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace chainsim
