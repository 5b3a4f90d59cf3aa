#pragma once

// Physical network model for an edge-computing FiWi access network:
// an optical switch tree whose leaf switches act as FiWi star hubs with
// edge compute nodes (ECNs) attached, plus the graph primitives the
// placement algorithms need (BFS distances, betweenness centrality,
// Yen's k-shortest paths, widest min-hop routing).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainsim {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

enum class NodeKind { EdgeCompute, Switching };
enum class LinkKind { Optical, Wireless };

// Deterministic RNG wrapper. mt19937_64 output is standardized; the
// std distributions are not, so bounded draws are done by hand to keep
// generated topologies and request streams identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  std::int64_t uniform_i64(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_i64: lo > hi");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  double uniform_real(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

 private:
  std::mt19937_64 eng_;
};

struct NetworkNode {
  NodeId id = -1;
  NodeKind kind = NodeKind::Switching;
  // Compute fields apply to ECNs, switch fields to switching nodes; the
  // fields for the other kind stay zero.
  std::int64_t compute_capacity = 0;  // cycles/sec
  std::int64_t compute_load = 0;      // cycles/sec
  std::int64_t switch_capacity = 0;   // flow-table entries
  std::int64_t switch_load = 0;       // flow-table entries
  // FiWi hub metadata: leaf switches that aggregate wireless access.
  bool fiwi_hub = false;
  std::int64_t wireless_capacity = 0;  // bits/sec of attached radio front end
};

struct NetworkLink {
  LinkId id = -1;
  NodeId a = -1;
  NodeId b = -1;
  LinkKind kind = LinkKind::Optical;
  std::int64_t bandwidth = 0;  // bits/sec
  std::int64_t load = 0;       // bits/sec
  double prop_delay = 0.0;     // seconds
};

class PhysicalNetwork {
 public:
  NodeId add_compute_node(std::int64_t capacity) {
    if (capacity <= 0) throw std::invalid_argument("compute capacity must be positive");
    NetworkNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::EdgeCompute;
    n.compute_capacity = capacity;
    nodes_.push_back(n);
    adj_.emplace_back();
    return n.id;
  }

  NodeId add_switching_node(std::int64_t switch_capacity, bool fiwi_hub = false,
                            std::int64_t wireless_capacity = 0) {
    if (switch_capacity <= 0) throw std::invalid_argument("switch capacity must be positive");
    NetworkNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::Switching;
    n.switch_capacity = switch_capacity;
    n.fiwi_hub = fiwi_hub;
    n.wireless_capacity = wireless_capacity;
    nodes_.push_back(n);
    adj_.emplace_back();
    return n.id;
  }

  LinkId add_link(NodeId a, NodeId b, LinkKind kind, std::int64_t bandwidth,
                  double prop_delay) {
    if (a < 0 || b < 0 || a >= node_count() || b >= node_count())
      throw std::invalid_argument("link endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loop links are not allowed");
    if (bandwidth <= 0) throw std::invalid_argument("link bandwidth must be positive");
    if (prop_delay < 0) throw std::invalid_argument("negative propagation delay");
    if (find_link(a, b)) throw std::invalid_argument("parallel links are not allowed");
    NetworkLink l;
    l.id = static_cast<LinkId>(links_.size());
    l.a = a;
    l.b = b;
    l.kind = kind;
    l.bandwidth = bandwidth;
    l.prop_delay = prop_delay;
    links_.push_back(l);
    auto insert_sorted = [this](NodeId u, NodeId v, LinkId id) {
      auto& row = adj_[static_cast<std::size_t>(u)];
      row.insert(std::lower_bound(row.begin(), row.end(), std::make_pair(v, id)),
                 std::make_pair(v, id));
    };
    insert_sorted(a, b, l.id);
    insert_sorted(b, a, l.id);
    return l.id;
  }

  NodeId node_count() const { return static_cast<NodeId>(nodes_.size()); }
  LinkId link_count() const { return static_cast<LinkId>(links_.size()); }

  NetworkNode& node(NodeId id) { return nodes_.at(static_cast<std::size_t>(id)); }
  const NetworkNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  NetworkLink& link(LinkId id) { return links_.at(static_cast<std::size_t>(id)); }
  const NetworkLink& link(LinkId id) const { return links_.at(static_cast<std::size_t>(id)); }

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<NetworkLink>& links() const { return links_; }

  // Neighbors sorted by (node id, link id); the order fixes every
  // traversal tie-break in the graph algorithms below.
  const std::vector<std::pair<NodeId, LinkId>>& neighbors(NodeId id) const {
    return adj_.at(static_cast<std::size_t>(id));
  }

  int degree(NodeId id) const { return static_cast<int>(neighbors(id).size()); }

  std::optional<LinkId> find_link(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= node_count() || b >= node_count()) return std::nullopt;
    for (const auto& [n, l] : adj_[static_cast<std::size_t>(a)])
      if (n == b) return l;
    return std::nullopt;
  }

  std::int64_t link_residual(LinkId id) const {
    const auto& l = link(id);
    return l.bandwidth - l.load;
  }

  std::int64_t compute_residual(NodeId id) const {
    const auto& n = node(id);
    return n.compute_capacity - n.compute_load;
  }

  std::vector<NodeId> ecn_ids() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
      if (n.kind == NodeKind::EdgeCompute) out.push_back(n.id);
    return out;
  }

  std::vector<NodeId> switch_ids() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
      if (n.kind == NodeKind::Switching) out.push_back(n.id);
    return out;
  }

  // FiWi hubs: where user traffic enters and leaves the wired network.
  std::vector<NodeId> access_node_ids() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
      if (n.fiwi_hub) out.push_back(n.id);
    if (out.empty()) {  // hand-built test networks: fall back to switches
      for (const auto& n : nodes_)
        if (n.kind == NodeKind::Switching) out.push_back(n.id);
    }
    return out;
  }

  bool connected() const {
    if (nodes_.empty()) return true;
    std::vector<char> seen(nodes_.size(), 0);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = 1;
    std::size_t found = 1;
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (const auto& [v, l] : neighbors(u)) {
        (void)l;
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++found;
          q.push(v);
        }
      }
    }
    return found == nodes_.size();
  }

  // Line-oriented dump used for golden comparisons:
  //   node <id> <kind> <capacity>
  //   link <id> <a> <b> <kind> <bandwidth_bps> <prop_delay_s>
  std::string dump() const {
    std::ostringstream os;
    for (const auto& n : nodes_) {
      os << "node " << n.id << ' ' << (n.kind == NodeKind::EdgeCompute ? "ecn" : "switch")
         << ' '
         << (n.kind == NodeKind::EdgeCompute ? n.compute_capacity : n.switch_capacity)
         << '\n';
    }
    for (const auto& l : links_) {
      char prop[32];
      std::snprintf(prop, sizeof prop, "%g", l.prop_delay);
      os << "link " << l.id << ' ' << l.a << ' ' << l.b << ' '
         << (l.kind == LinkKind::Optical ? "optical" : "wireless") << ' ' << l.bandwidth
         << ' ' << prop << '\n';
    }
    return os.str();
  }

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<NetworkLink> links_;
  std::vector<std::vector<std::pair<NodeId, LinkId>>> adj_;
};

// ---------------------------------------------------------------------------
// Tree-star generator.
//
// Layout rule (all ids assigned in this order):
//   1. Optical switch tree: level d holds tree_fanout^d switches,
//      d = 0..tree_depth; each non-root switch links to its parent.
//   2. The level-tree_depth switches are FiWi hubs; each carries
//      wireless_channels x wireless_bandwidth of radio front-end capacity
//      as node metadata (the radio side aggregates user traffic and is
//      not part of the wired admission model).
//   3. With hub_ring set and >= 2 hubs, consecutive hubs are linked in a
//      ring (a single link for 2 hubs), giving the optical plane the path
//      diversity multipath routing needs.
//   4. ECN i attaches to hub (i mod hubs); at most star_leaves_per_hub
//      ECNs fit per hub. ECN capacities are drawn uniformly from
//      [mean - spread, mean + spread].
// ---------------------------------------------------------------------------
struct TopologyConfig {
  int ecn_count = 15;
  int tree_depth = 2;
  int tree_fanout = 3;
  int star_leaves_per_hub = 2;
  std::int64_t optical_bandwidth = 10'000'000'000;  // 10 Gbps
  std::int64_t wireless_bandwidth = 54'000'000;     // 54 Mbps per channel
  int wireless_channels = 4;
  std::int64_t compute_capacity_mean = 30'000'000'000;    // 30 Gigacycles/s
  std::int64_t compute_capacity_spread = 10'000'000'000;  // +-10 Gigacycles/s
  std::int64_t switch_capacity = 10'000;                  // flow-table entries
  std::uint64_t rng_seed = 1;
  bool hub_ring = true;
  double optical_prop_delay_s = 1e-4;   // 0.1 ms per fiber hop
  double wireless_prop_delay_s = 5e-4;  // 0.5 ms per radio hop
};

inline PhysicalNetwork build_tree_star(const TopologyConfig& cfg) {
  if (cfg.ecn_count < 1) throw std::invalid_argument("ecn_count must be >= 1");
  if (cfg.tree_depth < 0) throw std::invalid_argument("tree_depth must be >= 0");
  if (cfg.tree_depth > 0 && cfg.tree_fanout < 1)
    throw std::invalid_argument("tree_fanout must be >= 1");
  if (cfg.star_leaves_per_hub < 1)
    throw std::invalid_argument("star_leaves_per_hub must be >= 1");
  if (cfg.optical_bandwidth <= 0) throw std::invalid_argument("optical_bandwidth must be positive");
  if (cfg.wireless_channels > 0 && cfg.wireless_bandwidth <= 0)
    throw std::invalid_argument("wireless_bandwidth must be positive");
  if (cfg.wireless_channels < 0) throw std::invalid_argument("wireless_channels must be >= 0");
  if (cfg.switch_capacity <= 0) throw std::invalid_argument("switch_capacity must be positive");
  if (cfg.compute_capacity_mean <= cfg.compute_capacity_spread)
    throw std::invalid_argument("compute capacity range must stay positive");

  std::int64_t hubs = 1;
  for (int d = 0; d < cfg.tree_depth; ++d) hubs *= cfg.tree_fanout;
  if (static_cast<std::int64_t>(cfg.ecn_count) >
      hubs * static_cast<std::int64_t>(cfg.star_leaves_per_hub))
    throw std::invalid_argument("ecn_count exceeds hub star capacity");

  PhysicalNetwork net;
  Rng rng(cfg.rng_seed);
  const std::int64_t wireless_cap =
      static_cast<std::int64_t>(cfg.wireless_channels) * cfg.wireless_bandwidth;

  // 1+2: switch tree, level by level.
  std::vector<NodeId> level;
  std::vector<NodeId> hub_ids;
  std::int64_t level_size = 1;
  for (int d = 0; d <= cfg.tree_depth; ++d) {
    std::vector<NodeId> next;
    next.reserve(static_cast<std::size_t>(level_size));
    const bool is_hub_level = (d == cfg.tree_depth);
    for (std::int64_t i = 0; i < level_size; ++i) {
      const NodeId id = net.add_switching_node(cfg.switch_capacity, is_hub_level,
                                               is_hub_level ? wireless_cap : 0);
      if (d > 0)
        net.add_link(level[static_cast<std::size_t>(i / cfg.tree_fanout)], id,
                     LinkKind::Optical, cfg.optical_bandwidth, cfg.optical_prop_delay_s);
      next.push_back(id);
    }
    level = std::move(next);
    if (is_hub_level) hub_ids = level;
    level_size *= cfg.tree_fanout;
  }

  // 3: hub ring.
  if (cfg.hub_ring && hub_ids.size() >= 2) {
    for (std::size_t i = 0; i + 1 < hub_ids.size(); ++i)
      net.add_link(hub_ids[i], hub_ids[i + 1], LinkKind::Optical, cfg.optical_bandwidth,
                   cfg.optical_prop_delay_s);
    if (hub_ids.size() >= 3)
      net.add_link(hub_ids.back(), hub_ids.front(), LinkKind::Optical,
                   cfg.optical_bandwidth, cfg.optical_prop_delay_s);
  }

  // 4: ECNs round-robin over hubs.
  const std::int64_t lo = cfg.compute_capacity_mean - cfg.compute_capacity_spread;
  const std::int64_t hi = cfg.compute_capacity_mean + cfg.compute_capacity_spread;
  for (int i = 0; i < cfg.ecn_count; ++i) {
    const NodeId ecn = net.add_compute_node(rng.uniform_i64(lo, hi));
    net.add_link(hub_ids[static_cast<std::size_t>(i) % hub_ids.size()], ecn,
                 LinkKind::Optical, cfg.optical_bandwidth, cfg.optical_prop_delay_s);
  }
  return net;
}

// ---------------------------------------------------------------------------
// Graph primitives.
// ---------------------------------------------------------------------------

inline std::optional<int> hop_distance(const PhysicalNetwork& net, NodeId a, NodeId b) {
  if (a < 0 || b < 0 || a >= net.node_count() || b >= net.node_count())
    throw std::invalid_argument("hop_distance: node out of range");
  if (a == b) return 0;
  std::vector<int> dist(static_cast<std::size_t>(net.node_count()), -1);
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(a)] = 0;
  q.push(a);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (const auto& [v, l] : net.neighbors(u)) {
      (void)l;
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        if (v == b) return dist[static_cast<std::size_t>(v)];
        q.push(v);
      }
    }
  }
  return std::nullopt;
}

inline std::vector<std::vector<int>> all_pairs_hops(const PhysicalNetwork& net) {
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    auto& row = dist[s];
    row[s] = 0;
    std::queue<NodeId> q;
    q.push(static_cast<NodeId>(s));
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (const auto& [v, l] : net.neighbors(u)) {
        (void)l;
        if (row[static_cast<std::size_t>(v)] < 0) {
          row[static_cast<std::size_t>(v)] = row[static_cast<std::size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
  }
  return dist;
}

inline int network_diameter(const PhysicalNetwork& net) {
  const auto dist = all_pairs_hops(net);
  int d = 0;
  for (const auto& row : dist)
    for (int v : row) d = std::max(d, v);
  return d;
}

// Betweenness centrality over unordered node pairs (Brandes, unweighted
// hop-count shortest paths). A star center with 4 leaves scores 6.
inline std::vector<double> betweenness_centrality(const PhysicalNetwork& net) {
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<double> bc(n, 0.0);
  std::vector<int> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    std::queue<NodeId> q;
    q.push(static_cast<NodeId>(s));
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      order.push_back(u);
      for (const auto& [v, l] : net.neighbors(u)) {
        (void)l;
        const auto vi = static_cast<std::size_t>(v);
        const auto ui = static_cast<std::size_t>(u);
        if (dist[vi] < 0) {
          dist[vi] = dist[ui] + 1;
          q.push(v);
        }
        if (dist[vi] == dist[ui] + 1) {
          sigma[vi] += sigma[ui];
          preds[vi].push_back(u);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto wi = static_cast<std::size_t>(*it);
      for (NodeId u : preds[wi]) {
        const auto ui = static_cast<std::size_t>(u);
        delta[ui] += sigma[ui] / sigma[wi] * (1.0 + delta[wi]);
      }
      if (wi != s) bc[wi] += delta[wi];
    }
  }
  for (auto& v : bc) v /= 2.0;  // ordered pairs -> unordered pairs
  return bc;
}

struct Path {
  std::vector<NodeId> nodes;  // src..dst inclusive; empty = zero-length route
  std::vector<LinkId> links;  // nodes.size() - 1 entries
  double cost = 0.0;
};

inline bool path_node_seq_less(const Path& a, const Path& b) {
  return std::lexicographical_compare(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                                      b.nodes.end());
}

// Ordering used everywhere paths are ranked: cost first, then the
// lexicographically smallest node sequence.
inline bool path_less(const Path& a, const Path& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return path_node_seq_less(a, b);
}

namespace detail {

// Dijkstra over (cost, node-sequence) keys: among equal-cost shortest
// paths the lexicographically smallest node sequence wins. Graphs here
// are tiny, so carrying sequences in the heap is fine.
inline std::optional<Path> best_path(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                     const std::vector<double>& link_cost,
                                     const std::vector<char>& banned_node,
                                     const std::vector<char>& banned_link) {
  struct Item {
    double cost;
    std::vector<NodeId> nodes;
    std::vector<LinkId> links;
  };
  auto item_greater = [](const Item& x, const Item& y) {
    if (x.cost != y.cost) return x.cost > y.cost;
    return std::lexicographical_compare(y.nodes.begin(), y.nodes.end(), x.nodes.begin(),
                                        x.nodes.end());
  };
  std::priority_queue<Item, std::vector<Item>, decltype(item_greater)> pq(item_greater);
  std::vector<char> done(static_cast<std::size_t>(net.node_count()), 0);
  if (banned_node[static_cast<std::size_t>(src)] || banned_node[static_cast<std::size_t>(dst)])
    return std::nullopt;
  pq.push(Item{0.0, {src}, {}});
  while (!pq.empty()) {
    Item cur = pq.top();
    pq.pop();
    const NodeId u = cur.nodes.back();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    if (u == dst) return Path{std::move(cur.nodes), std::move(cur.links), cur.cost};
    for (const auto& [v, l] : net.neighbors(u)) {
      if (done[static_cast<std::size_t>(v)] || banned_node[static_cast<std::size_t>(v)] ||
          banned_link[static_cast<std::size_t>(l)])
        continue;
      Item nxt;
      nxt.cost = cur.cost + link_cost[static_cast<std::size_t>(l)];
      nxt.nodes = cur.nodes;
      nxt.nodes.push_back(v);
      nxt.links = cur.links;
      nxt.links.push_back(l);
      pq.push(std::move(nxt));
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Yen's algorithm: up to k loopless paths in nondecreasing (cost, lex
// node sequence) order. Returned lists are prefix-stable in k. Fewer
// than k paths means the graph has no more simple paths.
inline std::vector<Path> k_shortest_paths(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                          int k, const std::vector<double>& link_cost) {
  if (k < 1) throw std::invalid_argument("k_shortest_paths: k must be >= 1");
  if (src == dst) throw std::invalid_argument("k_shortest_paths: src == dst");
  if (src < 0 || dst < 0 || src >= net.node_count() || dst >= net.node_count())
    throw std::invalid_argument("k_shortest_paths: node out of range");
  if (link_cost.size() != static_cast<std::size_t>(net.link_count()))
    throw std::invalid_argument("k_shortest_paths: cost vector size mismatch");
  for (double c : link_cost)
    if (c < 0) throw std::invalid_argument("k_shortest_paths: negative link cost");

  std::vector<char> no_node(static_cast<std::size_t>(net.node_count()), 0);
  std::vector<char> no_link(static_cast<std::size_t>(net.link_count()), 0);

  std::vector<Path> found;
  auto first = detail::best_path(net, src, dst, link_cost, no_node, no_link);
  if (!first) return found;
  found.push_back(std::move(*first));

  auto cand_less = [](const Path& a, const Path& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.nodes != b.nodes) return path_node_seq_less(a, b);
    return false;  // equal node sequences are the same path
  };
  std::set<Path, decltype(cand_less)> candidates(cand_less);

  while (static_cast<int>(found.size()) < k) {
    const Path& prev = found.back();
    for (std::size_t spur = 0; spur + 1 < prev.nodes.size(); ++spur) {
      const NodeId spur_node = prev.nodes[spur];
      std::vector<char> banned_node = no_node;
      std::vector<char> banned_link = no_link;
      // Ban links that would repeat an already-found path sharing this root.
      for (const Path& p : found) {
        if (p.nodes.size() > spur &&
            std::equal(p.nodes.begin(), p.nodes.begin() + static_cast<long>(spur) + 1,
                       prev.nodes.begin()))
          banned_link[static_cast<std::size_t>(p.links[spur])] = 1;
      }
      // Ban root-path nodes so spur paths stay loopless.
      for (std::size_t i = 0; i < spur; ++i)
        banned_node[static_cast<std::size_t>(prev.nodes[i])] = 1;
      auto spur_path = detail::best_path(net, spur_node, dst, link_cost, banned_node,
                                         banned_link);
      if (!spur_path) continue;
      Path total;
      total.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + static_cast<long>(spur));
      total.nodes.insert(total.nodes.end(), spur_path->nodes.begin(), spur_path->nodes.end());
      total.links.assign(prev.links.begin(), prev.links.begin() + static_cast<long>(spur));
      total.links.insert(total.links.end(), spur_path->links.begin(), spur_path->links.end());
      // Recompute the cost in path order so equal paths always carry
      // bit-identical costs regardless of how they were discovered.
      total.cost = 0.0;
      for (LinkId l : total.links) total.cost += link_cost[static_cast<std::size_t>(l)];
      candidates.insert(std::move(total));
    }
    if (candidates.empty()) break;
    auto it = candidates.begin();
    bool dup = false;
    for (const Path& p : found)
      if (p.nodes == it->nodes) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(*it);
    candidates.erase(it);
  }
  return found;
}

// All minimum-hop paths between two nodes, in lexicographic node-sequence
// order. Used by equal-cost multipath splitting; tree-star topologies keep
// the count small, but a defensive cap guards pathological inputs.
inline std::vector<Path> min_hop_paths(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                       std::size_t max_paths = 64) {
  if (src == dst) throw std::invalid_argument("min_hop_paths: src == dst");
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<int> dist(n, -1);
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (const auto& [v, l] : net.neighbors(u)) {
      (void)l;
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  std::vector<Path> out;
  if (dist[static_cast<std::size_t>(dst)] < 0) return out;
  Path cur;
  cur.nodes.push_back(src);
  // DFS over the BFS DAG; neighbor order is ascending, so paths come out
  // in lexicographic order.
  std::function<void(NodeId)> walk = [&](NodeId u) {
    if (out.size() >= max_paths) return;
    if (u == dst) {
      Path p = cur;
      p.cost = static_cast<double>(p.links.size());
      out.push_back(std::move(p));
      return;
    }
    for (const auto& [v, l] : net.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] != dist[static_cast<std::size_t>(u)] + 1) continue;
      if (dist[static_cast<std::size_t>(v)] > dist[static_cast<std::size_t>(dst)]) continue;
      cur.nodes.push_back(v);
      cur.links.push_back(l);
      walk(v);
      cur.nodes.pop_back();
      cur.links.pop_back();
    }
  };
  walk(src);
  return out;
}

// Among minimum-hop paths, the one maximizing the bottleneck residual
// bandwidth (ties: smaller predecessor id). Returns the path and its
// bottleneck in bits/sec.
struct WidestPath {
  Path path;
  std::int64_t bottleneck = 0;
};

inline std::optional<WidestPath> widest_min_hop_path(const PhysicalNetwork& net, NodeId src,
                                                     NodeId dst) {
  if (src == dst) throw std::invalid_argument("widest_min_hop_path: src == dst");
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<int> dist(n, -1);
  std::vector<NodeId> order;
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    order.push_back(u);
    for (const auto& [v, l] : net.neighbors(u)) {
      (void)l;
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  if (dist[static_cast<std::size_t>(dst)] < 0) return std::nullopt;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  // Residuals may be negative on oversubscribed scratch networks, so an
  // unset entry is marked by par_node, not by a bottleneck sentinel.
  std::vector<std::int64_t> bot(n, std::numeric_limits<std::int64_t>::min());
  std::vector<NodeId> par_node(n, -1);
  std::vector<LinkId> par_link(n, -1);
  bot[static_cast<std::size_t>(src)] = kInf;
  // BFS order visits each layer before the next, so predecessors are final.
  for (NodeId u : order) {
    for (const auto& [v, l] : net.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] != dist[static_cast<std::size_t>(u)] + 1) continue;
      const std::int64_t cand =
          std::min(bot[static_cast<std::size_t>(u)], net.link_residual(l));
      auto& cur = bot[static_cast<std::size_t>(v)];
      const NodeId par = par_node[static_cast<std::size_t>(v)];
      if (par < 0 || cand > cur || (cand == cur && u < par)) {
        cur = cand;
        par_node[static_cast<std::size_t>(v)] = u;
        par_link[static_cast<std::size_t>(v)] = l;
      }
    }
  }
  WidestPath out;
  out.bottleneck = bot[static_cast<std::size_t>(dst)];
  std::vector<NodeId> rnodes;
  std::vector<LinkId> rlinks;
  for (NodeId v = dst; v != src; v = par_node[static_cast<std::size_t>(v)]) {
    rnodes.push_back(v);
    rlinks.push_back(par_link[static_cast<std::size_t>(v)]);
  }
  rnodes.push_back(src);
  out.path.nodes.assign(rnodes.rbegin(), rnodes.rend());
  out.path.links.assign(rlinks.rbegin(), rlinks.rend());
  out.path.cost = static_cast<double>(out.path.links.size());
  return out;
}

}  // namespace chainsim
