#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "chainsim/topology.hpp"
#include "support/oracles.hpp"

using namespace chainsim;

namespace {

PhysicalNetwork path_abc() {
  PhysicalNetwork net;
  net.add_switching_node(100);  // a = 0
  net.add_switching_node(100);  // b = 1
  net.add_switching_node(100);  // c = 2
  net.add_link(0, 1, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(1, 2, LinkKind::Optical, 1'000, 1e-4);
  return net;
}

}  // namespace

TEST_CASE("network rejects malformed links") {
  PhysicalNetwork net;
  net.add_switching_node(100);
  net.add_switching_node(100);
  net.add_link(0, 1, LinkKind::Optical, 1'000, 0.0);
  CHECK_THROWS_AS(net.add_link(0, 0, LinkKind::Optical, 1'000, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(net.add_link(0, 1, LinkKind::Optical, 1'000, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(net.add_link(0, 1, LinkKind::Optical, 0, 0.0), std::invalid_argument);
}

TEST_CASE("neighbors are sorted and degree sums to twice the links") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rng.uniform_i64(2, 10));
    const auto net = oracles::random_graph(rng, n, 0.4);
    int degree_sum = 0;
    for (NodeId v = 0; v < net.node_count(); ++v) {
      const auto& nb = net.neighbors(v);
      degree_sum += static_cast<int>(nb.size());
      CHECK(std::is_sorted(nb.begin(), nb.end()));
    }
    CHECK(degree_sum == 2 * net.link_count());
  }
}

TEST_CASE("minimal generated topology: one hub, one compute node") {
  TopologyConfig cfg;
  cfg.ecn_count = 1;
  cfg.tree_depth = 0;
  cfg.star_leaves_per_hub = 1;
  const auto net = build_tree_star(cfg);
  REQUIRE(net.node_count() == 2);
  REQUIRE(net.link_count() == 1);
  CHECK(net.node(0).kind == NodeKind::Switching);
  CHECK(net.node(1).kind == NodeKind::EdgeCompute);
  for (const auto& n : net.nodes()) {
    CHECK(n.compute_load == 0);
    CHECK(n.switch_load == 0);
  }
  CHECK(net.link(0).load == 0);
  CHECK(net.connected());
}

TEST_CASE("generated topology matches the documented layout counts") {
  // Layout rule: a fanout-f switch tree of the given depth (levels
  // 0..depth), the deepest level acting as access hubs; a ring over the
  // hubs when there are at least two; compute nodes round-robin over the
  // hubs. For depth 2, fanout 2: 1 + 2 + 4 = 7 switches, 4 hubs.
  TopologyConfig cfg;
  cfg.tree_depth = 2;
  cfg.tree_fanout = 2;
  cfg.star_leaves_per_hub = 2;
  cfg.ecn_count = 8;
  const auto net = build_tree_star(cfg);
  const int switches = 7, hubs = 4;
  CHECK(net.node_count() == switches + cfg.ecn_count);
  // tree edges: switches-1; ring edges: hubs; leaf edges: ecn_count
  CHECK(net.link_count() == (switches - 1) + hubs + cfg.ecn_count);
  CHECK(static_cast<int>(net.ecn_ids().size()) == cfg.ecn_count);
  CHECK(static_cast<int>(net.access_node_ids().size()) == hubs);
  CHECK(net.connected());

  SECTION("hub ring can be disabled") {
    TopologyConfig no_ring = cfg;
    no_ring.hub_ring = false;
    const auto tree_only = build_tree_star(no_ring);
    CHECK(tree_only.link_count() == (switches - 1) + cfg.ecn_count);
    CHECK(tree_only.connected());
  }
}

TEST_CASE("default experiment topology carries the configured parameters") {
  const TopologyConfig cfg;  // 15 compute nodes, depth 2, fanout 3
  const auto net = build_tree_star(cfg);
  CHECK(static_cast<int>(net.ecn_ids().size()) == 15);
  for (const auto& l : net.links()) {
    CHECK(l.kind == LinkKind::Optical);
    CHECK(l.bandwidth == 10'000'000'000);
  }
  for (NodeId k : net.ecn_ids()) {
    CHECK(net.node(k).compute_capacity >= 20'000'000'000);
    CHECK(net.node(k).compute_capacity <= 40'000'000'000);
  }
  for (NodeId h : net.access_node_ids()) {
    CHECK(net.node(h).fiwi_hub);
    CHECK(net.node(h).wireless_capacity == 4 * 54'000'000);
  }
  CHECK(net.connected());
}

TEST_CASE("generator is deterministic and seed-sensitive") {
  TopologyConfig cfg;
  const auto a = build_tree_star(cfg);
  const auto b = build_tree_star(cfg);
  CHECK(a.dump() == b.dump());
  CHECK(oracles::networks_identical(a, b));
  cfg.rng_seed = 99;
  const auto c = build_tree_star(cfg);
  CHECK(a.dump() != c.dump());
}

TEST_CASE("generator validates its configuration") {
  TopologyConfig cfg;
  cfg.ecn_count = 0;
  CHECK_THROWS_AS(build_tree_star(cfg), std::invalid_argument);
  cfg = TopologyConfig{};
  cfg.optical_bandwidth = 0;
  CHECK_THROWS_AS(build_tree_star(cfg), std::invalid_argument);
  cfg = TopologyConfig{};
  cfg.ecn_count = 100;  // exceeds hub attachment slots (9 hubs x 2)
  cfg.star_leaves_per_hub = 2;
  CHECK_THROWS_AS(build_tree_star(cfg), std::invalid_argument);
  cfg = TopologyConfig{};
  cfg.compute_capacity_spread = cfg.compute_capacity_mean;  // would allow zero capacity
  CHECK_THROWS_AS(build_tree_star(cfg), std::invalid_argument);
}

TEST_CASE("network dump uses the line-oriented record format") {
  TopologyConfig cfg;
  cfg.ecn_count = 1;
  cfg.tree_depth = 0;
  cfg.star_leaves_per_hub = 1;
  const auto net = build_tree_star(cfg);
  const std::string dump = net.dump();
  CHECK(dump.find("node 0 switch") == 0);
  CHECK(dump.find("node 1 ecn") != std::string::npos);
  CHECK(dump.find("link 0 0 1 optical") != std::string::npos);
}

TEST_CASE("betweenness of a four-leaf star concentrates on the center") {
  PhysicalNetwork net;
  net.add_switching_node(100);  // center = 0
  for (int i = 0; i < 4; ++i) {
    net.add_switching_node(100);
    net.add_link(0, i + 1, LinkKind::Optical, 1'000, 1e-4);
  }
  const auto bc = betweenness_centrality(net);
  CHECK(bc[0] == Catch::Approx(6.0));  // C(4,2) leaf pairs
  for (int i = 1; i <= 4; ++i) CHECK(bc[static_cast<std::size_t>(i)] == Catch::Approx(0.0));
}

TEST_CASE("betweenness of a three-node path") {
  const auto net = path_abc();
  const auto bc = betweenness_centrality(net);
  CHECK(bc[0] == Catch::Approx(0.0));
  CHECK(bc[1] == Catch::Approx(1.0));
  CHECK(bc[2] == Catch::Approx(0.0));
}

TEST_CASE("betweenness matches the pair-counting oracle on random graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = static_cast<int>(rng.uniform_i64(2, 10));
    const auto net = oracles::random_graph(rng, n, 0.35);
    const auto got = betweenness_centrality(net);
    const auto want = oracles::brute_betweenness(net);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == Catch::Approx(want[i]).margin(1e-12));
  }
}

TEST_CASE("hop distances") {
  const auto net = path_abc();
  CHECK(hop_distance(net, 0, 0) == 0);
  CHECK(hop_distance(net, 0, 1) == 1);
  CHECK(hop_distance(net, 0, 2) == 2);
  CHECK(network_diameter(net) == 2);

  SECTION("unreachable pairs are reported distinctly") {
    PhysicalNetwork split;
    split.add_switching_node(10);
    split.add_switching_node(10);
    CHECK_FALSE(hop_distance(split, 0, 1).has_value());
  }

  SECTION("all-pairs table agrees with a fresh BFS") {
    Rng rng(5);
    const auto g = oracles::random_graph(rng, 6, 0.4);
    const auto table = all_pairs_hops(g);
    for (NodeId s = 0; s < g.node_count(); ++s) {
      const auto d = oracles::bfs_dist(g, s);
      for (NodeId t = 0; t < g.node_count(); ++t)
        CHECK(table[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] ==
              d[static_cast<std::size_t>(t)]);
    }
  }
}

TEST_CASE("two-path cycle returns both paths in order") {
  // s(0) - a(1) - t(2), s - b(3) - t, unit costs
  PhysicalNetwork net;
  for (int i = 0; i < 4; ++i) net.add_switching_node(100);
  net.add_link(0, 1, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(1, 2, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(0, 3, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(3, 2, LinkKind::Optical, 1'000, 1e-4);
  const std::vector<double> unit(4, 1.0);
  const auto paths = k_shortest_paths(net, 0, 2, 2, unit);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(paths[1].nodes == std::vector<NodeId>{0, 3, 2});
  CHECK(paths[0].cost == Catch::Approx(2.0));
  CHECK(paths[1].cost == Catch::Approx(2.0));
}

TEST_CASE("line graph yields a single path regardless of k") {
  const auto net = path_abc();
  const std::vector<double> unit(2, 1.0);
  const auto paths = k_shortest_paths(net, 0, 2, 3, unit);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].nodes == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("no route yields an empty result") {
  PhysicalNetwork split;
  split.add_switching_node(10);
  split.add_switching_node(10);
  const std::vector<double> none;
  CHECK(k_shortest_paths(split, 0, 1, 3, none).empty());
}

TEST_CASE("k shortest paths match exhaustive enumeration on random graphs") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = static_cast<int>(rng.uniform_i64(2, 10));
    const auto net = oracles::random_graph(rng, n, 0.35);
    std::vector<double> cost(static_cast<std::size_t>(net.link_count()));
    for (auto& c : cost) c = 0.1 + 1.9 * rng.uniform_real();
    const NodeId src = static_cast<NodeId>(rng.uniform_i64(0, n - 1));
    NodeId dst = static_cast<NodeId>(rng.uniform_i64(0, n - 2));
    if (dst >= src) ++dst;
    const int k = static_cast<int>(rng.uniform_i64(1, 5));
    const auto got = k_shortest_paths(net, src, dst, k, cost);
    const auto want = oracles::brute_ksp(net, src, dst, k, cost);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].nodes == want[i].nodes);
      CHECK(got[i].links == want[i].links);
      CHECK(got[i].cost == Catch::Approx(want[i].cost).margin(1e-12));
    }
  }
}

TEST_CASE("k shortest paths are sorted, loopless, prefix-stable") {
  Rng rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const auto net = oracles::random_graph(rng, 8, 0.4);
    std::vector<double> cost(static_cast<std::size_t>(net.link_count()));
    for (auto& c : cost) c = 0.1 + rng.uniform_real();
    const auto p4 = k_shortest_paths(net, 0, 7, 4, cost);
    const auto p5 = k_shortest_paths(net, 0, 7, 5, cost);
    REQUIRE(p5.size() >= p4.size());
    for (std::size_t i = 0; i < p4.size(); ++i) CHECK(p4[i].nodes == p5[i].nodes);
    for (std::size_t i = 1; i < p4.size(); ++i) CHECK(p4[i - 1].cost <= p4[i].cost + 1e-15);
    for (const auto& p : p4) {
      std::set<NodeId> uniq(p.nodes.begin(), p.nodes.end());
      CHECK(uniq.size() == p.nodes.size());
    }
  }
}

TEST_CASE("widest minimum-hop path prefers residual bandwidth") {
  // Two 2-hop routes 0-1-3 and 0-2-3; the 0-2-3 route has more headroom.
  PhysicalNetwork net;
  for (int i = 0; i < 4; ++i) net.add_switching_node(100);
  const LinkId l01 = net.add_link(0, 1, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(1, 3, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(0, 2, LinkKind::Optical, 1'000, 1e-4);
  net.add_link(2, 3, LinkKind::Optical, 1'000, 1e-4);
  PhysicalNetwork loaded = net;
  loaded.link(l01).load = 800;
  const auto w = widest_min_hop_path(loaded, 0, 3);
  REQUIRE(w.has_value());
  CHECK(w->path.nodes == std::vector<NodeId>{0, 2, 3});
  CHECK(w->bottleneck == 1'000);

  SECTION("ties resolve toward the smaller node id") {
    const auto tie = widest_min_hop_path(net, 0, 3);
    REQUIRE(tie.has_value());
    CHECK(tie->path.nodes == std::vector<NodeId>{0, 1, 3});
  }

  SECTION("all minimum-hop paths are enumerated in order") {
    const auto paths = min_hop_paths(net, 0, 3);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].nodes == std::vector<NodeId>{0, 1, 3});
    CHECK(paths[1].nodes == std::vector<NodeId>{0, 2, 3});
  }
}

TEST_CASE("rng is deterministic and respects bounds") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const auto lo = static_cast<std::int64_t>(i);
    const auto hi = lo + 1 + static_cast<std::int64_t>(i % 7);
    const auto x = a.uniform_i64(lo, hi);
    CHECK(x == b.uniform_i64(lo, hi));
    CHECK(x >= lo);
    CHECK(x <= hi);
    const double r = a.uniform_real();
    CHECK(r == b.uniform_real());
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
  }
}
