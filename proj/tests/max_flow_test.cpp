#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <tuple>
#include <vector>

#include "streamshare/max_flow.hpp"
#include "streamshare/rational.hpp"

using streamshare::Integer;
using streamshare::MaxFlow;

namespace {

using Arc = std::tuple<std::size_t, std::size_t, std::int64_t>;

// Minimum s-t cut by enumerating every vertex subset containing s but not t.
std::int64_t brute_force_min_cut(std::size_t nodes, const std::vector<Arc>& arcs, std::size_t s, std::size_t t) {
  std::int64_t best = -1;
  for (std::uint32_t side = 0; side < (1u << nodes); ++side) {
    if (!(side >> s & 1u) || (side >> t & 1u)) continue;
    std::int64_t cut = 0;
    for (auto [u, v, c] : arcs)
      if ((side >> u & 1u) && !(side >> v & 1u)) cut += c;
    if (best < 0 || cut < best) best = cut;
  }
  return best;
}

}  // namespace

TEST(MaxFlow, TextbookNetwork) {
  MaxFlow<std::int64_t> f(6);
  f.add_edge(0, 1, 16);
  f.add_edge(0, 2, 13);
  f.add_edge(1, 2, 10);
  f.add_edge(2, 1, 4);
  f.add_edge(1, 3, 12);
  f.add_edge(3, 2, 9);
  f.add_edge(2, 4, 14);
  f.add_edge(4, 3, 7);
  f.add_edge(3, 5, 20);
  f.add_edge(4, 5, 4);
  EXPECT_EQ(f.solve(0, 5), 23);
}

TEST(MaxFlow, DisconnectedSinkCarriesNothing) {
  MaxFlow<std::int64_t> f(3);
  f.add_edge(0, 1, 5);
  EXPECT_EQ(f.solve(0, 2), 0);
}

TEST(MaxFlow, EdgeFlowsRespectCapacitiesAndConservation) {
  MaxFlow<Integer> f(4);
  auto a = f.add_edge(0, 1, Integer(3));
  auto b = f.add_edge(0, 2, Integer(2));
  auto c = f.add_edge(1, 3, Integer(2));
  auto d = f.add_edge(2, 3, Integer(3));
  auto e = f.add_edge(1, 2, Integer(1));
  EXPECT_EQ(f.solve(0, 3), 5);
  EXPECT_EQ(f.flow_on(a), f.flow_on(c) + f.flow_on(e));
  EXPECT_EQ(f.flow_on(b) + f.flow_on(e), f.flow_on(d));
  EXPECT_LE(f.flow_on(c), 2);
}

TEST(MaxFlow, MatchesMinCutOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    std::size_t n = 2 + rng() % 6;
    std::vector<Arc> arcs;
    std::size_t count = rng() % (n * n);
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t u = rng() % n, v = rng() % n;
      if (u == v) continue;
      arcs.emplace_back(u, v, static_cast<std::int64_t>(rng() % 10));
    }
    MaxFlow<std::int64_t> f64(n);
    MaxFlow<Integer> fbig(n);
    for (auto [u, v, c] : arcs) {
      f64.add_edge(u, v, c);
      fbig.add_edge(u, v, Integer(static_cast<long>(c)));
    }
    auto expected = brute_force_min_cut(n, arcs, 0, n - 1);
    EXPECT_EQ(f64.solve(0, n - 1), expected);
    EXPECT_EQ(fbig.solve(0, n - 1), Integer(static_cast<long>(expected)));
  }
}
