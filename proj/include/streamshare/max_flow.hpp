#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace streamshare {

/// Dinic's algorithm: repeated shortest-path (BFS level graph) augmentation.
/// `Capacity` must be an exact integer-like type (int64_t, mpz_class, ...).
template <typename Capacity>
class MaxFlow {
 public:
  struct Edge {
    std::size_t to;
    std::size_t rev;
    Capacity cap;
    Capacity original;
  };

  explicit MaxFlow(std::size_t nodes) : graph_(nodes), level_(nodes), next_(nodes) {}

  std::size_t node_count() const noexcept { return graph_.size(); }

  /// Returns a handle usable with flow_on().
  std::pair<std::size_t, std::size_t> add_edge(std::size_t from, std::size_t to, const Capacity& cap) {
    graph_[from].push_back(Edge{to, graph_[to].size() + (from == to ? 1 : 0), cap, cap});
    graph_[to].push_back(Edge{from, graph_[from].size() - 1, Capacity(0), Capacity(0)});
    return {from, graph_[from].size() - 1};
  }

  Capacity flow_on(std::pair<std::size_t, std::size_t> handle) const {
    const Edge& e = graph_[handle.first][handle.second];
    return e.original - e.cap;
  }

  Capacity solve(std::size_t source, std::size_t sink) {
    Capacity total(0);
    while (build_levels(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      for (;;) {
        Capacity pushed = augment(source, sink, Capacity(0), true);
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

 private:
  bool build_levels(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), npos);
    std::queue<std::size_t> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (const auto& e : graph_[u]) {
        if (e.cap > 0 && level_[e.to] == npos) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[sink] != npos;
  }

  // `unbounded` stands in for an infinite limit at the source.
  Capacity augment(std::size_t u, std::size_t sink, const Capacity& limit, bool unbounded) {
    if (u == sink) return limit;
    for (auto& k = next_[u]; k < graph_[u].size(); ++k) {
      Edge& e = graph_[u][k];
      if (e.cap > 0 && level_[e.to] == level_[u] + 1) {
        Capacity room = (unbounded || e.cap < limit) ? e.cap : limit;
        Capacity pushed = augment(e.to, sink, room, false);
        if (pushed > 0) {
          e.cap -= pushed;
          graph_[e.to][e.rev].cap += pushed;
          return pushed;
        }
      }
    }
    return Capacity(0);
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::size_t> level_;
  std::vector<std::size_t> next_;
};

}  // namespace streamshare
