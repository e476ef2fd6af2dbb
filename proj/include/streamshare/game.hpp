#pragma once

#include <json.hpp>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streamshare/errors.hpp"
#include "streamshare/max_flow.hpp"
#include "streamshare/problem.hpp"
#include "streamshare/rational.hpp"

namespace streamshare {

/// Bit i set <=> player i belongs to the coalition.
using Coalition = std::uint32_t;

inline constexpr std::size_t max_players = 20;

inline std::vector<std::size_t> members(Coalition s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s != 0; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

inline Coalition coalition_of(const std::vector<std::size_t>& players) {
  Coalition s = 0;
  for (auto i : players) s |= Coalition{1} << i;
  return s;
}

/// "{1,2}" using the given player names.
inline std::string coalition_label(const std::vector<std::string>& players, Coalition s) {
  std::string out = "{";
  bool first = true;
  for (auto i : members(s)) {
    if (!first) out += ",";
    out += players[i];
    first = false;
  }
  return out + "}";
}

/// TU game over at most `max_players` players with v(empty) = 0.
class CoalitionalGame {
 public:
  CoalitionalGame(std::vector<std::string> players, RationalVector values)
      : players_(std::move(players)), values_(std::move(values)) {
    if (players_.size() > max_players)
      throw Error(ErrorCode::too_many_players,
                  std::to_string(players_.size()) + " players, limit " + std::to_string(max_players));
    if (values_.size() != (std::size_t{1} << players_.size()))
      throw Error(ErrorCode::dimension_mismatch, "need one value per coalition");
    if (values_[0] != 0) throw Error(ErrorCode::invalid_problem, "v(empty) must be 0");
  }

  std::size_t player_count() const noexcept { return players_.size(); }
  const std::vector<std::string>& players() const noexcept { return players_; }
  const RationalVector& values() const noexcept { return values_; }
  Coalition grand_coalition() const noexcept { return static_cast<Coalition>((std::size_t{1} << players_.size()) - 1); }
  std::size_t coalition_count() const noexcept { return values_.size(); }
  const Rational& operator()(Coalition s) const { return values_[s]; }

  friend bool operator==(const CoalitionalGame& a, const CoalitionalGame& b) {
    return a.players_ == b.players_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> players_;
  RationalVector values_;
};

/// Delta(R) for every coalition R; entry 0 is unused and kept at 0.
struct DividendTable {
  std::vector<std::string> players;
  RationalVector values;

  const Rational& operator()(Coalition r) const { return values[r]; }
  friend bool operator==(const DividendTable& a, const DividendTable& b) {
    return a.players == b.players && a.values == b.values;
  }
};

/// L^j as a coalition.
inline Coalition listened_coalition(const StreamingProblem& p, std::size_t user) {
  return coalition_of(listened_set(p, user));
}

/// v(S) = fee * |{j : L^j subset of S}|
inline CoalitionalGame streaming_game(const StreamingProblem& p) {
  if (p.artist_count() > max_players)
    throw Error(ErrorCode::too_many_players,
                std::to_string(p.artist_count()) + " artists, limit " + std::to_string(max_players));
  std::vector<Coalition> lists(p.user_count());
  for (std::size_t j = 0; j < p.user_count(); ++j) lists[j] = listened_coalition(p, j);
  const std::size_t count = std::size_t{1} << p.artist_count();
  RationalVector v(count);
  for (std::size_t s = 0; s < count; ++s) {
    unsigned long inside = 0;
    for (auto l : lists)
      if ((l & ~static_cast<Coalition>(s)) == 0) ++inside;
    v[s] = p.fee() * Rational(inside);
  }
  return CoalitionalGame(p.artists(), std::move(v));
}

struct SupermodularityResult {
  bool supermodular = true;
  /// On failure: v(S+i) - v(S) > v(T+i) - v(T) with S subset of T, i outside T.
  Coalition smaller = 0;
  Coalition larger = 0;
  std::size_t player = 0;

  explicit operator bool() const noexcept { return supermodular; }
};

/// Exhaustive over the adjacent pairs T = S + {k}; supermodularity over all
/// S subset of T follows by chaining, and any reported pair is a witness of
/// the general definition.
inline SupermodularityResult is_supermodular(const CoalitionalGame& v) {
  const std::size_t n = v.player_count();
  for (Coalition s = 0; s < v.coalition_count(); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      Coalition bi = Coalition{1} << i;
      if (s & bi) continue;
      Rational gain_small = v(s | bi) - v(s);
      for (std::size_t k = 0; k < n; ++k) {
        Coalition bk = Coalition{1} << k;
        if (k == i || (s & bk)) continue;
        Rational gain_large = v(s | bk | bi) - v(s | bk);
        if (gain_small > gain_large) return {false, s, s | bk, i};
      }
    }
  }
  return {};
}

/// Moebius inversion: Delta(R) = sum_{S subset of R} (-1)^{|R|-|S|} v(S).
inline DividendTable harsanyi_dividends(const CoalitionalGame& v) {
  RationalVector d = v.values();
  for (std::size_t i = 0; i < v.player_count(); ++i) {
    Coalition bi = Coalition{1} << i;
    for (Coalition s = 0; s < d.size(); ++s)
      if (s & bi) d[s] -= d[s ^ bi];
  }
  return {v.players(), std::move(d)};
}

/// v(S) = sum_{nonempty R subset of S} Delta(R)
inline CoalitionalGame reconstruct_from_dividends(const DividendTable& dividends,
                                                  const std::vector<std::string>& players) {
  if (dividends.values.size() != (std::size_t{1} << players.size()))
    throw Error(ErrorCode::dimension_mismatch, "dividend table does not match player count");
  RationalVector v = dividends.values;
  v[0] = 0;
  for (std::size_t i = 0; i < players.size(); ++i) {
    Coalition bi = Coalition{1} << i;
    for (Coalition s = 0; s < v.size(); ++s)
      if (s & bi) v[s] += v[s ^ bi];
  }
  return CoalitionalGame(players, std::move(v));
}

struct CoreCheck {
  bool member = false;
  bool efficient = false;
  /// Numerically smallest S with x(S) < v(S), if any.
  std::optional<Coalition> blocking;

  explicit operator bool() const noexcept { return member; }
};

/// Enumerates every coalition. Reference oracle; bounded by `max_players`.
inline CoreCheck in_core_direct(const CoalitionalGame& v, const RationalVector& x) {
  if (x.size() != v.player_count())
    throw Error(ErrorCode::dimension_mismatch, "allocation length differs from player count");
  RationalVector partial(v.coalition_count());
  partial[0] = 0;
  CoreCheck out;
  for (Coalition s = 1; s < v.coalition_count(); ++s) {
    auto low = static_cast<std::size_t>(std::countr_zero(s));
    partial[s] = partial[s & (s - 1)] + x[low];
    if (!out.blocking && partial[s] < v(s)) out.blocking = s;
  }
  out.efficient = partial[v.grand_coalition()] == v(v.grand_coalition());
  out.member = out.efficient && !out.blocking;
  return out;
}

/// Per-user splits x^j of the fee over L^j, summing to the allocation.
struct CoreDecomposition {
  std::vector<std::string> users;
  /// shares[j][i] = x^j_i
  std::vector<RationalVector> shares;
};

/// Checks every structural requirement of a decomposition against `x`.
inline bool is_valid_decomposition(const StreamingProblem& p, const RationalVector& x,
                                   const CoreDecomposition& d) {
  if (d.shares.size() != p.user_count() || x.size() != p.artist_count()) return false;
  RationalVector total(p.artist_count(), Rational(0));
  for (std::size_t j = 0; j < p.user_count(); ++j) {
    const auto& xj = d.shares[j];
    if (xj.size() != p.artist_count()) return false;
    Rational paid = 0;
    for (std::size_t i = 0; i < p.artist_count(); ++i) {
      if (sgn(xj[i]) < 0) return false;
      if (p(i, j) == 0 && xj[i] != 0) return false;
      paid += xj[i];
      total[i] += xj[i];
    }
    if (paid != p.fee()) return false;
  }
  return total == x;
}

struct CoreFlowResult {
  bool member = false;
  std::optional<CoreDecomposition> decomposition;

  explicit operator bool() const noexcept { return member; }
};

/// Core membership as transportation feasibility: source -> user (fee),
/// user -> artist where t_ij > 0, artist -> sink (x_i). Capacities are scaled
/// to integers by the least common denominator. No limit on the player count.
inline CoreFlowResult in_core_flow(const StreamingProblem& p, const RationalVector& x) {
  if (x.size() != p.artist_count())
    throw Error(ErrorCode::dimension_mismatch, "allocation length differs from artist count");
  for (const auto& xi : x)
    if (sgn(xi) < 0) return {};
  if (sum(x) != p.revenue()) return {};

  const std::size_t n = p.artist_count();
  const std::size_t m = p.user_count();
  RationalVector all = x;
  all.push_back(p.fee());
  Rational scale(lcm_of_denominators(all));

  auto to_integer = [&](const Rational& q) {
    Rational scaled = q * scale;
    scaled.canonicalize();
    return Integer(scaled.get_num());
  };
  const Integer fee_units = to_integer(p.fee());

  const std::size_t source = 0, sink = 1;
  auto user_node = [](std::size_t j) { return 2 + j; };
  auto artist_node = [m](std::size_t i) { return 2 + m + i; };
  MaxFlow<Integer> flow(2 + m + n);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> share_edges(m);
  for (std::size_t j = 0; j < m; ++j) {
    flow.add_edge(source, user_node(j), fee_units);
    for (std::size_t i = 0; i < n; ++i)
      if (p(i, j) > 0) share_edges[j].push_back({i, flow.add_edge(user_node(j), artist_node(i), fee_units).second});
  }
  for (std::size_t i = 0; i < n; ++i) flow.add_edge(artist_node(i), sink, to_integer(x[i]));

  Integer routed = flow.solve(source, sink);
  if (routed != fee_units * Integer(static_cast<unsigned long>(m))) return {};

  CoreDecomposition d;
  d.users = p.users();
  d.shares.assign(m, RationalVector(n, Rational(0)));
  for (std::size_t j = 0; j < m; ++j)
    for (auto [i, edge] : share_edges[j]) {
      Rational share(flow.flow_on({user_node(j), edge}), Integer(scale.get_num()));
      share.canonicalize();
      d.shares[j][i] = share;
    }
  return {true, std::move(d)};
}

inline CoreDecomposition extract_decomposition(const StreamingProblem& p, const RationalVector& x) {
  auto result = in_core_flow(p, x);
  if (!result.member) throw Error(ErrorCode::not_in_core, "allocation is not in the core");
  return std::move(*result.decomposition);
}

/// P*: at least three users and no user has listened to every artist.
inline bool in_domain_Pstar(const StreamingProblem& p) {
  if (p.user_count() < 3) return false;
  for (std::size_t j = 0; j < p.user_count(); ++j)
    if (listened_set(p, j).size() == p.artist_count()) return false;
  return true;
}

/// Coalition key for JSON maps: member ids in player order joined by ','.
inline std::string coalition_key(const std::vector<std::string>& players, Coalition s) {
  std::string out;
  for (auto i : members(s)) {
    if (!out.empty()) out += ",";
    out += players[i];
  }
  return out;
}

inline nlohmann::json game_to_json(const CoalitionalGame& v) {
  nlohmann::json values = nlohmann::json::object();
  for (Coalition s = 0; s < v.coalition_count(); ++s) values[coalition_key(v.players(), s)] = to_string(v(s));
  return {{"players", v.players()}, {"values", values}};
}

inline nlohmann::json dividends_to_json(const DividendTable& d) {
  nlohmann::json values = nlohmann::json::object();
  for (Coalition s = 1; s < d.values.size(); ++s) values[coalition_key(d.players, s)] = to_string(d(s));
  return {{"players", d.players}, {"dividends", values}};
}

inline nlohmann::json decomposition_to_json(const CoreDecomposition& d) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t j = 0; j < d.users.size(); ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& q : d.shares[j]) row.push_back(to_string(q));
    out[d.users[j]] = row;
  }
  return out;
}

}  // namespace streamshare
