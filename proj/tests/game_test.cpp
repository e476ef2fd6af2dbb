#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace streamshare;
using namespace streamshare::testing;

namespace {

// Delta(R) = sum over S subset of R of (-1)^{|R|-|S|} v(S), term by term.
RationalVector moebius_by_definition(const CoalitionalGame& v) {
  RationalVector d(v.coalition_count(), Rational(0));
  for (Coalition r = 1; r < v.coalition_count(); ++r) {
    for (Coalition s = r;; s = (s - 1) & r) {
      int parity = std::popcount(r) - std::popcount(s);
      if (parity % 2 == 0)
        d[r] += v(s);
      else
        d[r] -= v(s);
      if (s == 0) break;
    }
  }
  return d;
}

// Every S subset of T and i outside T.
bool supermodular_by_definition(const CoalitionalGame& v) {
  for (Coalition t = 0; t < v.coalition_count(); ++t)
    for (Coalition s = t;; s = (s - 1) & t) {
      for (std::size_t i = 0; i < v.player_count(); ++i) {
        Coalition bi = Coalition{1} << i;
        if (t & bi) continue;
        if (v(s | bi) - v(s) > v(t | bi) - v(t)) return false;
      }
      if (s == 0) break;
    }
  return true;
}

// Random per-user splits of the fee over each listened set.
RationalVector random_core_point(const StreamingProblem& p, std::mt19937_64& rng) {
  RationalVector x(p.artist_count(), Rational(0));
  for (std::size_t j = 0; j < p.user_count(); ++j) {
    auto l = listened_set(p, j);
    std::vector<unsigned long> w(l.size());
    unsigned long total = 0;
    for (auto& wk : w) total += (wk = rng() % 5);
    if (total == 0) {
      w[0] = 1;
      total = 1;
    }
    for (std::size_t k = 0; k < l.size(); ++k) x[l[k]] += p.fee() * Rational(w[k]) / Rational(total);
  }
  for (auto& xi : x) xi.canonicalize();
  return x;
}

}  // namespace

TEST(StreamingGame, ExampleOne) {
  auto v = streaming_game(example_one());
  EXPECT_EQ(v(0b00), 0);
  EXPECT_EQ(v(0b01), 1);
  EXPECT_EQ(v(0b10), 1);
  EXPECT_EQ(v(0b11), 2);
}

TEST(StreamingGame, ThreeUserExample) {
  // L^a = {1}, L^b = {2}, L^c = {1,2}
  auto v = streaming_game(example_three_users());
  EXPECT_EQ(v(0b01), 1);
  EXPECT_EQ(v(0b10), 1);
  EXPECT_EQ(v(0b11), 3);
}

TEST(StreamingGame, EveryoneListensToEveryone) {
  StreamingProblem dense({"1", "2", "3"}, {"a", "b"}, {{1, 2}, {3, 4}, {5, 6}});
  auto v = streaming_game(dense);
  for (Coalition s = 0; s < v.grand_coalition(); ++s) EXPECT_EQ(v(s), 0);
  EXPECT_EQ(v(v.grand_coalition()), 2);
}

TEST(StreamingGame, FeeScalesValues) {
  StreamingProblem p({"1", "2"}, {"a", "b"}, {{10, 0}, {0, 90}}, Rational(5, 2));
  EXPECT_EQ(streaming_game(p)(0b11), 5);
}

TEST(StreamingGame, TooManyPlayers) {
  std::vector<std::string> artists;
  StreamMatrix t;
  for (int i = 0; i < 21; ++i) {
    artists.push_back(std::to_string(i));
    t.push_back({1});
  }
  try {
    streaming_game(StreamingProblem(artists, {"a"}, t));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::too_many_players);
  }
}

TEST(Supermodular, HandBuiltGames) {
  CoalitionalGame sub({"1", "2"}, qs({"0", "1", "1", "1"}));
  auto r = is_supermodular(sub);
  EXPECT_FALSE(r.supermodular);
  EXPECT_GT(sub(r.smaller | (Coalition{1} << r.player)) - sub(r.smaller),
            sub(r.larger | (Coalition{1} << r.player)) - sub(r.larger));
  EXPECT_EQ(r.smaller & ~r.larger, 0u);

  CoalitionalGame additive({"1", "2", "3"}, qs({"0", "1", "1", "2", "1", "2", "2", "3"}));
  EXPECT_TRUE(is_supermodular(additive).supermodular);
  EXPECT_TRUE(is_supermodular(streaming_game(example_three_users())).supermodular);
}

TEST(Supermodular, AgreesWithDefinitionOnRandomGames) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    std::size_t n = 1 + rng() % 4;
    RationalVector values(std::size_t{1} << n);
    values[0] = 0;
    for (std::size_t s = 1; s < values.size(); ++s) values[s] = Rational(static_cast<long>(rng() % 7));
    std::vector<std::string> players;
    for (std::size_t i = 0; i < n; ++i) players.push_back(std::to_string(i + 1));
    CoalitionalGame v(players, values);
    EXPECT_EQ(is_supermodular(v).supermodular, supermodular_by_definition(v));
  }
}

TEST(Dividends, Goldens) {
  auto d = harsanyi_dividends(streaming_game(example_one()));
  auto expected = moebius_by_definition(streaming_game(example_one()));
  EXPECT_EQ(d.values, expected);
  EXPECT_EQ(d(0b01), 1);
  EXPECT_EQ(d(0b10), 1);
  EXPECT_EQ(d(0b11), 0);

  // unanimity game u_{1,3} over three players
  RationalVector u(8, Rational(0));
  for (Coalition s = 0; s < 8; ++s)
    if ((s & 0b101u) == 0b101u) u[s] = 1;
  auto du = harsanyi_dividends(CoalitionalGame({"1", "2", "3"}, u));
  for (Coalition r = 1; r < 8; ++r) EXPECT_EQ(du(r), r == 0b101u ? 1 : 0);
}

TEST(Dividends, ReconstructGoldens) {
  std::vector<std::string> two = {"1", "2"};
  DividendTable singles{two, qs({"0", "1", "1", "0"})};
  EXPECT_EQ(reconstruct_from_dividends(singles, two), streaming_game(example_one()));
  DividendTable zero{two, qs({"0", "0", "0", "0"})};
  EXPECT_EQ(reconstruct_from_dividends(zero, two).values(), qs({"0", "0", "0", "0"}));
  DividendTable top{two, qs({"0", "0", "0", "1"})};
  EXPECT_EQ(reconstruct_from_dividends(top, two).values(), qs({"0", "0", "0", "1"}));
}

TEST(Dividends, StreamingGamesCountListenedSets) {
  ProblemGenerator gen(small_config(41));
  for (int k = 0; k < 300; ++k) {
    auto p = gen.next();
    auto v = streaming_game(p);
    auto d = harsanyi_dividends(v);
    EXPECT_EQ(d.values, moebius_by_definition(v));
    for (Coalition r = 1; r < v.coalition_count(); ++r) {
      unsigned long count = 0;
      for (std::size_t j = 0; j < p.user_count(); ++j) count += listened_coalition(p, j) == r ? 1 : 0;
      EXPECT_EQ(d(r), p.fee() * Rational(count));
      EXPECT_GE(sgn(d(r)), 0);
    }
    EXPECT_EQ(reconstruct_from_dividends(d, v.players()), v);
    EXPECT_TRUE(is_supermodular(v).supermodular);
    EXPECT_EQ(v(v.grand_coalition()), p.revenue());
    for (Coalition s = 0; s < v.coalition_count(); ++s)
      for (std::size_t i = 0; i < v.player_count(); ++i) EXPECT_LE(v(s), v(s | (Coalition{1} << i)));
  }
}

TEST(CoreDirect, ExampleOne) {
  auto v = streaming_game(example_one());
  EXPECT_TRUE(in_core_direct(v, qs({"1", "1"})).member);
  auto blocked = in_core_direct(v, qs({"1/5", "9/5"}));
  EXPECT_FALSE(blocked.member);
  ASSERT_TRUE(blocked.blocking.has_value());
  EXPECT_EQ(*blocked.blocking, 0b01u);
  auto wrong_total = in_core_direct(v, qs({"1", "2"}));
  EXPECT_FALSE(wrong_total.member);
  EXPECT_FALSE(wrong_total.efficient);
}

TEST(CoreFlow, ExampleOneDecompositions) {
  auto ex1 = example_one();
  auto member = in_core_flow(ex1, qs({"1", "1"}));
  ASSERT_TRUE(member.member);
  EXPECT_EQ(member.decomposition->shares[0], qs({"1", "0"}));
  EXPECT_EQ(member.decomposition->shares[1], qs({"0", "1"}));
  EXPECT_FALSE(in_core_flow(ex1, qs({"1/5", "9/5"})).member);
  EXPECT_FALSE(in_core_flow(ex1, qs({"-1", "3"})).member);
  EXPECT_FALSE(in_core_flow(ex1, qs({"1", "2"})).member);
}

TEST(CoreFlow, ThreeUserUserCentricAllocation) {
  auto ex3 = example_three_users();
  auto x = qs({"9/8", "15/8"});
  // x^a = (1,0), x^b = (0,1), x^c = (5/40, 35/40) built from the definition of U
  CoreDecomposition by_hand{ex3.users(), {qs({"1", "0"}), qs({"0", "1"}), qs({"1/8", "7/8"})}};
  EXPECT_TRUE(is_valid_decomposition(ex3, x, by_hand));
  auto r = in_core_flow(ex3, x);
  ASSERT_TRUE(r.member);
  EXPECT_TRUE(is_valid_decomposition(ex3, x, *r.decomposition));
}

TEST(ExtractDecomposition, ValidOrNotInCore) {
  auto ex1 = example_one();
  auto d = extract_decomposition(ex1, qs({"1", "1"}));
  EXPECT_EQ(d.shares[0], qs({"1", "0"}));
  EXPECT_EQ(d.shares[1], qs({"0", "1"}));
  try {
    extract_decomposition(ex1, qs({"1/5", "9/5"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_in_core);
  }
}

TEST(CoreOracles, AgreeAndDecompositionsAreValid) {
  ProblemGenerator gen(small_config(43));
  std::mt19937_64 rng(43);
  for (int k = 0; k < 200; ++k) {
    auto p = gen.next();
    auto v = streaming_game(p);
    auto u = user_centric_index(p).scores;
    auto r = in_core_flow(p, u);
    ASSERT_TRUE(r.member);
    EXPECT_TRUE(is_valid_decomposition(p, u, *r.decomposition));

    auto x = random_core_point(p, rng);
    EXPECT_TRUE(in_core_direct(v, x).member);
    EXPECT_TRUE(in_core_flow(p, x).member);

    auto y = x;
    std::size_t a = rng() % y.size(), b = rng() % y.size();
    Rational delta(1, 1 + static_cast<unsigned long>(rng() % 4));
    y[a] -= delta;
    y[b] += delta;
    EXPECT_EQ(in_core_direct(v, y).member, in_core_flow(p, y).member);

    // common rescaling of fee and allocation
    Rational c(3, 2);
    StreamingProblem scaled(p.artists(), p.users(), p.streams(), p.fee() * c);
    RationalVector ys;
    for (const auto& yi : y) ys.push_back(yi * c);
    EXPECT_EQ(in_core_flow(scaled, ys).member, in_core_flow(p, y).member);
  }
}

TEST(CoreFlow, HandlesMoreThanTwentyArtists) {
  std::vector<std::string> artists;
  StreamMatrix t;
  for (int i = 0; i < 25; ++i) {
    artists.push_back(std::to_string(i + 1));
    t.push_back({1, static_cast<StreamCount>(i % 2)});
  }
  StreamingProblem p(artists, {"a", "b"}, t);
  EXPECT_TRUE(in_core_flow(p, user_centric_index(p).scores).member);
  EXPECT_TRUE(in_core_flow(p, rewards(p, pro_rata_index(p)).payouts).member);
  // user b's fee must reach the odd artists, who get nothing here
  RationalVector evens(25, Rational(0));
  for (std::size_t i = 0; i < 25; i += 2) evens[i] = Rational(2, 13);
  EXPECT_FALSE(in_core_flow(p, evens).member);
}

TEST(DomainPstar, Definition) {
  EXPECT_FALSE(in_domain_Pstar(example_one()));
  EXPECT_FALSE(in_domain_Pstar(example_three_users()));
  EXPECT_TRUE(in_domain_Pstar(diagonal(3)));
}

TEST(GameJson, KeysAreMemberLists) {
  auto j = game_to_json(streaming_game(example_one()));
  EXPECT_EQ(j["values"]["1,2"], "2");
  EXPECT_EQ(j["values"][""], "0");
  auto d = dividends_to_json(harsanyi_dividends(streaming_game(example_one())));
  EXPECT_EQ(d["dividends"]["1"], "1");
  EXPECT_EQ(d["dividends"]["1,2"], "0");
}
