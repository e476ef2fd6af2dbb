#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamshare/errors.hpp"
#include "streamshare/game.hpp"
#include "streamshare/indices.hpp"
#include "streamshare/io.hpp"
#include "streamshare/problem.hpp"
#include "streamshare/rational.hpp"

namespace streamshare {

enum class Axiom {
  homogeneity,
  additivity,
  equal_individual_impact,
  equal_global_impact,
  reasonable_lower_bound,
  click_fraud_proofness,
  core_selection,
};

inline constexpr Axiom all_axioms[] = {Axiom::homogeneity,           Axiom::additivity,
                                       Axiom::equal_individual_impact, Axiom::equal_global_impact,
                                       Axiom::reasonable_lower_bound,  Axiom::click_fraud_proofness,
                                       Axiom::core_selection};

inline std::string_view name_of(Axiom a) {
  switch (a) {
    case Axiom::homogeneity: return "homogeneity";
    case Axiom::additivity: return "additivity";
    case Axiom::equal_individual_impact: return "equal-individual-impact";
    case Axiom::equal_global_impact: return "equal-global-impact";
    case Axiom::reasonable_lower_bound: return "reasonable-lower-bound";
    case Axiom::click_fraud_proofness: return "click-fraud";
    case Axiom::core_selection: return "core-selection";
  }
  return "?";
}

inline std::optional<Axiom> parse_axiom(std::string_view name) {
  for (auto a : all_axioms)
    if (name == name_of(a)) return a;
  if (name == "hom") return Axiom::homogeneity;
  if (name == "add") return Axiom::additivity;
  if (name == "eii") return Axiom::equal_individual_impact;
  if (name == "egi") return Axiom::equal_global_impact;
  if (name == "rlb") return Axiom::reasonable_lower_bound;
  if (name == "click-fraud-proofness") return Axiom::click_fraud_proofness;
  return std::nullopt;
}

enum class Status { pass, fail, not_applicable };

inline std::string_view name_of(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "n/a";
  }
  return "?";
}

/// Everything needed to re-evaluate a violated axiom. `lhs` and `rhs` are the
/// two sides of the defining (in)equality as computed on the witness.
struct Witness {
  StreamingProblem problem;
  /// Click-fraud: the perturbed problem.
  std::optional<StreamingProblem> other;
  std::vector<std::size_t> artists;
  /// j, j' (impact axioms), C (lower bound), M^1 (additivity), j (click-fraud).
  std::vector<std::size_t> users;
  std::optional<Rational> lambda;
  Rational lhs;
  Rational rhs;
  std::string relation;
};

struct AxiomVerdict {
  Axiom axiom = Axiom::homogeneity;
  std::string index;
  Status status = Status::not_applicable;
  std::optional<Witness> witness;
  /// Problems examined and premise-satisfying cases evaluated.
  std::size_t instances = 0;
  std::size_t cases = 0;

  bool passed() const noexcept { return status == Status::pass; }
  bool failed() const noexcept { return status == Status::fail; }
};

namespace detail {

inline AxiomVerdict verdict(Axiom axiom, const Index& index, bool ok, std::optional<Witness> w = std::nullopt) {
  AxiomVerdict v;
  v.axiom = axiom;
  v.index = index.name;
  v.status = ok ? Status::pass : Status::fail;
  if (!ok) v.witness = std::move(w);
  v.instances = 1;
  v.cases = 1;
  return v;
}

inline Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

}  // namespace detail

/// Premise: t_ij = lambda t_i'j for every user j. Pass iff I_i = lambda I_i'.
inline AxiomVerdict check_homogeneity(const Index& index, const StreamingProblem& p, std::size_t i,
                                      std::size_t i2, const Rational& lambda) {
  if (i >= p.artist_count() || i2 >= p.artist_count()) throw Error(ErrorCode::unknown_artist, "artist index out of range");
  if (sgn(lambda) < 0) throw Error(ErrorCode::premise_violated, "lambda must be nonnegative");
  for (std::size_t j = 0; j < p.user_count(); ++j)
    if (Rational(p(i, j)) != lambda * Rational(p(i2, j)))
      throw Error(ErrorCode::premise_violated, "row " + p.artists()[i] + " is not " + to_string(lambda) +
                                                   " times row " + p.artists()[i2] + " at user " + p.users()[j]);
  auto values = index(p);
  Rational lhs = values[i];
  Rational rhs = lambda * values[i2];
  rhs.canonicalize();
  bool ok = lhs == rhs;
  return detail::verdict(Axiom::homogeneity, index, ok,
                         Witness{p, std::nullopt, {i, i2}, {}, lambda, lhs, rhs, "I_i = lambda * I_i'"});
}

/// `first_part` lists the users of M^1; the rest form M^2. Pass iff the index
/// of the whole problem is the sum of the indices of the parts.
inline AxiomVerdict check_additivity(const Index& index, const StreamingProblem& p,
                                     const std::vector<std::size_t>& first_part) {
  std::vector<bool> in_first(p.user_count(), false);
  for (auto j : first_part) {
    if (j >= p.user_count() || in_first[j]) throw Error(ErrorCode::invalid_partition, "bad or repeated user index");
    in_first[j] = true;
  }
  std::vector<std::size_t> a, b;
  for (std::size_t j = 0; j < p.user_count(); ++j) (in_first[j] ? a : b).push_back(j);
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_partition, "both parts must be nonempty");

  auto whole = index(p);
  auto left = index(restrict_users(p, a));
  auto right = index(restrict_users(p, b));
  for (std::size_t i = 0; i < p.artist_count(); ++i) {
    Rational parts = left[i] + right[i];
    parts.canonicalize();
    if (whole[i] != parts)
      return detail::verdict(Axiom::additivity, index, false,
                             Witness{p, std::nullopt, {i}, a, std::nullopt, whole[i], parts,
                                     "I_i(M) = I_i(M1) + I_i(M2)"});
  }
  return detail::verdict(Axiom::additivity, index, true);
}

/// Premise: t_ij = t_ij'. Pass iff I_i(M \ {j}) = I_i(M \ {j'}).
inline AxiomVerdict check_equal_individual_impact(const Index& index, const StreamingProblem& p, std::size_t i,
                                                  std::size_t j, std::size_t j2) {
  if (i >= p.artist_count()) throw Error(ErrorCode::unknown_artist, "artist index out of range");
  if (j >= p.user_count() || j2 >= p.user_count()) throw Error(ErrorCode::unknown_user, "user index out of range");
  if (j == j2 || p(i, j) != p(i, j2))
    throw Error(ErrorCode::premise_violated, "need two distinct users with equal streams of " + p.artists()[i]);
  Rational lhs = index(remove_user(p, j))[i];
  Rational rhs = index(remove_user(p, j2))[i];
  return detail::verdict(Axiom::equal_individual_impact, index, lhs == rhs,
                         Witness{p, std::nullopt, {i}, {j, j2}, std::nullopt, lhs, rhs,
                                 "I_i(M - j) = I_i(M - j')"});
}

/// Pass iff sum_i I_i(M \ {j}) = sum_i I_i(M \ {j'}).
inline AxiomVerdict check_equal_global_impact(const Index& index, const StreamingProblem& p, std::size_t j,
                                              std::size_t j2) {
  if (j >= p.user_count() || j2 >= p.user_count()) throw Error(ErrorCode::unknown_user, "user index out of range");
  Rational lhs = index(remove_user(p, j)).total();
  Rational rhs = index(remove_user(p, j2)).total();
  return detail::verdict(Axiom::equal_global_impact, index, lhs == rhs,
                         Witness{p, std::nullopt, {}, {j, j2}, std::nullopt, lhs, rhs,
                                 "sum I(M - j) = sum I(M - j')"});
}

/// Pass iff the artists listened to by the users in C receive at least the
/// fees paid by C: sum_{i in L^C} R_i >= fee |C|.
inline AxiomVerdict check_reasonable_lower_bound(const Index& index, const StreamingProblem& p,
                                                 const std::vector<std::size_t>& group) {
  if (group.empty()) throw Error(ErrorCode::invalid_partition, "C must be nonempty");
  std::vector<bool> covered(p.artist_count(), false), seen(p.user_count(), false);
  for (auto j : group) {
    if (j >= p.user_count() || seen[j]) throw Error(ErrorCode::invalid_partition, "bad or repeated user index");
    seen[j] = true;
    for (auto i : listened_set(p, j)) covered[i] = true;
  }
  auto r = rewards(p, index(p));
  Rational lhs = 0;
  std::vector<std::size_t> listened;
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    if (covered[i]) {
      lhs += r[i];
      listened.push_back(i);
    }
  Rational rhs = p.fee() * Rational(static_cast<unsigned long>(group.size()));
  return detail::verdict(Axiom::reasonable_lower_bound, index, lhs >= rhs,
                         Witness{p, std::nullopt, listened, group, std::nullopt, lhs, rhs,
                                 "sum_{i in L^C} R_i >= fee |C|"});
}

/// Premise: `p` and `perturbed` differ at most in column `user`. Pass iff no
/// artist's reward moves by more than the fee.
inline AxiomVerdict check_click_fraud_proofness(const Index& index, const StreamingProblem& p,
                                                const StreamingProblem& perturbed, std::size_t user) {
  if (p.artists() != perturbed.artists() || p.users() != perturbed.users() || p.fee() != perturbed.fee())
    throw Error(ErrorCode::premise_violated, "problems must share artists, users and fee");
  if (user >= p.user_count()) throw Error(ErrorCode::unknown_user, "user index out of range");
  for (std::size_t j = 0; j < p.user_count(); ++j) {
    if (j == user) continue;
    for (std::size_t i = 0; i < p.artist_count(); ++i)
      if (p(i, j) != perturbed(i, j))
        throw Error(ErrorCode::premise_violated, "column of user " + p.users()[j] + " also differs");
  }
  auto before = rewards(p, index(p));
  auto after = rewards(perturbed, index(perturbed));
  std::size_t worst = 0;
  Rational gap = -1;
  for (std::size_t i = 0; i < p.artist_count(); ++i) {
    Rational d = detail::abs(before[i] - after[i]);
    if (d > gap) {
      gap = d;
      worst = i;
    }
  }
  return detail::verdict(Axiom::click_fraud_proofness, index, gap <= p.fee(),
                         Witness{p, perturbed, {worst}, {user}, std::nullopt, gap, p.fee(),
                                 "|R_i(t) - R_i(t')| <= fee"});
}

/// Pass iff the rewards lie in the core of the streaming game. The witness
/// carries the smallest blocking coalition with lhs = x(S), rhs = v(S).
inline AxiomVerdict check_core_selection(const Index& index, const StreamingProblem& p) {
  auto r = rewards(p, index(p));
  if (p.artist_count() > max_players) return detail::verdict(Axiom::core_selection, index, in_core_flow(p, r.payouts).member);
  auto game = streaming_game(p);
  auto check = in_core_direct(game, r.payouts);
  if (check.member) return detail::verdict(Axiom::core_selection, index, true);
  Coalition s = check.blocking.value_or(game.grand_coalition());
  Rational lhs = 0;
  for (auto i : members(s)) lhs += r[i];
  return detail::verdict(Axiom::core_selection, index, false,
                         Witness{p, std::nullopt, members(s), {}, std::nullopt, lhs, game(s), "x(S) >= v(S)"});
}

/// Re-evaluates the axiom on a failing verdict's witness and confirms the
/// same violation with the same quantities.
inline bool reproduces_violation(const Index& index, const AxiomVerdict& v) {
  if (!v.failed() || !v.witness) return false;
  const Witness& w = *v.witness;
  AxiomVerdict again;
  switch (v.axiom) {
    case Axiom::homogeneity: again = check_homogeneity(index, w.problem, w.artists.at(0), w.artists.at(1), *w.lambda); break;
    case Axiom::additivity: again = check_additivity(index, w.problem, w.users); break;
    case Axiom::equal_individual_impact:
      again = check_equal_individual_impact(index, w.problem, w.artists.at(0), w.users.at(0), w.users.at(1));
      break;
    case Axiom::equal_global_impact: again = check_equal_global_impact(index, w.problem, w.users.at(0), w.users.at(1)); break;
    case Axiom::reasonable_lower_bound: again = check_reasonable_lower_bound(index, w.problem, w.users); break;
    case Axiom::click_fraud_proofness: again = check_click_fraud_proofness(index, w.problem, *w.other, w.users.at(0)); break;
    case Axiom::core_selection: again = check_core_selection(index, w.problem); break;
  }
  return again.failed() && again.witness && again.witness->lhs == w.lhs && again.witness->rhs == w.rhs;
}

/// Bounds for random problems. Cells are zero with probability `sparsity`
/// (user columns are repaired to stay nonempty). With probability `structure`
/// one artist row is made a multiple (0..3) of another so that proportional
/// rows occur often enough to exercise homogeneity.
struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t min_artists = 1;
  std::size_t max_artists = 6;
  std::size_t min_users = 1;
  std::size_t max_users = 6;
  StreamCount max_count = 9;
  double sparsity = 0.4;
  double structure = 0.3;
};

inline std::string user_name(std::size_t j) {
  if (j < 26) return std::string(1, static_cast<char>('a' + j));
  return "u" + std::to_string(j + 1);
}

/// Deterministic stream of valid problems for a given seed. Not thread-safe;
/// give each thread its own generator.
class ProblemGenerator {
 public:
  explicit ProblemGenerator(GeneratorConfig config) : config_(config), rng_(config.seed) {
    if (config_.min_artists == 0 || config_.min_users == 0 || config_.min_artists > config_.max_artists ||
        config_.min_users > config_.max_users || config_.max_count == 0)
      throw Error(ErrorCode::invalid_params, "generator bounds are inconsistent");
  }

  const GeneratorConfig& config() const noexcept { return config_; }

  StreamingProblem next() {
    const std::size_t n = pick(config_.min_artists, config_.max_artists);
    const std::size_t m = pick(config_.min_users, config_.max_users);
    StreamMatrix t(n, std::vector<StreamCount>(m));
    for (auto& row : t)
      for (auto& c : row) c = cell();

    std::optional<std::pair<std::size_t, StreamCount>> tied;  // (row, factor) made proportional to another row
    std::size_t base = 0;
    if (n >= 2 && chance(config_.structure)) {
      std::size_t target = pick(0, n - 1);
      base = pick(0, n - 2);
      if (base >= target) ++base;
      StreamCount factor = pick(0, 3);
      for (std::size_t j = 0; j < m; ++j) t[target][j] = factor * t[base][j];
      tied = {target, factor};
    }

    for (std::size_t j = 0; j < m; ++j) {
      bool empty = true;
      for (std::size_t i = 0; i < n; ++i) empty = empty && t[i][j] == 0;
      if (!empty) continue;
      if (tied) {
        t[base][j] = 1;
        t[tied->first][j] = tied->second;
      } else {
        t[pick(0, n - 1)][j] = pick(1, config_.max_count);
      }
    }

    std::vector<std::string> artists(n), users(m);
    for (std::size_t i = 0; i < n; ++i) artists[i] = std::to_string(i + 1);
    for (std::size_t j = 0; j < m; ++j) users[j] = user_name(j);
    return StreamingProblem(std::move(artists), std::move(users), std::move(t));
  }

  /// Same problem with column `user` redrawn (kept nonempty).
  StreamingProblem resample_column(const StreamingProblem& p, std::size_t user) {
    StreamMatrix t = p.streams();
    bool empty = true;
    for (auto& row : t) {
      row[user] = cell();
      empty = empty && row[user] == 0;
    }
    if (empty) t[pick(0, t.size() - 1)][user] = pick(1, config_.max_count);
    return StreamingProblem(p.artists(), p.users(), std::move(t), p.fee());
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool chance(double prob) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < prob; }
  StreamCount cell() { return chance(config_.sparsity) ? 0 : pick(1, config_.max_count); }

  GeneratorConfig config_;
  std::mt19937_64 rng_;
};

namespace detail {

/// Folds one case into an accumulating verdict; returns true when it failed.
inline bool absorb(AxiomVerdict& acc, AxiomVerdict one) {
  acc.cases += 1;
  if (one.failed()) {
    acc.status = Status::fail;
    acc.witness = std::move(one.witness);
    return true;
  }
  acc.status = Status::pass;
  return false;
}

inline AxiomVerdict empty_verdict(Axiom axiom, const Index& index) {
  AxiomVerdict v;
  v.axiom = axiom;
  v.index = index.name;
  v.instances = 1;
  return v;
}

}  // namespace detail

/// Every ordered artist pair whose rows are proportional, with the forced
/// lambda (lambda = 0 when the first row is zero).
inline AxiomVerdict enumerate_homogeneity(const Index& index, const StreamingProblem& p) {
  auto acc = detail::empty_verdict(Axiom::homogeneity, index);
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    for (std::size_t i2 = 0; i2 < p.artist_count(); ++i2) {
      if (i == i2) continue;
      std::optional<Rational> lambda;
      if (p.artist_total(i2) == 0) {
        if (p.artist_total(i) == 0) lambda = Rational(0);
      } else {
        for (std::size_t j = 0; j < p.user_count() && !lambda; ++j)
          if (p(i2, j) > 0) {
            lambda = Rational(Integer(static_cast<unsigned long>(p(i, j))), Integer(static_cast<unsigned long>(p(i2, j))));
            lambda->canonicalize();
          }
        for (std::size_t j = 0; j < p.user_count(); ++j)
          if (Rational(p(i, j)) != *lambda * Rational(p(i2, j))) {
            lambda.reset();
            break;
          }
      }
      if (lambda && detail::absorb(acc, check_homogeneity(index, p, i, i2, *lambda))) return acc;
    }
  return acc;
}

/// Every unordered split of the users into two nonempty parts.
inline AxiomVerdict enumerate_additivity(const Index& index, const StreamingProblem& p) {
  auto acc = detail::empty_verdict(Axiom::additivity, index);
  const std::size_t m = p.user_count();
  if (m < 2 || m > 30) return acc;
  // user 0 always sits in the first part
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m) - 1; mask += 2) {
    std::vector<std::size_t> part;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1u) part.push_back(j);
    if (detail::absorb(acc, check_additivity(index, p, part))) return acc;
  }
  return acc;
}

inline AxiomVerdict enumerate_equal_individual_impact(const Index& index, const StreamingProblem& p) {
  auto acc = detail::empty_verdict(Axiom::equal_individual_impact, index);
  const std::size_t m = p.user_count();
  if (m < 2) return acc;
  std::vector<IndexValues> reduced;
  reduced.reserve(m);
  for (std::size_t j = 0; j < m; ++j) reduced.push_back(index(remove_user(p, j)));
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t j2 = j + 1; j2 < m; ++j2) {
        if (p(i, j) != p(i, j2)) continue;
        bool ok = reduced[j][i] == reduced[j2][i];
        auto one = ok ? detail::verdict(Axiom::equal_individual_impact, index, true)
                      : check_equal_individual_impact(index, p, i, j, j2);
        if (detail::absorb(acc, std::move(one))) return acc;
      }
  return acc;
}

inline AxiomVerdict enumerate_equal_global_impact(const Index& index, const StreamingProblem& p) {
  auto acc = detail::empty_verdict(Axiom::equal_global_impact, index);
  const std::size_t m = p.user_count();
  if (m < 2) return acc;
  RationalVector totals;
  totals.reserve(m);
  for (std::size_t j = 0; j < m; ++j) totals.push_back(index(remove_user(p, j)).total());
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t j2 = j + 1; j2 < m; ++j2) {
      auto one = totals[j] == totals[j2] ? detail::verdict(Axiom::equal_global_impact, index, true)
                                         : check_equal_global_impact(index, p, j, j2);
      if (detail::absorb(acc, std::move(one))) return acc;
    }
  return acc;
}

/// Every nonempty user group C.
inline AxiomVerdict enumerate_reasonable_lower_bound(const Index& index, const StreamingProblem& p) {
  auto acc = detail::empty_verdict(Axiom::reasonable_lower_bound, index);
  const std::size_t m = p.user_count();
  if (m > 30) return acc;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::size_t> group;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1u) group.push_back(j);
    if (detail::absorb(acc, check_reasonable_lower_bound(index, p, group))) return acc;
  }
  return acc;
}

/// `per_user` resampled perturbations of every user column.
inline AxiomVerdict enumerate_click_fraud(const Index& index, const StreamingProblem& p, ProblemGenerator& gen,
                                          std::size_t per_user = 2) {
  auto acc = detail::empty_verdict(Axiom::click_fraud_proofness, index);
  for (std::size_t j = 0; j < p.user_count(); ++j)
    for (std::size_t k = 0; k < per_user; ++k)
      if (detail::absorb(acc, check_click_fraud_proofness(index, p, gen.resample_column(p, j), j))) return acc;
  return acc;
}

/// Exhaustive premise enumeration of one axiom on one problem. `gen` supplies
/// click-fraud perturbations.
inline AxiomVerdict check_on_instance(const Index& index, Axiom axiom, const StreamingProblem& p, ProblemGenerator& gen) {
  switch (axiom) {
    case Axiom::homogeneity: return enumerate_homogeneity(index, p);
    case Axiom::additivity: return enumerate_additivity(index, p);
    case Axiom::equal_individual_impact: return enumerate_equal_individual_impact(index, p);
    case Axiom::equal_global_impact: return enumerate_equal_global_impact(index, p);
    case Axiom::reasonable_lower_bound: return enumerate_reasonable_lower_bound(index, p);
    case Axiom::click_fraud_proofness: return enumerate_click_fraud(index, p, gen);
    case Axiom::core_selection: {
      auto v = check_core_selection(index, p);
      return v;
    }
  }
  return {};
}

namespace detail {

inline void merge_into(AxiomVerdict& acc, AxiomVerdict one) {
  acc.instances += one.instances;
  acc.cases += one.cases;
  if (one.failed()) {
    acc.status = Status::fail;
    acc.witness = std::move(one.witness);
  } else if (one.passed() && acc.status == Status::not_applicable) {
    acc.status = Status::pass;
  }
}

}  // namespace detail

/// Draws up to `budget` problems and stops at the first violation. A pass
/// means no violation within budget; n/a means no instance met the premises.
inline AxiomVerdict search_witness(const Index& index, Axiom axiom, const GeneratorConfig& config, std::size_t budget) {
  ProblemGenerator gen(config);
  AxiomVerdict acc;
  acc.axiom = axiom;
  acc.index = index.name;
  for (std::size_t k = 0; k < budget && !acc.failed(); ++k) {
    auto p = gen.next();
    detail::merge_into(acc, check_on_instance(index, axiom, p, gen));
  }
  return acc;
}

/// N={1,2}, M={a,b}, t=[[10,0],[0,90]]
inline StreamingProblem example_one() { return StreamingProblem({"1", "2"}, {"a", "b"}, {{10, 0}, {0, 90}}); }

/// Example one plus user c with 5 and 35 streams.
inline StreamingProblem example_three_users() {
  return StreamingProblem({"1", "2"}, {"a", "b", "c"}, {{10, 0, 5}, {0, 90, 35}});
}

/// Example one with user b reduced to 2 streams.
inline StreamingProblem example_click_fraud_perturbation() {
  return StreamingProblem({"1", "2"}, {"a", "b"}, {{10, 0}, {0, 2}});
}

/// Checks on the fixed illustrative problems, run before any random search.
inline AxiomVerdict golden_check(const Index& index, Axiom axiom) {
  AxiomVerdict acc;
  acc.axiom = axiom;
  acc.index = index.name;
  ProblemGenerator gen(GeneratorConfig{});
  if (axiom == Axiom::click_fraud_proofness) {
    detail::merge_into(acc, check_click_fraud_proofness(index, example_one(), example_click_fraud_perturbation(), 1));
    if (acc.failed()) return acc;
  }
  for (const auto& p : {example_one(), example_three_users()}) {
    detail::merge_into(acc, check_on_instance(index, axiom, p, gen));
    if (acc.failed()) return acc;
  }
  return acc;
}

struct AxiomTable {
  std::vector<std::string> indices;
  std::vector<Axiom> axioms;
  /// Row-major: cells[r * axioms.size() + c].
  std::vector<AxiomVerdict> cells;

  const AxiomVerdict& at(std::size_t index_row, std::size_t axiom_col) const {
    return cells[index_row * axioms.size() + axiom_col];
  }
  const AxiomVerdict* find(std::string_view index, Axiom axiom) const {
    for (const auto& c : cells)
      if (c.index == index && c.axiom == axiom) return &c;
    return nullptr;
  }
};

/// Golden problems first, then a seeded search of `budget` random problems
/// per cell. Cells run concurrently; each owns a generator seeded from
/// `config`, so the table is deterministic.
inline AxiomTable axiom_matrix(const std::vector<Index>& indices, const std::vector<Axiom>& axioms,
                               const GeneratorConfig& config, std::size_t budget) {
  AxiomTable table;
  table.axioms = axioms;
  std::vector<std::future<AxiomVerdict>> pending;
  for (const auto& index : indices) {
    table.indices.push_back(index.name);
    for (auto axiom : axioms)
      pending.push_back(std::async(std::launch::async, [&index, axiom, &config, budget] {
        auto acc = golden_check(index, axiom);
        if (!acc.failed() && budget > 0) detail::merge_into(acc, search_witness(index, axiom, config, budget));
        return acc;
      }));
  }
  for (auto& f : pending) table.cells.push_back(f.get());
  return table;
}

inline nlohmann::json witness_to_json(const Witness& w) {
  nlohmann::json j;
  j["problem"] = problem_to_json(w.problem);
  if (w.other) j["perturbed_problem"] = problem_to_json(*w.other);
  std::vector<std::string> artists, users;
  for (auto i : w.artists) artists.push_back(w.problem.artists()[i]);
  for (auto u : w.users) users.push_back(w.problem.users()[u]);
  j["artists"] = artists;
  j["users"] = users;
  if (w.lambda) j["lambda"] = to_string(*w.lambda);
  j["relation"] = w.relation;
  j["lhs"] = to_string(w.lhs);
  j["rhs"] = to_string(w.rhs);
  return j;
}

inline nlohmann::json verdict_to_json(const AxiomVerdict& v) {
  nlohmann::json j;
  j["axiom"] = std::string(name_of(v.axiom));
  j["index"] = v.index;
  j["status"] = std::string(name_of(v.status));
  j["instances"] = v.instances;
  j["cases"] = v.cases;
  j["witness"] = v.witness ? witness_to_json(*v.witness) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json table_to_json(const AxiomTable& t) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : t.cells) cells.push_back(verdict_to_json(c));
  return cells;
}

}  // namespace streamshare
