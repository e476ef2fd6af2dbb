#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamshare/errors.hpp"
#include "streamshare/problem.hpp"
#include "streamshare/rational.hpp"

namespace streamshare {

/// omega(j, x) > 0 for a user id and that user's stream profile over the artists.
/// Evaluation must be free of shared mutable state.
struct WeightSystem {
  std::string name;
  std::function<Rational(std::string_view user, const std::vector<StreamCount>& profile)> weight;
};

struct BandedWeightParams {
  std::uint64_t alpha = 1;
  std::uint64_t beta = 1;
};

/// A popularity index as a value, so that axiom checks can quantify over indices.
struct Index {
  std::string name;
  std::function<IndexValues(const StreamingProblem&)> evaluate;

  IndexValues operator()(const StreamingProblem& p) const { return evaluate(p); }
};

/// P_i = T_i
inline IndexValues pro_rata_index(const StreamingProblem& p) {
  RationalVector s(p.artist_count());
  for (std::size_t i = 0; i < p.artist_count(); ++i) s[i] = Rational(p.artist_total(i));
  return IndexValues(std::move(s));
}

/// U_i = sum_j t_ij / T^j
inline IndexValues user_centric_index(const StreamingProblem& p) {
  RationalVector s(p.artist_count(), Rational(0));
  for (std::size_t j = 0; j < p.user_count(); ++j) {
    Rational denom(p.user_total(j));
    for (std::size_t i = 0; i < p.artist_count(); ++i)
      if (p(i, j) > 0) s[i] += Rational(p(i, j)) / denom;
  }
  for (auto& x : s) x.canonicalize();
  return IndexValues(std::move(s));
}

/// I^w_i = sum_j w(j, t_.j) t_ij
inline IndexValues weighted_index(const StreamingProblem& p, const WeightSystem& omega) {
  RationalVector s(p.artist_count(), Rational(0));
  for (std::size_t j = 0; j < p.user_count(); ++j) {
    auto profile = p.profile(j);
    Rational w = omega.weight(p.users()[j], profile);
    if (sgn(w) <= 0)
      throw Error(ErrorCode::non_positive_weight,
                  omega.name + " gave " + to_string(w) + " for user '" + p.users()[j] + "'");
    for (std::size_t i = 0; i < p.artist_count(); ++i)
      if (profile[i] > 0) s[i] += w * Rational(profile[i]);
  }
  for (auto& x : s) x.canonicalize();
  return IndexValues(std::move(s));
}

inline WeightSystem unit_weight_system() {
  return {"unit", [](std::string_view, const std::vector<StreamCount>&) { return Rational(1); }};
}

inline WeightSystem inverse_total_weight_system() {
  return {"inverse-total", [](std::string_view, const std::vector<StreamCount>& x) {
            StreamCount total = 0;
            for (auto c : x) total += c;
            return Rational(1, total);
          }};
}

/// Light users (total <= alpha) count like user-centric, medium users get 1/alpha
/// per stream, heavy users (total > beta) are capped at beta/alpha in total.
inline WeightSystem banded_weight_system(BandedWeightParams params) {
  if (params.alpha == 0 || params.beta < params.alpha)
    throw Error(ErrorCode::invalid_params, "banded weights need 0 < alpha <= beta, got alpha=" +
                                               std::to_string(params.alpha) + " beta=" +
                                               std::to_string(params.beta));
  std::string name = "banded(" + std::to_string(params.alpha) + "," + std::to_string(params.beta) + ")";
  return {std::move(name), [params](std::string_view, const std::vector<StreamCount>& x) {
            StreamCount total = 0;
            for (auto c : x) total += c;
            Rational a(params.alpha), b(params.beta), s(total);
            if (total <= params.alpha) return Rational(1, total);
            if (total <= params.beta) return Rational(1 / a);
            Rational w = b / (a * s);
            w.canonicalize();
            return w;
          }};
}

/// Weight depends on the user only: table[user]. Users missing from the table
/// are rejected at evaluation time.
inline WeightSystem table_weight_system(std::map<std::string, Rational, std::less<>> table) {
  return {"table", [table = std::move(table)](std::string_view user, const std::vector<StreamCount>&) {
            auto it = table.find(user);
            if (it == table.end())
              throw Error(ErrorCode::non_positive_weight, "no weight for user '" + std::string(user) + "'");
            return it->second;
          }};
}

/// R_i = fee * m * I_i / sum(I). Invariant under positive scaling of `scores`.
inline Allocation rewards(const StreamingProblem& p, const RationalVector& scores) {
  if (scores.size() != p.artist_count())
    throw Error(ErrorCode::dimension_mismatch, "index has " + std::to_string(scores.size()) +
                                                   " entries for " + std::to_string(p.artist_count()) +
                                                   " artists");
  Rational total = sum(scores);
  if (sgn(total) <= 0) throw Error(ErrorCode::zero_index_sum, "index scores must have positive sum");
  Rational factor = p.revenue() / total;
  Allocation out;
  out.payouts.reserve(scores.size());
  for (const auto& s : scores) {
    Rational r = s * factor;
    r.canonicalize();
    out.payouts.push_back(std::move(r));
  }
  return out;
}

inline Allocation rewards(const StreamingProblem& p, const IndexValues& index) {
  return rewards(p, index.scores);
}

enum class Counterexample { I1, I2, I3, I4, I5 };

inline std::string_view name_of(Counterexample which) {
  switch (which) {
    case Counterexample::I1: return "I1";
    case Counterexample::I2: return "I2";
    case Counterexample::I3: return "I3";
    case Counterexample::I4: return "I4";
    case Counterexample::I5: return "I5";
  }
  return "?";
}

/// Indices used to show the axioms are independent of one another:
///   I1: constant 1
///   I2: sum_j (t_ij + T_i) / (T^j + sum_k T_k)
///   I3: sum_j t_ij^2
///   I4: m T_i / sum_k T_k
///   I5: sum over users j listening to i of 1 / |L^j|
inline IndexValues counterexample_index(Counterexample which, const StreamingProblem& p) {
  const auto n = p.artist_count();
  const auto m = p.user_count();
  RationalVector s(n, Rational(0));
  switch (which) {
    case Counterexample::I1:
      for (auto& x : s) x = 1;
      break;
    case Counterexample::I2: {
      Rational all(p.total_streams());
      for (std::size_t i = 0; i < n; ++i) {
        Rational ti(p.artist_total(i));
        for (std::size_t j = 0; j < m; ++j) s[i] += (Rational(p(i, j)) + ti) / (Rational(p.user_total(j)) + all);
      }
      break;
    }
    case Counterexample::I3:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) s[i] += Rational(p(i, j)) * Rational(p(i, j));
      break;
    case Counterexample::I4: {
      Rational all(p.total_streams());
      Rational users(static_cast<unsigned long>(m));
      for (std::size_t i = 0; i < n; ++i) s[i] = Rational(p.artist_total(i)) * users / all;
      break;
    }
    case Counterexample::I5:
      for (std::size_t j = 0; j < m; ++j) {
        auto listened = listened_set(p, j);
        Rational share(1, static_cast<unsigned long>(listened.size()));
        for (auto i : listened) s[i] += share;
      }
      break;
  }
  for (auto& x : s) x.canonicalize();
  return IndexValues(std::move(s));
}

inline Index pro_rata() { return {"pro-rata", [](const StreamingProblem& p) { return pro_rata_index(p); }}; }

inline Index user_centric() {
  return {"user-centric", [](const StreamingProblem& p) { return user_centric_index(p); }};
}

inline Index weighted(WeightSystem omega) {
  std::string name = "weighted[" + omega.name + "]";
  return {std::move(name), [omega = std::move(omega)](const StreamingProblem& p) { return weighted_index(p, omega); }};
}

inline Index banded(BandedWeightParams params) {
  auto omega = banded_weight_system(params);
  std::string name = omega.name;
  return {std::move(name), [omega = std::move(omega)](const StreamingProblem& p) { return weighted_index(p, omega); }};
}

inline Index counterexample(Counterexample which) {
  return {std::string(name_of(which)),
          [which](const StreamingProblem& p) { return counterexample_index(which, p); }};
}

/// Looks up "pro-rata", "user-centric", "I1".."I5" or "banded" (using `params`).
inline std::optional<Index> builtin_index(std::string_view name, BandedWeightParams params = {20, 60}) {
  if (name == "pro-rata" || name == "P") return pro_rata();
  if (name == "user-centric" || name == "U") return user_centric();
  if (name == "banded") return banded(params);
  for (auto which : {Counterexample::I1, Counterexample::I2, Counterexample::I3, Counterexample::I4,
                     Counterexample::I5})
    if (name == name_of(which)) return counterexample(which);
  return std::nullopt;
}

}  // namespace streamshare
