#pragma once

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamshare/errors.hpp"
#include "streamshare/io.hpp"
#include "streamshare/problem.hpp"
#include "streamshare/rational.hpp"

namespace streamshare {

/// (N, c, E) with c >= 0, E >= 0 and sum(c) >= E.
class BankruptcyProblem {
 public:
  BankruptcyProblem(std::vector<std::string> agents, RationalVector claims, Rational endowment)
      : agents_(std::move(agents)), claims_(std::move(claims)), endowment_(std::move(endowment)) {
    if (agents_.empty()) throw Error(ErrorCode::invalid_problem, "no agents");
    if (agents_.size() != claims_.size())
      throw Error(ErrorCode::dimension_mismatch, "one claim per agent required");
    for (const auto& c : claims_)
      if (sgn(c) < 0) throw Error(ErrorCode::invalid_problem, "negative claim " + to_string(c));
    if (sgn(endowment_) < 0) throw Error(ErrorCode::invalid_problem, "negative endowment");
    if (sum(claims_) < endowment_)
      throw Error(ErrorCode::invalid_problem,
                  "claims total " + to_string(sum(claims_)) + " is below the endowment " + to_string(endowment_));
  }

  const std::vector<std::string>& agents() const noexcept { return agents_; }
  const RationalVector& claims() const noexcept { return claims_; }
  const Rational& endowment() const noexcept { return endowment_; }

 private:
  std::vector<std::string> agents_;
  RationalVector claims_;
  Rational endowment_;
};

/// awards_i = c_i E / sum(c); all zeros when every claim is zero.
inline RationalVector proportional_rule(const BankruptcyProblem& bp) {
  Rational total = sum(bp.claims());
  RationalVector awards(bp.claims().size(), Rational(0));
  if (sgn(total) == 0) return awards;
  for (std::size_t i = 0; i < awards.size(); ++i) {
    awards[i] = bp.claims()[i] * bp.endowment() / total;
    awards[i].canonicalize();
  }
  return awards;
}

struct CeaResult {
  RationalVector awards;
  Rational lambda;
};

/// awards_i = min(lambda, c_i) with sum = E, lambda found by water-filling
/// over the claims in ascending order.
inline CeaResult cea_rule(const BankruptcyProblem& bp) {
  const auto& c = bp.claims();
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return c[a] < c[b]; });

  Rational remaining = bp.endowment();
  Rational lambda = 0;
  bool level_found = false;
  for (std::size_t k = 0; k < order.size(); ++k) {
    Rational open(static_cast<unsigned long>(order.size() - k));
    const Rational& claim = c[order[k]];
    if (claim * open >= remaining) {
      lambda = remaining / open;
      lambda.canonicalize();
      level_found = true;
      break;
    }
    remaining -= claim;
  }
  // E equals the total claim: everyone is paid in full.
  if (!level_found) lambda = *std::max_element(c.begin(), c.end());

  RationalVector awards(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) awards[i] = std::min(lambda, c[i]);
  return {std::move(awards), std::move(lambda)};
}

/// (N, K, c, E): agents x issues claims with every issue total C^j > 0 and
/// sum_j C^j >= E.
class MultiIssueClaims {
 public:
  MultiIssueClaims(std::vector<std::string> agents, std::vector<std::string> issues,
                   std::vector<RationalVector> claims, Rational endowment)
      : agents_(std::move(agents)),
        issues_(std::move(issues)),
        claims_(std::move(claims)),
        endowment_(std::move(endowment)) {
    if (agents_.empty() || issues_.empty()) throw Error(ErrorCode::invalid_problem, "need agents and issues");
    if (claims_.size() != agents_.size()) throw Error(ErrorCode::dimension_mismatch, "one claims row per agent");
    for (const auto& row : claims_) {
      if (row.size() != issues_.size()) throw Error(ErrorCode::dimension_mismatch, "one claim per issue");
      for (const auto& c : row)
        if (sgn(c) < 0) throw Error(ErrorCode::invalid_problem, "negative claim " + to_string(c));
    }
    if (sgn(endowment_) < 0) throw Error(ErrorCode::invalid_problem, "negative endowment");
    Rational all = 0;
    for (std::size_t j = 0; j < issues_.size(); ++j) {
      Rational cj = issue_total(j);
      if (sgn(cj) <= 0) throw Error(ErrorCode::invalid_problem, "issue '" + issues_[j] + "' has no claims");
      all += cj;
    }
    if (all < endowment_)
      throw Error(ErrorCode::invalid_problem,
                  "claims total " + to_string(all) + " is below the endowment " + to_string(endowment_));
  }

  const std::vector<std::string>& agents() const noexcept { return agents_; }
  const std::vector<std::string>& issues() const noexcept { return issues_; }
  const std::vector<RationalVector>& claims() const noexcept { return claims_; }
  const Rational& endowment() const noexcept { return endowment_; }

  /// C^j
  Rational issue_total(std::size_t issue) const {
    Rational total = 0;
    for (const auto& row : claims_) total += row[issue];
    return total;
  }

  RationalVector issue_totals() const {
    RationalVector out(issues_.size());
    for (std::size_t j = 0; j < issues_.size(); ++j) out[j] = issue_total(j);
    return out;
  }

  RationalVector issue_column(std::size_t issue) const {
    RationalVector out(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) out[i] = claims_[i][issue];
    return out;
  }

 private:
  std::vector<std::string> agents_;
  std::vector<std::string> issues_;
  std::vector<RationalVector> claims_;
  Rational endowment_;
};

/// omega((C^j)_j, E): a probability distribution over issues.
struct IssueWeightFunction {
  std::string name;
  std::function<RationalVector(const RationalVector& issue_totals, const Rational& endowment)> weights;
};

/// omega_j = C^j / sum_k C^k
inline IssueWeightFunction proportional_issue_weights() {
  return {"omega-P", [](const RationalVector& totals, const Rational&) {
            Rational all = sum(totals);
            RationalVector w(totals.size());
            for (std::size_t j = 0; j < totals.size(); ++j) {
              w[j] = totals[j] / all;
              w[j].canonicalize();
            }
            return w;
          }};
}

/// omega_j = 1 / |K|
inline IssueWeightFunction uniform_issue_weights() {
  return {"omega-U", [](const RationalVector& totals, const Rational&) {
            return RationalVector(totals.size(), Rational(1, static_cast<unsigned long>(totals.size())));
          }};
}

/// award_i = sum_j (c_ij / C^j) omega_j E
inline RationalVector weighted_proportional(const MultiIssueClaims& mic, const IssueWeightFunction& omega) {
  auto totals = mic.issue_totals();
  auto w = omega.weights(totals, mic.endowment());
  if (w.size() != totals.size())
    throw Error(ErrorCode::weight_contract_violated, omega.name + " returned the wrong number of weights");
  for (const auto& wj : w)
    if (sgn(wj) < 0 || wj > 1)
      throw Error(ErrorCode::weight_contract_violated, omega.name + " weight " + to_string(wj) + " outside [0,1]");
  if (sum(w) != 1) throw Error(ErrorCode::weight_contract_violated, omega.name + " weights do not sum to 1");

  RationalVector awards(mic.agents().size(), Rational(0));
  for (std::size_t j = 0; j < totals.size(); ++j) {
    Rational issue_share = w[j] * mic.endowment() / totals[j];
    for (std::size_t i = 0; i < awards.size(); ++i) awards[i] += mic.claims()[i][j] * issue_share;
  }
  for (auto& a : awards) a.canonicalize();
  return awards;
}

enum class ClaimsRule { proportional, cea };

inline std::string_view name_of(ClaimsRule rule) { return rule == ClaimsRule::proportional ? "P" : "CEA"; }

/// Failure in one stage of a two-stage rule; `stage()` is 1 or 2.
class StageError : public Error {
 public:
  StageError(int stage, const Error& cause)
      : Error(cause.code(), "stage " + std::to_string(stage) + ": " + cause.detail()), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

inline RationalVector apply_rule(ClaimsRule rule, const BankruptcyProblem& bp) {
  return rule == ClaimsRule::proportional ? proportional_rule(bp) : cea_rule(bp).awards;
}

/// Split E across issues with `first` on (K, C, E), then each issue's share
/// across agents with `second`.
inline RationalVector two_stage_rule(const MultiIssueClaims& mic, ClaimsRule first, ClaimsRule second) {
  RationalVector issue_awards;
  try {
    issue_awards = apply_rule(first, BankruptcyProblem(mic.issues(), mic.issue_totals(), mic.endowment()));
  } catch (const Error& e) {
    throw StageError(1, e);
  }
  RationalVector awards(mic.agents().size(), Rational(0));
  for (std::size_t j = 0; j < issue_awards.size(); ++j) {
    RationalVector part;
    try {
      part = apply_rule(second, BankruptcyProblem(mic.agents(), mic.issue_column(j), issue_awards[j]));
    } catch (const Error& e) {
      throw StageError(2, e);
    }
    for (std::size_t i = 0; i < awards.size(); ++i) awards[i] += part[i];
  }
  for (auto& a : awards) a.canonicalize();
  return awards;
}

/// K = M, c = t, E = m * fee
inline MultiIssueClaims streaming_to_claims(const StreamingProblem& p) {
  std::vector<RationalVector> c(p.artist_count(), RationalVector(p.user_count()));
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    for (std::size_t j = 0; j < p.user_count(); ++j) c[i][j] = Rational(p(i, j));
  return MultiIssueClaims(p.artists(), p.users(), std::move(c), p.revenue());
}

/// c_i = T_i, E = m * fee
inline BankruptcyProblem streaming_to_bankruptcy(const StreamingProblem& p) {
  RationalVector c(p.artist_count());
  for (std::size_t i = 0; i < p.artist_count(); ++i) c[i] = Rational(p.artist_total(i));
  return BankruptcyProblem(p.artists(), std::move(c), p.revenue());
}

inline nlohmann::json claims_to_json(const MultiIssueClaims& mic) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : mic.claims()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(detail::rational_json(c));
    rows.push_back(r);
  }
  return {{"agents", mic.agents()},
          {"issues", mic.issues()},
          {"claims", rows},
          {"endowment", to_string(mic.endowment())}};
}

inline MultiIssueClaims claims_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError(0, 0, "expected a JSON object");
  for (const char* key : {"agents", "issues", "claims"})
    if (!j.contains(key) || !j[key].is_array()) throw ParseError(0, 0, std::string("missing array '") + key + "'");
  if (!j.contains("endowment")) throw ParseError(0, 0, "missing 'endowment'");
  std::vector<RationalVector> c;
  for (const auto& row : j["claims"]) {
    if (!row.is_array()) throw ParseError(0, 0, "'claims' rows must be arrays");
    RationalVector r;
    for (const auto& e : row) r.push_back(detail::json_rational(e, "claim"));
    c.push_back(std::move(r));
  }
  return MultiIssueClaims(j["agents"].get<std::vector<std::string>>(), j["issues"].get<std::vector<std::string>>(),
                          std::move(c), detail::json_rational(j["endowment"], "endowment"));
}

}  // namespace streamshare
