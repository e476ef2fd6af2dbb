#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "streamshare/errors.hpp"
#include "streamshare/rational.hpp"

namespace streamshare {

using StreamCount = std::uint64_t;
/// Row-major artists x users stream counts.
using StreamMatrix = std::vector<std::vector<StreamCount>>;

/// A validated streaming problem: artists N, users M, stream counts t and a
/// uniform per-user fee. Immutable once constructed; identifier order is the
/// canonical index order everywhere else in the library.
class StreamingProblem {
 public:
  StreamingProblem(std::vector<std::string> artists, std::vector<std::string> users,
                   StreamMatrix streams, Rational fee = 1)
      : artists_(std::move(artists)),
        users_(std::move(users)),
        streams_(std::move(streams)),
        fee_(std::move(fee)) {
    fee_.canonicalize();
    validate();
  }

  std::size_t artist_count() const noexcept { return artists_.size(); }
  std::size_t user_count() const noexcept { return users_.size(); }
  const std::vector<std::string>& artists() const noexcept { return artists_; }
  const std::vector<std::string>& users() const noexcept { return users_; }
  const StreamMatrix& streams() const noexcept { return streams_; }
  const Rational& fee() const noexcept { return fee_; }

  StreamCount operator()(std::size_t artist, std::size_t user) const {
    return streams_[artist][user];
  }

  /// Column t_{.j}.
  std::vector<StreamCount> profile(std::size_t user) const {
    std::vector<StreamCount> col(artist_count());
    for (std::size_t i = 0; i < artist_count(); ++i) col[i] = streams_[i][user];
    return col;
  }

  /// T_i
  StreamCount artist_total(std::size_t artist) const {
    StreamCount total = 0;
    for (auto c : streams_[artist]) total += c;
    return total;
  }

  /// T^j
  StreamCount user_total(std::size_t user) const {
    StreamCount total = 0;
    for (const auto& row : streams_) total += row[user];
    return total;
  }

  StreamCount total_streams() const {
    StreamCount total = 0;
    for (std::size_t i = 0; i < artist_count(); ++i) total += artist_total(i);
    return total;
  }

  /// m * fee
  Rational revenue() const { return fee_ * Rational(static_cast<unsigned long>(user_count())); }

  std::size_t artist_index(std::string_view id) const {
    auto it = std::find(artists_.begin(), artists_.end(), id);
    if (it == artists_.end()) throw Error(ErrorCode::unknown_artist, std::string(id));
    return static_cast<std::size_t>(it - artists_.begin());
  }

  std::size_t user_index(std::string_view id) const {
    auto it = std::find(users_.begin(), users_.end(), id);
    if (it == users_.end()) throw Error(ErrorCode::unknown_user, std::string(id));
    return static_cast<std::size_t>(it - users_.begin());
  }

  friend bool operator==(const StreamingProblem& a, const StreamingProblem& b) {
    return a.artists_ == b.artists_ && a.users_ == b.users_ && a.streams_ == b.streams_ &&
           a.fee_ == b.fee_;
  }

 private:
  void validate() const {
    if (sgn(fee_) <= 0) throw Error(ErrorCode::non_positive_fee, to_string(fee_));
    if (artists_.empty() || users_.empty())
      throw Error(ErrorCode::dimension_mismatch, "a problem needs at least one artist and one user");
    if (streams_.size() != artists_.size())
      throw Error(ErrorCode::dimension_mismatch,
                  std::to_string(streams_.size()) + " rows for " + std::to_string(artists_.size()) +
                      " artists");
    for (std::size_t i = 0; i < streams_.size(); ++i)
      if (streams_[i].size() != users_.size())
        throw Error(ErrorCode::dimension_mismatch,
                    "row of artist '" + artists_[i] + "' has " + std::to_string(streams_[i].size()) +
                        " entries for " + std::to_string(users_.size()) + " users");
    check_unique(artists_, "artist");
    check_unique(users_, "user");
    if (total_streams() == 0) throw Error(ErrorCode::all_zero_matrix, "no streams at all");
    for (std::size_t j = 0; j < users_.size(); ++j)
      if (user_total(j) == 0) throw Error(ErrorCode::empty_user_column, users_[j]);
  }

  static void check_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids)
      if (!seen.insert(id).second)
        throw Error(ErrorCode::duplicate_identifier, std::string(what) + " '" + id + "'");
  }

  std::vector<std::string> artists_;
  std::vector<std::string> users_;
  StreamMatrix streams_;
  Rational fee_;
};

inline StreamingProblem new_problem(std::vector<std::string> artists, std::vector<std::string> users,
                                    StreamMatrix streams, Rational fee = 1) {
  return StreamingProblem(std::move(artists), std::move(users), std::move(streams), std::move(fee));
}

inline StreamCount artist_total(const StreamingProblem& p, std::string_view artist) {
  return p.artist_total(p.artist_index(artist));
}

inline StreamCount user_total(const StreamingProblem& p, std::string_view user) {
  return p.user_total(p.user_index(user));
}

/// L^j as artist indices, ascending.
inline std::vector<std::size_t> listened_set(const StreamingProblem& p, std::size_t user) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    if (p(i, user) > 0) out.push_back(i);
  return out;
}

/// F_i as user indices, ascending. Empty for null artists.
inline std::vector<std::size_t> fans(const StreamingProblem& p, std::size_t artist) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < p.user_count(); ++j)
    if (p(artist, j) > 0) out.push_back(j);
  return out;
}

inline std::set<std::string> listened_set(const StreamingProblem& p, std::string_view user) {
  std::set<std::string> out;
  for (auto i : listened_set(p, p.user_index(user))) out.insert(p.artists()[i]);
  return out;
}

inline std::set<std::string> fans(const StreamingProblem& p, std::string_view artist) {
  std::set<std::string> out;
  for (auto j : fans(p, p.artist_index(artist))) out.insert(p.users()[j]);
  return out;
}

/// Problem over users `keep` (indices into p.users(), in the given order).
inline StreamingProblem restrict_users(const StreamingProblem& p, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw Error(ErrorCode::would_be_empty, "no users left");
  std::vector<std::string> users;
  users.reserve(keep.size());
  for (auto j : keep) users.push_back(p.users().at(j));
  StreamMatrix t(p.artist_count(), std::vector<StreamCount>(keep.size()));
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    for (std::size_t k = 0; k < keep.size(); ++k) t[i][k] = p(i, keep[k]);
  return StreamingProblem(p.artists(), std::move(users), std::move(t), p.fee());
}

/// (N, M \ {j}, t^{-j})
inline StreamingProblem remove_user(const StreamingProblem& p, std::size_t user) {
  if (user >= p.user_count()) throw Error(ErrorCode::unknown_user, "#" + std::to_string(user));
  if (p.user_count() < 2)
    throw Error(ErrorCode::would_be_empty, "removing '" + p.users()[user] + "' leaves no users");
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < p.user_count(); ++j)
    if (j != user) keep.push_back(j);
  return restrict_users(p, keep);
}

inline StreamingProblem remove_user(const StreamingProblem& p, std::string_view user) {
  return remove_user(p, p.user_index(user));
}

/// Column concatenation of two problems over the same artists and fee.
inline StreamingProblem merge_problems(const StreamingProblem& a, const StreamingProblem& b) {
  if (a.artists() != b.artists()) throw Error(ErrorCode::artist_mismatch, "artist lists differ");
  if (a.fee() != b.fee())
    throw Error(ErrorCode::fee_mismatch, to_string(a.fee()) + " vs " + to_string(b.fee()));
  for (const auto& u : b.users())
    if (std::find(a.users().begin(), a.users().end(), u) != a.users().end())
      throw Error(ErrorCode::overlapping_users, u);
  auto users = a.users();
  users.insert(users.end(), b.users().begin(), b.users().end());
  StreamMatrix t = a.streams();
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i].insert(t[i].end(), b.streams()[i].begin(), b.streams()[i].end());
  return StreamingProblem(a.artists(), std::move(users), std::move(t), a.fee());
}

/// Per-artist nonnegative scores with positive sum.
struct IndexValues {
  RationalVector scores;

  IndexValues() = default;
  explicit IndexValues(RationalVector s) : scores(std::move(s)) {
    for (const auto& x : scores)
      if (sgn(x) < 0) throw Error(ErrorCode::invalid_problem, "negative index score " + to_string(x));
    if (sgn(sum(scores)) <= 0) throw Error(ErrorCode::zero_index_sum, "index scores sum to zero");
  }

  std::size_t size() const noexcept { return scores.size(); }
  const Rational& operator[](std::size_t i) const { return scores[i]; }
  Rational total() const { return sum(scores); }
  friend bool operator==(const IndexValues& a, const IndexValues& b) { return a.scores == b.scores; }
};

/// Per-artist payouts; entries are nonnegative and sum to m * fee.
struct Allocation {
  RationalVector payouts;

  std::size_t size() const noexcept { return payouts.size(); }
  const Rational& operator[](std::size_t i) const { return payouts[i]; }
  Rational total() const { return sum(payouts); }
  friend bool operator==(const Allocation& a, const Allocation& b) { return a.payouts == b.payouts; }
};

}  // namespace streamshare
