#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace streamshare {

enum class ErrorCode {
  empty_user_column,
  dimension_mismatch,
  non_positive_fee,
  all_zero_matrix,
  duplicate_identifier,
  unknown_artist,
  unknown_user,
  would_be_empty,
  artist_mismatch,
  overlapping_users,
  fee_mismatch,
  parse_error,
  non_positive_weight,
  zero_index_sum,
  invalid_params,
  premise_violated,
  invalid_partition,
  too_many_players,
  not_in_core,
  invalid_problem,
  weight_contract_violated,
};

inline std::string_view name_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::empty_user_column: return "EmptyUserColumn";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::non_positive_fee: return "NonPositiveFee";
    case ErrorCode::all_zero_matrix: return "AllZeroMatrix";
    case ErrorCode::duplicate_identifier: return "DuplicateIdentifier";
    case ErrorCode::unknown_artist: return "UnknownArtist";
    case ErrorCode::unknown_user: return "UnknownUser";
    case ErrorCode::would_be_empty: return "WouldBeEmpty";
    case ErrorCode::artist_mismatch: return "ArtistMismatch";
    case ErrorCode::overlapping_users: return "OverlappingUsers";
    case ErrorCode::fee_mismatch: return "FeeMismatch";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::non_positive_weight: return "NonPositiveWeight";
    case ErrorCode::zero_index_sum: return "ZeroIndexSum";
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::premise_violated: return "PremiseViolated";
    case ErrorCode::invalid_partition: return "InvalidPartition";
    case ErrorCode::too_many_players: return "TooManyPlayers";
    case ErrorCode::not_in_core: return "NotInCore";
    case ErrorCode::invalid_problem: return "InvalidProblem";
    case ErrorCode::weight_contract_violated: return "WeightContractViolated";
  }
  return "Unknown";
}

/// All library failures. `code()` identifies the failure; `what()` carries
/// "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(name_of(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Parse failure with a 1-based line and field location (0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t field, const std::string& message)
      : Error(ErrorCode::parse_error, "line " + std::to_string(line) + ", field " +
                                          std::to_string(field) + ": " + message),
        line_(line),
        field_(field) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::size_t field_;
};

}  // namespace streamshare
