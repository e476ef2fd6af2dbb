#pragma once

#include <json.hpp>

#include <charconv>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "streamshare/errors.hpp"
#include "streamshare/problem.hpp"
#include "streamshare/rational.hpp"

namespace streamshare {

enum class ProblemFormat { csv, json };

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    auto end = nl == std::string_view::npos ? text.size() : nl;
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline StreamCount parse_count(std::string_view field, std::size_t line, std::size_t col) {
  field = trim(field);
  if (field.empty()) throw ParseError(line, col, "empty stream count");
  if (field.front() == '-') throw ParseError(line, col, "negative stream count '" + std::string(field) + "'");
  StreamCount value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(line, col, "not a nonnegative integer: '" + std::string(field) + "'");
  return value;
}

inline Rational json_rational(const nlohmann::json& j, const char* what) {
  if (j.is_number_unsigned()) return Rational(j.get<unsigned long>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, 0, std::string(what) + ": " + e.what());
    }
  }
  throw ParseError(0, 0, std::string(what) + " must be an integer or a \"p/q\" string");
}

inline nlohmann::json rational_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

}  // namespace detail

inline StreamingProblem parse_csv(std::string_view text, const Rational& fee = 1) {
  auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(1, 0, "empty input");
  auto header = detail::split_fields(lines[0]);
  if (header.size() < 2) throw ParseError(1, 0, "header needs 'artist' followed by user ids");
  std::vector<std::string> users;
  for (std::size_t k = 1; k < header.size(); ++k) {
    auto id = detail::trim(header[k]);
    if (id.empty()) throw ParseError(1, k + 1, "empty user id");
    users.emplace_back(id);
  }
  std::vector<std::string> artists;
  StreamMatrix t;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto fields = detail::split_fields(lines[ln]);
    if (fields.size() != header.size())
      throw ParseError(ln + 1, 0, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
    auto id = detail::trim(fields[0]);
    if (id.empty()) throw ParseError(ln + 1, 1, "empty artist id");
    artists.emplace_back(id);
    std::vector<StreamCount> row;
    row.reserve(users.size());
    for (std::size_t k = 1; k < fields.size(); ++k) row.push_back(detail::parse_count(fields[k], ln + 1, k + 1));
    t.push_back(std::move(row));
  }
  return StreamingProblem(std::move(artists), std::move(users), std::move(t), fee);
}

/// The fee is not part of the CSV format.
inline std::string serialize_csv(const StreamingProblem& p) {
  std::ostringstream out;
  out << "artist";
  for (const auto& u : p.users()) out << ',' << u;
  out << '\n';
  for (std::size_t i = 0; i < p.artist_count(); ++i) {
    out << p.artists()[i];
    for (std::size_t j = 0; j < p.user_count(); ++j) out << ',' << p(i, j);
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json problem_to_json(const StreamingProblem& p) {
  nlohmann::json j;
  j["artists"] = p.artists();
  j["users"] = p.users();
  j["streams"] = p.streams();
  j["fee"] = detail::rational_json(p.fee());
  return j;
}

inline StreamingProblem problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError(0, 0, "expected a JSON object");
  auto ids = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw ParseError(0, 0, std::string("missing array '") + key + "'");
    std::vector<std::string> out;
    for (const auto& e : j[key]) {
      if (!e.is_string()) throw ParseError(0, 0, std::string("'") + key + "' entries must be strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  };
  auto artists = ids("artists");
  auto users = ids("users");
  if (!j.contains("streams") || !j["streams"].is_array()) throw ParseError(0, 0, "missing array 'streams'");
  StreamMatrix t;
  std::size_t r = 0;
  for (const auto& row : j["streams"]) {
    ++r;
    if (!row.is_array()) throw ParseError(r, 0, "'streams' rows must be arrays");
    std::vector<StreamCount> out;
    std::size_t c = 0;
    for (const auto& e : row) {
      ++c;
      if (!e.is_number_integer() || (e.is_number_integer() && !e.is_number_unsigned() && e.get<long>() < 0))
        throw ParseError(r, c, "stream counts must be nonnegative integers, got " + e.dump());
      out.push_back(e.get<StreamCount>());
    }
    t.push_back(std::move(out));
  }
  Rational fee = j.contains("fee") ? detail::json_rational(j["fee"], "fee") : Rational(1);
  return StreamingProblem(std::move(artists), std::move(users), std::move(t), fee);
}

inline StreamingProblem parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(detail::line_of_offset(text, e.byte), 0, e.what());
  }
  return problem_from_json(j);
}

inline std::string serialize_json(const StreamingProblem& p) { return problem_to_json(p).dump(); }

/// `fee` applies to CSV input only; JSON carries its own.
inline StreamingProblem parse_problem(std::string_view bytes, ProblemFormat format, const Rational& fee = 1) {
  return format == ProblemFormat::csv ? parse_csv(bytes, fee) : parse_json(bytes);
}

inline std::string serialize_problem(const StreamingProblem& p, ProblemFormat format) {
  return format == ProblemFormat::csv ? serialize_csv(p) : serialize_json(p);
}

}  // namespace streamshare
