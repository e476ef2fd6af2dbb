#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "streamshare/streamshare.hpp"

using namespace streamshare;
using nlohmann::json;

namespace {

constexpr int exit_input_error = 2;
constexpr int exit_oracle_disagreement = 3;

struct OracleDisagreement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string format;
  std::string output = "table";
  std::string fee;
  unsigned precision = 4;

  std::vector<std::string> methods;
  unsigned long alpha = 20;
  unsigned long beta = 60;
  std::string weights_file;

  std::uint64_t seed = 1;
  std::size_t budget = 1000;
  std::vector<std::string> indices;
  std::vector<std::string> axioms;

  std::string psi = "CEA";
  std::string phi = "P";
};

std::string read_all(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
  buf << in.rdbuf();
  return buf.str();
}

ProblemFormat format_for(const Options& o) {
  if (o.format == "csv") return ProblemFormat::csv;
  if (o.format == "json") return ProblemFormat::json;
  auto ends_with = [&](std::string_view suffix) {
    return o.input.size() >= suffix.size() && o.input.compare(o.input.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".json")) return ProblemFormat::json;
  if (ends_with(".csv")) return ProblemFormat::csv;
  return ProblemFormat::csv;
}

Rational fee_or(const Options& o, const Rational& fallback) {
  if (o.fee.empty()) return fallback;
  try {
    return parse_rational(o.fee);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::non_positive_fee, std::string("--fee: ") + e.what());
  }
}

std::string load_text(const Options& o) {
  if (o.input.empty()) throw Error(ErrorCode::parse_error, "--input is required (use - for stdin)");
  return read_all(o.input);
}

ProblemFormat detect(const Options& o, const std::string& text) {
  if (!o.format.empty() || o.input != "-") return format_for(o);
  auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{' ? ProblemFormat::json : ProblemFormat::csv;
}

StreamingProblem load_problem(const Options& o) {
  auto text = load_text(o);
  auto format = detect(o, text);
  if (format == ProblemFormat::csv) return parse_csv(text, fee_or(o, 1));
  auto p = parse_json(text);
  if (o.fee.empty()) return p;
  return StreamingProblem(p.artists(), p.users(), p.streams(), fee_or(o, p.fee()));
}

Index method_index(const Options& o, const std::string& method) {
  if (method == "weighted-file") {
    if (o.weights_file.empty()) throw Error(ErrorCode::invalid_params, "--method weighted-file needs --weights-file");
    json j;
    try {
      j = json::parse(read_all(o.weights_file));
    } catch (const json::parse_error& e) {
      throw ParseError(0, 0, std::string("weights file: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(0, 0, "weights file must be an object of user -> weight");
    std::map<std::string, Rational, std::less<>> table;
    for (auto& [user, w] : j.items()) table.emplace(user, detail::json_rational(w, "weight"));
    auto omega = table_weight_system(std::move(table));
    omega.name = "weighted-file";
    return weighted(std::move(omega));
  }
  if (method == "banded") return banded({o.alpha, o.beta});
  if (auto index = builtin_index(method, {o.alpha, o.beta})) return *index;
  throw Error(ErrorCode::invalid_params, "unknown method '" + method + "'");
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? std::string(sep) : "") + parts[k];
  return out;
}

/// Fixed-width text table; the first column is left-aligned.
void print_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) std::cout << "  ";
      if (c == 0)
        std::cout << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      else
        std::cout << std::right << std::setw(static_cast<int>(width[c])) << r[c];
    }
    std::cout << "\n";
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  std::cout << std::string(total + 2 * (width.size() - 1), '-') << "\n";
  for (const auto& r : rows) line(r);
}

json rationals_json(const RationalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

int cmd_allocate(const Options& o) {
  if (o.methods.size() > 1) throw Error(ErrorCode::invalid_params, "allocate takes exactly one --method");
  auto p = load_problem(o);
  auto index = method_index(o, o.methods.empty() ? "pro-rata" : o.methods[0]);
  auto scores = index(p);
  auto r = rewards(p, scores);
  if (o.output == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < p.artist_count(); ++i)
      rows.push_back({{"artist", p.artists()[i]}, {"index", to_string(scores[i])}, {"reward", to_string(r[i])}});
    print_json({{"method", index.name}, {"fee", to_string(p.fee())}, {"revenue", to_string(p.revenue())},
                {"allocation", rows}});
    return 0;
  }
  std::cout << "method " << index.name << ", revenue " << to_decimal(p.revenue(), o.precision) << "\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < p.artist_count(); ++i)
    rows.push_back({p.artists()[i], to_decimal(scores[i], o.precision), to_decimal(r[i], o.precision)});
  print_table({"artist", "index", "reward"}, rows);
  return 0;
}

int cmd_compare(const Options& o) {
  auto p = load_problem(o);
  std::vector<std::string> methods = o.methods;
  if (methods.empty()) methods = {"pro-rata", "user-centric", "banded"};
  std::vector<Index> indices;
  for (const auto& m : methods) indices.push_back(method_index(o, m));

  std::vector<IndexValues> scores;
  std::vector<Allocation> allocs;
  for (const auto& index : indices) {
    scores.push_back(index(p));
    allocs.push_back(rewards(p, scores.back()));
  }
  if (o.output == "json") {
    json out = json::array();
    for (std::size_t k = 0; k < indices.size(); ++k)
      out.push_back({{"method", indices[k].name},
                     {"index", rationals_json(scores[k].scores)},
                     {"rewards", rationals_json(allocs[k].payouts)}});
    print_json({{"artists", p.artists()}, {"fee", to_string(p.fee())}, {"methods", out}});
    return 0;
  }
  std::vector<std::string> header = {"artist"};
  for (const auto& index : indices) {
    header.push_back("I[" + index.name + "]");
    header.push_back("R[" + index.name + "]");
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < p.artist_count(); ++i) {
    std::vector<std::string> row = {p.artists()[i]};
    for (std::size_t k = 0; k < indices.size(); ++k) {
      row.push_back(to_decimal(scores[k][i], o.precision));
      row.push_back(to_decimal(allocs[k][i], o.precision));
    }
    rows.push_back(std::move(row));
  }
  print_table(header, rows);
  return 0;
}

int cmd_core_check(const Options& o) {
  if (o.methods.size() > 1) throw Error(ErrorCode::invalid_params, "core-check takes exactly one --method");
  auto p = load_problem(o);
  auto index = method_index(o, o.methods.empty() ? "pro-rata" : o.methods[0]);
  auto x = rewards(p, index(p)).payouts;

  auto flow = in_core_flow(p, x);
  if (flow.decomposition && !is_valid_decomposition(p, x, *flow.decomposition))
    throw OracleDisagreement("flow oracle returned an invalid decomposition");
  std::optional<CoreCheck> direct;
  if (p.artist_count() <= max_players) {
    direct = in_core_direct(streaming_game(p), x);
    if (direct->member != flow.member)
      throw OracleDisagreement("direct oracle says " + std::string(direct->member ? "member" : "not member") +
                               ", flow oracle says " + (flow.member ? "member" : "not member"));
  }

  std::optional<std::string> blocking;
  if (direct && direct->blocking) blocking = coalition_key(p.artists(), *direct->blocking);

  if (o.output == "json") {
    json out = {{"method", index.name}, {"allocation", rationals_json(x)}, {"artists", p.artists()},
                {"member", flow.member}, {"flow", flow.member}};
    out["direct"] = direct ? json(direct->member) : json(nullptr);
    out["blocking"] = blocking ? json(*blocking) : json(nullptr);
    if (direct && direct->blocking) {
      Rational xs = 0;
      for (auto i : members(*direct->blocking)) xs += x[i];
      out["blocking_allocation"] = to_string(xs);
      out["blocking_value"] = to_string(streaming_game(p)(*direct->blocking));
    }
    out["decomposition"] = flow.decomposition ? decomposition_to_json(*flow.decomposition) : json(nullptr);
    print_json(out);
    return 0;
  }

  std::cout << "method " << index.name << ": " << (flow.member ? "IN CORE" : "NOT IN CORE") << "\n";
  std::cout << "  flow oracle:   " << (flow.member ? "member" : "not member") << "\n";
  if (direct)
    std::cout << "  direct oracle: " << (direct->member ? "member" : "not member") << "\n";
  else
    std::cout << "  direct oracle: skipped (" << p.artist_count() << " artists > " << max_players << ")\n";
  if (direct && !direct->efficient) std::cout << "  allocation is not efficient\n";
  if (direct && direct->blocking) {
    Rational xs = 0;
    for (auto i : members(*direct->blocking)) xs += x[i];
    std::cout << "  blocking coalition {" << *blocking << "}: x(S) = " << to_decimal(xs, o.precision)
              << " < v(S) = " << to_decimal(streaming_game(p)(*direct->blocking), o.precision) << "\n";
  }
  if (flow.decomposition) {
    std::cout << "decomposition (fee split of each user):\n";
    std::vector<std::string> header = {"user"};
    for (const auto& a : p.artists()) header.push_back(a);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < p.user_count(); ++j) {
      std::vector<std::string> row = {p.users()[j]};
      for (const auto& s : flow.decomposition->shares[j]) row.push_back(to_decimal(s, o.precision));
      rows.push_back(std::move(row));
    }
    print_table(header, rows);
  }
  return 0;
}

std::vector<Index> axiom_indices(const Options& o) {
  std::vector<std::string> names = o.indices;
  if (names.empty()) names = {"pro-rata", "user-centric", "I1", "I2", "I3", "I4", "I5", "banded"};
  std::vector<Index> out;
  for (const auto& n : names) out.push_back(method_index(o, n));
  return out;
}

std::vector<Axiom> axiom_list(const Options& o) {
  if (o.axioms.empty()) return {std::begin(all_axioms), std::end(all_axioms)};
  std::vector<Axiom> out;
  for (const auto& n : o.axioms) {
    auto a = parse_axiom(n);
    if (!a) throw Error(ErrorCode::invalid_params, "unknown axiom '" + n + "'");
    out.push_back(*a);
  }
  return out;
}

int cmd_axioms(const Options& o) {
  auto indices = axiom_indices(o);
  auto axioms = axiom_list(o);
  GeneratorConfig config;
  config.seed = o.seed;
  auto table = axiom_matrix(indices, axioms, config, o.budget);
  for (std::size_t r = 0; r < indices.size(); ++r)
    for (std::size_t c = 0; c < axioms.size(); ++c) {
      const auto& cell = table.at(r, c);
      if (cell.failed() && !reproduces_violation(indices[r], cell))
        throw OracleDisagreement("witness for " + cell.index + " / " + std::string(name_of(cell.axiom)) +
                                 " does not re-check");
    }

  if (o.output == "json") {
    print_json({{"seed", o.seed}, {"budget", o.budget}, {"cells", table_to_json(table)}});
    return 0;
  }
  std::vector<std::string> header = {"index"};
  for (auto a : axioms) header.emplace_back(name_of(a));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    std::vector<std::string> row = {table.indices[r]};
    for (std::size_t c = 0; c < axioms.size(); ++c) row.emplace_back(name_of(table.at(r, c).status));
    rows.push_back(std::move(row));
  }
  print_table(header, rows);
  for (const auto& cell : table.cells) {
    if (!cell.failed() || !cell.witness) continue;
    const auto& w = *cell.witness;
    std::cout << "\n" << cell.index << " fails " << name_of(cell.axiom) << ": " << w.relation << " broken, lhs "
              << to_string(w.lhs) << ", rhs " << to_string(w.rhs) << "\n";
    std::cout << serialize_csv(w.problem);
    if (w.other) std::cout << "perturbed:\n" << serialize_csv(*w.other);
  }
  return 0;
}

int cmd_game(const Options& o) {
  auto p = load_problem(o);
  if (p.artist_count() > max_players) {
    // Dividends come straight from the listened sets, so they need no table.
    std::map<std::vector<std::size_t>, std::size_t> counts;
    for (std::size_t j = 0; j < p.user_count(); ++j) ++counts[listened_set(p, j)];
    std::string notice = std::to_string(p.artist_count()) + " artists exceed " + std::to_string(max_players) +
                         "; coalition table skipped, flow-only mode";
    if (o.output == "json") {
      json div = json::object();
      for (const auto& [set, count] : counts) {
        std::vector<std::string> ids;
        for (auto i : set) ids.push_back(p.artists()[i]);
        div[join(ids, ",")] = to_string(p.fee() * Rational(static_cast<unsigned long>(count)));
      }
      print_json({{"players", p.artists()}, {"notice", notice}, {"dividends", div}});
      return 0;
    }
    std::cout << "notice: " << notice << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& [set, count] : counts) {
      std::vector<std::string> ids;
      for (auto i : set) ids.push_back(p.artists()[i]);
      rows.push_back({"{" + join(ids, ",") + "}", to_decimal(p.fee() * Rational(static_cast<unsigned long>(count)), o.precision)});
    }
    print_table({"coalition", "dividend"}, rows);
    return 0;
  }

  auto v = streaming_game(p);
  auto d = harsanyi_dividends(v);
  auto sm = is_supermodular(v);
  if (!(reconstruct_from_dividends(d, p.artists()) == v))
    throw OracleDisagreement("dividends do not reconstruct the game");

  if (o.output == "json") {
    json out = {{"players", p.artists()}, {"values", game_to_json(v)["values"]},
                {"dividends", dividends_to_json(d)["dividends"]}, {"supermodular", sm.supermodular}};
    if (!sm.supermodular)
      out["violation"] = {{"smaller", coalition_key(p.artists(), sm.smaller)},
                          {"larger", coalition_key(p.artists(), sm.larger)},
                          {"player", p.artists()[sm.player]}};
    print_json(out);
    return 0;
  }
  std::vector<std::vector<std::string>> rows;
  for (Coalition s = 1; s < v.coalition_count(); ++s) {
    if (v(s) == 0 && d.values[s] == 0) continue;
    rows.push_back({"{" + coalition_key(p.artists(), s) + "}", to_decimal(v(s), o.precision),
                    to_decimal(d.values[s], o.precision)});
  }
  print_table({"coalition", "v", "dividend"}, rows);
  std::cout << "coalitions with v = 0 and zero dividend omitted\n";
  std::cout << "supermodular: " << (sm.supermodular ? "yes" : "no") << "\n";
  return 0;
}

ClaimsRule parse_rule(const std::string& name) {
  if (name == "P" || name == "proportional") return ClaimsRule::proportional;
  if (name == "CEA" || name == "cea") return ClaimsRule::cea;
  throw Error(ErrorCode::invalid_params, "unknown claims rule '" + name + "' (P or CEA)");
}

int cmd_claims(const Options& o) {
  auto first = parse_rule(o.psi);
  auto second = parse_rule(o.phi);
  auto text = load_text(o);
  std::optional<MultiIssueClaims> mic;
  if (detect(o, text) == ProblemFormat::json) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(0, 0, e.what());
    }
    if (j.contains("agents")) mic = claims_from_json(j);
  }
  if (!mic) {
    auto format = detect(o, text);
    auto p = format == ProblemFormat::csv ? parse_csv(text, fee_or(o, 1)) : parse_json(text);
    if (format == ProblemFormat::json && !o.fee.empty())
      p = StreamingProblem(p.artists(), p.users(), p.streams(), fee_or(o, p.fee()));
    mic = streaming_to_claims(p);
  }
  auto awards = two_stage_rule(*mic, first, second);
  std::string rule = "R[" + std::string(name_of(first)) + "," + std::string(name_of(second)) + "]";
  if (o.output == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < awards.size(); ++i)
      rows.push_back({{"agent", mic->agents()[i]}, {"award", to_string(awards[i])}});
    print_json({{"rule", rule}, {"endowment", to_string(mic->endowment())}, {"awards", rows}});
    return 0;
  }
  std::cout << "rule " << rule << ", endowment " << to_decimal(mic->endowment(), o.precision) << "\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < awards.size(); ++i)
    rows.push_back({mic->agents()[i], to_decimal(awards[i], o.precision)});
  print_table({"agent", "award"}, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Revenue allocation for music-streaming subscription problems"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("-i,--input", o.input, "Problem file, or - for stdin");
    sub->add_option("--format", o.format, "csv or json (default: from the file extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--fee", o.fee, "Per-user fee as p/q; overrides the fee of a JSON input");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", o.output, "table or json")->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--precision", o.precision, "Decimal places in table output (display only)");
  };
  auto add_method = [&](CLI::App* sub, bool many) {
    auto* opt = sub->add_option("--method", o.methods,
                                "pro-rata, user-centric, banded, weighted-file or I1..I5");
    if (many) opt->delimiter(',');
    sub->add_option("--alpha", o.alpha, "Banded lower threshold");
    sub->add_option("--beta", o.beta, "Banded upper threshold");
    sub->add_option("--weights-file", o.weights_file, "JSON object user -> weight for weighted-file");
  };

  auto* allocate = app.add_subcommand("allocate", "Rewards under one index");
  add_input(allocate);
  add_common(allocate);
  add_method(allocate, false);

  auto* compare = app.add_subcommand("compare", "Index values and rewards side by side");
  add_input(compare);
  add_common(compare);
  add_method(compare, true);

  auto* core = app.add_subcommand("core-check", "Core membership of an index's rewards, by both oracles");
  add_input(core);
  add_common(core);
  add_method(core, false);

  auto* axioms = app.add_subcommand("axioms", "Axiom matrix by seeded witness search");
  add_common(axioms);
  axioms->add_option("--seed", o.seed, "Generator seed");
  axioms->add_option("--budget", o.budget, "Random problems per cell (0: fixed examples only)");
  axioms->add_option("--indices", o.indices, "Comma-separated index names")->delimiter(',');
  axioms->add_option("--axioms", o.axioms, "Comma-separated axiom names")->delimiter(',');
  axioms->add_option("--alpha", o.alpha, "Banded lower threshold");
  axioms->add_option("--beta", o.beta, "Banded upper threshold");

  auto* game = app.add_subcommand("game", "Coalition values, dividends and supermodularity");
  add_input(game);
  add_common(game);

  auto* claims = app.add_subcommand("claims", "Two-stage claims rule");
  add_input(claims);
  add_common(claims);
  claims->add_option("--psi", o.psi, "Rule across issues: P or CEA");
  claims->add_option("--phi", o.phi, "Rule within each issue: P or CEA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input_error;
  }

  try {
    if (*allocate) return cmd_allocate(o);
    if (*compare) return cmd_compare(o);
    if (*core) return cmd_core_check(o);
    if (*axioms) return cmd_axioms(o);
    if (*game) return cmd_game(o);
    if (*claims) return cmd_claims(o);
  } catch (const OracleDisagreement& e) {
    std::cerr << "error: oracle disagreement: " << e.what() << "\n";
    return exit_oracle_disagreement;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}
