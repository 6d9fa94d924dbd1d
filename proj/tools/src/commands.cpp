#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "sparsebell/admissible.hpp"
#include "sparsebell/candidate.hpp"
#include "sparsebell/carleson_seq.hpp"
#include "sparsebell/errors.hpp"
#include "sparsebell/extremal_dp.hpp"
#include "sparsebell/supersolution.hpp"
#include "sparsebell_cli/cli.hpp"

namespace sparsebell::cli {

namespace {

using nlohmann::ordered_json;

std::string_view command_name(Command c) {
  switch (c) {
    case Command::eval: return "eval";
    case Command::construct: return "construct";
    case Command::check: return "check";
    case Command::search: return "search";
    case Command::table: return "table";
    case Command::validate: return "validate";
  }
  return "?";
}

/// Integers without the "/1".
std::string pretty(const GeneralRational& x) {
  return x.is_integer() ? x.numerator().get_str() : x.to_string();
}

std::string point(const BellmanPoint& p) {
  return "(" + pretty(p.A) + ", " + pretty(p.lambda) + ")";
}

std::string address(NodeAddress a) {
  return "(" + std::to_string(a.level) + ", " + std::to_string(a.index) + ")";
}

std::vector<std::string> config_lines(const RunConfig& cfg) {
  std::vector<std::string> lines;
  std::istringstream in(cfg.resolved);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

/// '#' comment block heading every CSV and text artifact.
std::string provenance_comment(const RunConfig& cfg, std::string_view grid) {
  std::ostringstream os;
  os << "# sparsebell " << SPARSEBELL_VERSION << " " << command_name(cfg.command) << '\n';
  for (const auto& line : config_lines(cfg)) os << "# config: " << line << '\n';
  os << "# grid: " << grid << '\n';
  return os.str();
}

ordered_json provenance_json(const RunConfig& cfg, std::string_view grid) {
  ordered_json p;
  p["tool"] = "sparsebell";
  p["version"] = SPARSEBELL_VERSION;
  p["command"] = command_name(cfg.command);
  p["config"] = config_lines(cfg);
  p["grid"] = grid;
  return p;
}

/// Sequence files stay in the bare interchange format; provenance goes next to them.
void write_sequence(const RunConfig& cfg, const std::string& path, const CarlesonSeq& seq,
                    std::string_view grid) {
  write_atomic(path, to_json(seq) + "\n");
  write_atomic(path + ".provenance.json", provenance_json(cfg, grid).dump(2) + "\n");
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_atomic(cfg.output, text);
  }
}

// ------------------------------------------------------------------ eval

int run_eval(const RunConfig& cfg, std::ostream& out) {
  const auto params = CandidateParams::make(*cfg.C);
  const GeneralRational value = candidate_eval(params, {cfg.A, cfg.lambda});
  if (cfg.format == OutputFormat::json) {
    ordered_json j;
    j["C"] = cfg.C->to_string();
    j["A"] = cfg.A.to_string();
    j["lambda"] = cfg.lambda.to_string();
    j["value"] = value.to_string();
    out << j.dump() << '\n';
  } else {
    out << value << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------------ construct

int run_construct(const RunConfig& cfg, std::ostream& out) {
  const auto style = cfg.style == "partition" ? ConstructionStyle::partition : ConstructionStyle::roof;
  const CarlesonSeq seq = construct_admissible(cfg.A, *cfg.C, cfg.depth, style);
  if (cfg.output.empty()) {
    out << to_json(seq) << '\n';
    return kExitOk;
  }
  const auto report = validate(seq, *cfg.C);
  write_sequence(cfg, cfg.output, seq, "depth " + std::to_string(seq.depth()));
  out << "wrote " << cfg.output << ": depth " << seq.depth() << ", " << seq.selected().size()
      << " selected, root average " << report.average_at_root << ", Carleson constant "
      << report.carleson_constant << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ check

BellmanFunction check_target(const RunConfig& cfg) {
  const GeneralRational& C = *cfg.C;
  auto require_C = [&](const GeneralRational& expected) {
    if (C != expected) {
      throw ContractError("--target " + cfg.target + ": needs --C " + pretty(expected) + ", got " +
                          pretty(C));
    }
  };
  if (cfg.target == "counterexample") return counterexample_function(C);
  if (cfg.target == "c1") {
    require_C(1);
    return c1_function();
  }
  if (cfg.target == "c2") {
    require_C(2);
    return c2_function();
  }
  if (cfg.target == "c32") {
    require_C(GeneralRational(16, 5));
    return c32_function();
  }
  return candidate_function(C);
}

/// Seeded lambdas with denominator 16 strictly between integers of the range.
std::vector<GeneralRational> sampled_lambdas(const RunConfig& cfg) {
  if (cfg.sampled_lambdas == 0) return {};
  if (cfg.lambda_min == cfg.lambda_max) {
    throw ContractError("--sampled-lambdas: needs --lambda-min < --lambda-max");
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<long> pick(cfg.lambda_min * 16, cfg.lambda_max * 16);
  std::vector<GeneralRational> out;
  while (out.size() < cfg.sampled_lambdas) {
    const long n = pick(rng);
    if (n % 16 != 0) out.emplace_back(BigInt(n), BigInt(16));
  }
  return out;
}

std::string describe(const Violation& v) {
  std::string pts;
  for (std::size_t i = 0; i < v.points.size(); ++i) {
    if (i > 0) pts += i + 1 == v.points.size() ? " -> " : ", ";
    pts += point(v.points[i]);
  }
  return std::string(to_string(v.kind)) + ": " + pts + ": lhs " + pretty(v.lhs) + " < rhs " +
         pretty(v.rhs);
}

ordered_json report_json(const CheckReport& r) {
  ordered_json j;
  j["checked"] = r.checked;
  j["violations"] = r.violations;
  ordered_json list = ordered_json::array();
  for (const auto& v : r.recorded) {
    ordered_json item;
    ordered_json pts = ordered_json::array();
    for (const auto& p : v.points) pts.push_back({p.A.to_string(), p.lambda.to_string()});
    item["points"] = pts;
    item["lhs"] = v.lhs.to_string();
    item["rhs"] = v.rhs.to_string();
    list.push_back(item);
  }
  j["recorded"] = list;
  return j;
}

int run_check(const RunConfig& cfg, std::ostream& out) {
  const BellmanFunction fn = check_target(cfg);
  CheckGrid grid = CheckGrid::make(*cfg.C, cfg.grid_exp, cfg.lambda_min, cfg.lambda_max,
                                   sampled_lambdas(cfg));
  grid.max_recorded = cfg.max_report;

  const CheckReport obstacle = check_obstacle(fn, grid);
  const MainInequalityReport main = check_main_inequality(fn, grid);
  const std::vector<const CheckReport*> reports = {&obstacle, &main.concavity, &main.jump, &main.main};
  const bool ok = std::all_of(reports.begin(), reports.end(), [](auto* r) { return r->ok(); });

  std::optional<LemmaCoverage> coverage;
  if (cfg.target == "candidate") coverage = lemma_case_coverage(CandidateParams::make(*cfg.C), grid);

  const std::string grid_text = grid.describe();
  if (cfg.format == OutputFormat::json) {
    ordered_json j;
    if (!cfg.output.empty()) j["provenance"] = provenance_json(cfg, grid_text);
    j["function"] = fn.name;
    j["C"] = cfg.C->to_string();
    j["grid"] = grid_text;
    for (const auto* r : reports) j[std::string(to_string(r->kind))] = report_json(*r);
    j["lemma_equivalence"] = main.lemma_equivalence;
    if (coverage) {
      ordered_json c;
      for (std::size_t i = 0; i < coverage->concavity.size(); ++i) {
        c["concavity"][std::string(LemmaCoverage::kConcavityCases[i])] = coverage->concavity[i];
      }
      for (std::size_t i = 0; i < coverage->jump.size(); ++i) {
        c["jump"][std::string(LemmaCoverage::kJumpCases[i])] = coverage->jump[i];
      }
      c["all_top_level_cases"] = coverage->all_top_level_cases();
      j["coverage"] = c;
    }
    j["ok"] = ok;
    emit(cfg, out, j.dump(2) + "\n");
    return ok ? kExitOk : kExitViolations;
  }

  std::ostringstream os;
  if (!cfg.output.empty()) os << provenance_comment(cfg, grid_text);
  os << "function: " << fn.name << " (C = " << pretty(*cfg.C) << ")\n";
  os << "grid: " << grid_text << '\n';
  for (const auto* r : reports) {
    os << to_string(r->kind) << ": checked " << r->checked << ", violations " << r->violations << '\n';
  }
  os << "lemma equivalence: " << (main.lemma_equivalence ? "holds" : "fails") << '\n';
  if (coverage) {
    os << "coverage concavity:";
    for (std::size_t i = 0; i < coverage->concavity.size(); ++i) {
      os << ' ' << LemmaCoverage::kConcavityCases[i] << '=' << coverage->concavity[i];
    }
    os << "\ncoverage jump:";
    for (std::size_t i = 0; i < coverage->jump.size(); ++i) {
      os << ' ' << LemmaCoverage::kJumpCases[i] << '=' << coverage->jump[i];
    }
    os << '\n';
  }
  for (const auto* r : reports) {
    for (const auto& v : r->recorded) os << "violation " << describe(v) << '\n';
  }
  os << (ok ? "result: supersolution on the grid\n" : "result: violations found\n");
  emit(cfg, out, os.str());
  return ok ? kExitOk : kExitViolations;
}

// ------------------------------------------------------------------ search

int run_search(const RunConfig& cfg, std::ostream& out) {
  const DyadicRational a = DyadicRational::from_rational(cfg.A);
  DpLimits limits = DpLimits::from_env();
  limits.threads = cfg.threads;

  const DpResult result = dp_max_levelset(*cfg.C, cfg.depth, a, cfg.m, limits);
  const GeneralRational candidate =
      candidate_eval(CandidateParams::make(*cfg.C), {cfg.A, GeneralRational(cfg.m)});
  std::vector<ConvergenceEntry> convergence;
  if (cfg.report_convergence) {
    convergence = convergence_report(*cfg.C, a, cfg.m, *cfg.report_convergence, limits);
  } else {
    convergence.push_back({cfg.depth, result.value, candidate, candidate - result.value.to_rational()});
  }

  if (!cfg.emit_witness.empty()) {
    write_sequence(cfg, cfg.emit_witness, result.witness,
                   "DP depth " + std::to_string(cfg.depth) + ", a = " + a.to_string() +
                       ", m = " + std::to_string(cfg.m));
  }

  if (cfg.format == OutputFormat::csv) {
    out << "depth,a,m,value,candidate,gap\n";
    for (const auto& e : convergence) {
      out << e.depth << ',' << a << ',' << cfg.m << ',' << e.value << ',' << e.candidate << ','
          << e.gap << '\n';
    }
    return kExitOk;
  }
  if (cfg.format == OutputFormat::json) {
    ordered_json j;
    j["C"] = cfg.C->to_string();
    j["depth"] = cfg.depth;
    j["a"] = a.to_string();
    j["m"] = cfg.m;
    j["value"] = result.value.to_string();
    j["candidate"] = candidate.to_string();
    j["witness"] = ordered_json::parse(to_json(result.witness));
    ordered_json rows = ordered_json::array();
    for (const auto& e : convergence) {
      rows.push_back({{"depth", e.depth},
                      {"value", e.value.to_string()},
                      {"gap", e.gap.to_string()}});
    }
    j["convergence"] = rows;
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  const auto check = validate(result.witness, *cfg.C);
  out << "F_" << cfg.depth << "(" << pretty(cfg.A) << ", " << cfg.m << ") = " << result.value
      << '\n';
  out << "candidate: " << candidate << ", gap: " << candidate - result.value.to_rational() << '\n';
  out << "witness: " << result.witness.selected().size() << " selected, root average "
      << check.average_at_root << ", Carleson constant " << check.carleson_constant << '\n';
  if (cfg.report_convergence) {
    out << "convergence (depth value gap):\n";
    for (const auto& e : convergence) {
      out << "  " << e.depth << ' ' << e.value << ' ' << e.gap << '\n';
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------ table

int run_table(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream os;
  if (cfg.kind == "surface") {
    const auto params = CandidateParams::make(*cfg.C);
    const auto rows = candidate_surface(params, cfg.grid_exp, cfg.lambda_min, cfg.lambda_max);
    os << provenance_comment(cfg, "A in {j/2^" + std::to_string(cfg.grid_exp) + "} on [0, " +
                                      pretty(*cfg.C) + "]; integer lambda in [" +
                                      std::to_string(cfg.lambda_min) + ", " +
                                      std::to_string(cfg.lambda_max) + "]");
    write_surface_csv(os, rows);
  } else {
    DpLimits limits = DpLimits::from_env();
    limits.threads = cfg.threads;
    const auto rows = dp_table(*cfg.C, cfg.depth, cfg.m_max, limits);
    os << provenance_comment(cfg, "a in {j/2^" + std::to_string(cfg.depth) + "} on [0, min(" +
                                      pretty(*cfg.C) + ", " + std::to_string(cfg.depth + 1) +
                                      ")]; m in [0, " + std::to_string(cfg.m_max) + "]");
    write_dp_csv(os, rows);
  }
  emit(cfg, out, os.str());
  return kExitOk;
}

// ------------------------------------------------------------------ validate

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
  CarlesonSeq seq;
  try {
    seq = seq_from_json(read_file(cfg.input));
  } catch (const ParseError& e) {
    throw ParseError(cfg.input + ": " + e.what());
  }
  const CarlesonBound bound = carleson_constant(seq);
  const DyadicRational average = seq.carleson_average(NodeAddress::root());
  const long m_max = cfg.m_max >= 0 ? cfg.m_max : static_cast<long>(seq.depth()) + 2;
  const auto generations = sparse_generations(seq);
  std::optional<ValidationReport> report;
  if (cfg.C) report = validate(seq, *cfg.C);
  const bool ok = !report || report->is_C_carleson;

  if (cfg.format == OutputFormat::json) {
    ordered_json j;
    j["file"] = cfg.input;
    j["depth"] = seq.depth();
    j["selected"] = seq.selected().size();
    j["average"] = average.to_string();
    j["carleson_constant"] = bound.constant.to_string();
    j["witness"] = {bound.witness.level, bound.witness.index};
    if (report) {
      j["C"] = cfg.C->to_string();
      j["is_C_carleson"] = report->is_C_carleson;
    }
    ordered_json gens = ordered_json::array();
    for (unsigned g = 0; g < generations.size(); ++g) {
      gens.push_back(generation_measure(seq, g).to_string());
    }
    j["generation_measures"] = gens;
    ordered_json levels = ordered_json::array();
    for (long m = 0; m <= m_max; ++m) {
      levels.push_back({{"m", m}, {"V", level_set_measure(seq, m).to_string()}});
    }
    j["level_sets"] = levels;
    out << j.dump(2) << '\n';
    return ok ? kExitOk : kExitViolations;
  }

  out << "file: " << cfg.input << '\n';
  out << "depth: " << seq.depth() << '\n';
  out << "selected: " << seq.selected().size() << '\n';
  out << "root average: " << average << '\n';
  out << "Carleson constant: " << bound.constant << " at " << address(bound.witness) << '\n';
  if (report) {
    out << "C-Carleson for C = " << pretty(*cfg.C) << ": " << (report->is_C_carleson ? "yes" : "no");
    if (!report->is_C_carleson) out << " (average " << report->carleson_constant << " at " << address(report->worst_witness) << ")";
    out << '\n';
  }
  out << "generation measures:\n";
  for (unsigned g = 0; g < generations.size(); ++g) {
    out << "  |S^" << g << "| = " << generation_measure(seq, g) << " (" << generations[g].size()
        << " intervals)\n";
  }
  out << "level sets:\n";
  for (long m = 0; m <= m_max; ++m) out << "  V_" << m << " = " << level_set_measure(seq, m) << '\n';
  return ok ? kExitOk : kExitViolations;
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  switch (cfg.command) {
    case Command::eval: return run_eval(cfg, out);
    case Command::construct: return run_construct(cfg, out);
    case Command::check: return run_check(cfg, out);
    case Command::search: return run_search(cfg, out);
    case Command::table: return run_table(cfg, out);
    case Command::validate: return run_validate(cfg, out);
  }
  return kExitUsage;
}

}  // namespace sparsebell::cli
