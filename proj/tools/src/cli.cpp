#include "sparsebell_cli/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "sparsebell/errors.hpp"
#include "sparsebell/extremal_dp.hpp"

namespace sparsebell::cli {

namespace {

GeneralRational rational_flag(std::string_view flag, const std::string& text) {
  try {
    return GeneralRational::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(std::string(flag) + ": " + e.what());
  }
}

struct RawOptions {
  std::string C;
  std::string A = "0";
  std::string lambda = "1";
  std::string format = "text";
  unsigned report_convergence = 0;
};

void add_C(CLI::App* cmd, RawOptions& raw, bool required) {
  auto* opt = cmd->add_option("--C", raw.C, "Carleson bound, a rational >= 1 (p/q, p/2^e, 3.2)");
  if (required) opt->required();
}

void add_output(CLI::App* cmd, RunConfig& cfg, RawOptions& raw, std::vector<std::string> formats) {
  cmd->add_option("--output,-o", cfg.output, "Artifact path (default: stdout)");
  cmd->add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember(std::move(formats)))
      ->capture_default_str();
}

void resolve_C(RunConfig& cfg, const RawOptions& raw) {
  if (raw.C.empty()) return;
  cfg.C = rational_flag("--C", raw.C);
  if (*cfg.C < GeneralRational(1)) {
    throw ContractError("--C: must be >= 1, got " + cfg.C->to_string());
  }
}

void require_A_in_domain(const RunConfig& cfg) {
  if (cfg.A.sign() < 0 || cfg.A > *cfg.C) {
    throw ContractError("--A: " + cfg.A.to_string() + " outside the valid range [0, " +
                        cfg.C->to_string() + "]");
  }
}

}  // namespace

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move artifact into place at " + path.string());
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Bellman-function and sparse-sequence toolkit", "sparsebell"};
  app.set_version_flag("--version", std::string(SPARSEBELL_VERSION));
  app.set_config("--config", "", "Key-value config file with the same keys as the flags");
  app.require_subcommand(1);

  RunConfig cfg;
  RawOptions raw;

  auto* eval = app.add_subcommand("eval", "Evaluate the candidate G_C(A, lambda) exactly");
  add_C(eval, raw, true);
  eval->add_option("--A", raw.A, "Average in [0, C]")->required();
  eval->add_option("--lambda", raw.lambda, "Level, any rational")->required();
  eval->add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto* construct = app.add_subcommand("construct", "Build a C-Carleson sequence with root average A");
  add_C(construct, raw, true);
  construct->add_option("--A", raw.A, "Target average, dyadic")->required();
  construct->add_option("--depth", cfg.depth, "Tree depth")
      ->check(CLI::Range(0u, CarlesonSeq::kMaxDepth))
      ->capture_default_str();
  construct->add_option("--style", cfg.style, "Construction style")
      ->check(CLI::IsMember({"roof", "partition"}))
      ->capture_default_str();
  construct->add_option("--output,-o", cfg.output, "Sequence JSON path (default: stdout)");

  auto* check = app.add_subcommand("check", "Verify the supersolution inequalities on a grid");
  add_C(check, raw, true);
  check->add_option("--grid-exp", cfg.grid_exp, "A grid is j / 2^grid-exp")
      ->check(CLI::Range(0u, 20u))
      ->capture_default_str();
  check->add_option("--lambda-min", cfg.lambda_min, "Smallest integer lambda")->capture_default_str();
  check->add_option("--lambda-max", cfg.lambda_max, "Largest integer lambda")->capture_default_str();
  check->add_option("--target", cfg.target, "Function under test")
      ->check(CLI::IsMember({"candidate", "counterexample", "c1", "c2", "c32"}))
      ->capture_default_str();
  check->add_option("--sampled-lambdas", cfg.sampled_lambdas,
                    "Extra seeded non-integer lambdas in [lambda-min, lambda-max]")
      ->check(CLI::Range(0u, 1000u))
      ->capture_default_str();
  check->add_option("--seed", cfg.seed, "Seed for --sampled-lambdas")->capture_default_str();
  check->add_option("--max-report", cfg.max_report, "Violations listed per check")
      ->check(CLI::Range(std::size_t{0}, std::size_t{100000}))
      ->capture_default_str();
  add_output(check, cfg, raw, {"text", "json"});

  auto* search = app.add_subcommand("search", "Extremal level-set value F_D(A, m) by dynamic programming");
  add_C(search, raw, true);
  search->add_option("--depth", cfg.depth, "Tree depth D")
      ->check(CLI::Range(0u, DpLimits::kHardMaxDepth))
      ->capture_default_str();
  search->add_option("--A", raw.A, "Root average on the 2^-D grid")->required();
  search->add_option("--m", cfg.m, "Level")->required();
  search->add_option("--report-convergence", raw.report_convergence,
                     "Also report F_d for every depth d <= Dmax")
      ->check(CLI::Range(0u, DpLimits::kHardMaxDepth));
  search->add_option("--emit-witness", cfg.emit_witness, "Write the extremal sequence as JSON");
  search->add_option("--threads", cfg.threads, "Workers per DP level")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  search->add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();

  auto* table = app.add_subcommand("table", "Export candidate surface or DP table as CSV");
  add_C(table, raw, true);
  table->add_option("--kind", cfg.kind, "Table kind")
      ->check(CLI::IsMember({"surface", "dp"}))
      ->capture_default_str();
  table->add_option("--grid-exp", cfg.grid_exp, "surface: A grid is j / 2^grid-exp")
      ->check(CLI::Range(0u, 20u))
      ->capture_default_str();
  table->add_option("--lambda-min", cfg.lambda_min, "surface: smallest lambda")->capture_default_str();
  table->add_option("--lambda-max", cfg.lambda_max, "surface: largest lambda")->capture_default_str();
  table->add_option("--depth", cfg.depth, "dp: tree depth D")
      ->check(CLI::Range(0u, DpLimits::kHardMaxDepth))
      ->capture_default_str();
  table->add_option("--m-max", cfg.m_max, "dp: largest level")
      ->check(CLI::Range(0L, 64L))
      ->capture_default_str();
  table->add_option("--threads", cfg.threads, "dp: workers per level")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  table->add_option("--output,-o", cfg.output, "CSV path (default: stdout)");

  auto* validate = app.add_subcommand("validate", "Report on a carleson-seq/1 JSON file");
  validate->add_option("input", cfg.input, "Sequence file")->required()->check(CLI::ExistingFile);
  add_C(validate, raw, false);
  validate->add_option("--m-max", cfg.m_max, "Largest level in the level-set table (default depth + 2)")
      ->check(CLI::Range(0L, 64L));
  validate->add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "eval") cfg.command = Command::eval;
    if (name == "construct") cfg.command = Command::construct;
    if (name == "check") cfg.command = Command::check;
    if (name == "search") cfg.command = Command::search;
    if (name == "table") cfg.command = Command::table;
    if (name == "validate") cfg.command = Command::validate;

    resolve_C(cfg, raw);
    cfg.A = rational_flag("--A", raw.A);
    cfg.lambda = rational_flag("--lambda", raw.lambda);
    cfg.format = raw.format == "json" ? OutputFormat::json
                 : raw.format == "csv" ? OutputFormat::csv
                                       : OutputFormat::text;
    auto given = [chosen](const std::string& name) {
      const CLI::Option* opt = chosen->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--report-convergence")) cfg.report_convergence = raw.report_convergence;
    if (cfg.command == Command::validate && !given("--m-max")) cfg.m_max = -1;

    if (cfg.command == Command::eval) require_A_in_domain(cfg);
    if ((cfg.command == Command::check || cfg.command == Command::table) &&
        cfg.lambda_min > cfg.lambda_max) {
      throw ContractError("--lambda-min: " + std::to_string(cfg.lambda_min) +
                          " exceeds --lambda-max " + std::to_string(cfg.lambda_max));
    }
    if (cfg.command == Command::check || (cfg.command == Command::table && cfg.kind == "surface")) {
      for (const long l : {cfg.lambda_min, cfg.lambda_max}) {
        if (l < -(1L << 16) || l > (1L << 16)) {
          throw ContractError("--lambda-min/--lambda-max: must lie in [-65536, 65536]");
        }
      }
    }
    if (cfg.command == Command::search && cfg.report_convergence && *cfg.report_convergence < cfg.depth) {
      throw ContractError("--report-convergence: must be >= --depth (" + std::to_string(cfg.depth) + ")");
    }

    cfg.resolved = chosen->config_to_str(true, false);
    err << "# resolved config\n";
    std::istringstream lines(cfg.resolved);
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) err << "#   " << line << '\n';
    }
    return dispatch(cfg, out, err);
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace sparsebell::cli
