#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "sparsebell/rational.hpp"

namespace sparsebell::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,
  kExitUsage = 2,
  kExitResource = 3,
};

enum class Command { eval, construct, check, search, table, validate };
enum class OutputFormat { text, json, csv };

/// Fully parsed and range-checked arguments of one invocation.
struct RunConfig {
  Command command = Command::eval;
  std::optional<GeneralRational> C;
  GeneralRational A;
  GeneralRational lambda;
  unsigned depth = 4;
  unsigned grid_exp = 6;
  long lambda_min = -2;
  long lambda_max = 6;
  long m = 1;
  long m_max = 4;
  std::string target = "candidate";  // check: candidate | counterexample | c1 | c2 | c32
  std::string style = "roof";        // construct: roof | partition
  std::string kind = "surface";      // table: surface | dp
  std::optional<unsigned> report_convergence;
  std::string emit_witness;
  std::string output;
  std::string input;
  OutputFormat format = OutputFormat::text;
  std::uint64_t seed = 0;
  unsigned sampled_lambdas = 0;
  unsigned threads = 1;
  std::size_t max_report = 10;

  std::string resolved;  // key = value lines of every option after parsing
};

/// Parses argv, echoes the resolved config to `err`, and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace sparsebell::cli
