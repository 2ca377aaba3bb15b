#pragma once

#include "zparam/data.hpp"
#include "zparam/error.hpp"
#include "zparam/model.hpp"
#include "zparam/train.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zparam::cli {

enum class Command { train, grid, reproduce, small_s, gradcheck };

struct CliConfig {
  Command command = Command::train;
  std::vector<std::size_t> d1_list; // one entry except for `reproduce`
  std::optional<ParamKind> param;
  std::optional<double> eta;
  std::vector<double> etas; // grid points for `grid`
  std::size_t epochs = 1500;
  std::uint64_t seed = 0;
  std::vector<double> s0_list{1.0};
  std::optional<std::size_t> runs;
  std::filesystem::path out = "results";
  std::size_t workers = 1;
  TargetEncoding targets = TargetEncoding::plus_minus_one;
  UpdateMode update = UpdateMode::online;
  bool dump_params = false;

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

// Thrown by parse_args. what() is the text to show (usage, help or the
// problem); exit_code() is 0 for --help and 2 otherwise.
class UsageError : public Error {
public:
  UsageError(const std::string& text, int exit_code) : Error(text), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

private:
  int exit_code_;
};

// `args` excludes the program name. Every flag is validated here, before any
// computation starts.
CliConfig parse_args(const std::vector<std::string>& args);

// Runs the command: 0 on success, 1 when divergence dominates (or a gradient
// check fails), 2 on usage errors found late, 3 on I/O failure.
int run_cli(const CliConfig& config, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv);

} // namespace zparam::cli
