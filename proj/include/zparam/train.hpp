#pragma once

#include "zparam/data.hpp"
#include "zparam/grad.hpp"
#include "zparam/mathcore.hpp"
#include "zparam/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zparam {

std::string_view to_string(ParamKind kind) noexcept;
// Accepts "w" or "z".
ParamKind parse_param_kind(std::string_view text);

// Online updates after every pattern, in index order, is the reproduction
// path. Full batch sums the per-pattern gradients and updates once per epoch.
enum class UpdateMode { online, full_batch };

struct TrainConfig {
  Architecture architecture;
  ParamKind param_kind = ParamKind::z;
  double eta = 0.1;
  std::size_t epochs = 1500;
  std::uint64_t seed = 0;
  double s0 = 1.0;
  UpdateMode update = UpdateMode::online;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Throws InvalidArgument unless eta > 0, epochs >= 1 and s0 > 0.
void validate(const TrainConfig& config);

// One shared starting point for both parametrizations: w == z_to_w(z).
struct InitialParams {
  ZParams z;
  WParams w;
};

// Every node on both layers gets s = s0, c = 0 and u = random_unit_vector of
// its fan-in. Draw order: layer 1 nodes in index order, then layer 2.
InitialParams init_params(const Architecture& arch, double s0, Rng& rng);

struct RunRecord {
  TrainConfig config;
  // Mean over patterns of E, one entry per completed epoch. Each pattern's E
  // is taken from the forward pass that precedes its own update.
  std::vector<double> errors;
  std::variant<WParams, ZParams> final_params;
  // Set when a non-finite E stopped the run; `errors` then holds only the
  // epochs completed before it.
  std::optional<std::size_t> diverged_at;

  bool diverged() const noexcept { return diverged_at.has_value(); }
  // Last epoch's error, or +inf for a diverged run.
  double final_error() const noexcept;
};

// params -= eta * grad, entry-wise.
void apply_update(ZParams& params, const ZGradient& grad, double eta);
void apply_update(WParams& params, const WGradient& grad, double eta);

// Seeds an Rng with config.seed, calls init_params and trains.
RunRecord train_run(const TrainConfig& config, const Dataset& dataset);

// Trains config.param_kind starting from the matching member of `init`.
RunRecord train_from(const TrainConfig& config, const Dataset& dataset, const InitialParams& init);

struct GridPoint {
  double eta = 0.0;
  // Divergent runs count as +inf, so one of them makes the mean +inf.
  double mean_final_error = 0.0;
  std::size_t diverged = 0;
};

struct GridResult {
  double best_eta = 0.0;
  std::vector<GridPoint> points; // ascending eta
};

struct GridSpec {
  Architecture architecture;
  ParamKind param_kind = ParamKind::z;
  std::vector<double> etas;
  std::size_t runs_per_point = 20;
  std::size_t epochs = 1500;
  double s0 = 1.0;
  std::uint64_t base_seed = 0;
};

// 13 log-spaced points per decade over [1e-3, 1] (40 points).
std::vector<double> default_eta_grid();

// Mean final-epoch E over seeds base_seed .. base_seed + runs - 1 for each
// eta; best_eta has the lowest mean, ties going to the smaller eta. Throws
// Error if every grid point diverged.
GridResult grid_search_eta(const GridSpec& spec, std::size_t workers = 1);

// `{kind}_d{d1}_eta{eta}_s{s0}_seed{seed}.csv`
std::string run_filename(const TrainConfig& config);

// `epoch,error` rows for every completed epoch.
void write_run_csv(const std::filesystem::path& path, const RunRecord& record);

} // namespace zparam
