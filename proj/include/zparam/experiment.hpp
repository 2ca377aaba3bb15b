#pragma once

#include "zparam/analysis.hpp"
#include "zparam/data.hpp"
#include "zparam/train.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace zparam {

struct EtaPair {
  double z = 0.0;
  double w = 0.0;

  friend bool operator==(const EtaPair&, const EtaPair&) = default;
};

struct ExperimentPlan {
  std::vector<std::size_t> d1_list;
  // Seeds per d1; sizes missing from the map get kDefaultRuns.
  std::map<std::size_t, std::size_t> runs_per_config;
  std::size_t epochs = 1500;
  std::map<std::size_t, EtaPair> eta_table;
  std::vector<double> s0_list;
  TargetEncoding targets = TargetEncoding::plus_minus_one;

  static constexpr std::size_t kDefaultRuns = 20;
  std::size_t runs_for(std::size_t d1) const;
};

// Throws InvalidArgument unless every d1 is a power of two >= 8 with an
// eta_table entry, every eta and s0 is positive and epochs >= 1.
void validate(const ExperimentPlan& plan);

// The five autoencoders 8-3-8 .. 128-7-128 with their tuned learning rates,
// 1500 epochs, 20 seeds (10 for d1=128), s0 = 1.
ExperimentPlan default_plan();

struct DivergenceReport {
  TrainConfig config;
  std::size_t epoch = 0;
};

// All runs for one (d1, s0) pair.
struct ConfigResult {
  std::size_t d1 = 0;
  double s0 = 1.0;
  EtaPair eta;
  std::vector<RunRecord> runs_w;
  std::vector<RunRecord> runs_z;
  // Averages over the runs that completed; empty if none did.
  AveragedCurve avg_w;
  AveragedCurve avg_z;
  // Absent when the two averaged curves share no error window.
  std::optional<SpeedupCurve> speedup;
  // Sample variance of the final-epoch E over completed runs; NaN with
  // fewer than two.
  double final_variance_w = 0.0;
  double final_variance_z = 0.0;
  std::vector<DivergenceReport> divergences;

  double max_speedup() const noexcept;
  double final_error_w() const noexcept;
  double final_error_z() const noexcept;
};

// Fills divergences, the averaged curves, the speedup and the final-epoch
// variances of `c` from its runs_w and runs_z.
void aggregate_config(ConfigResult& c);

struct SummaryRow {
  std::size_t d1 = 0;
  double s0 = 1.0;
  double max_speedup = 0.0;
  double final_e_w = 0.0;
  double final_e_z = 0.0;
};

struct ResultsBundle {
  std::vector<ConfigResult> configs; // d1_list order, then s0_list order
  std::vector<SummaryRow> summary;

  const ConfigResult& at(std::size_t d1, double s0) const;
  std::size_t run_count() const noexcept;
  std::size_t diverged_count() const noexcept;
};

// For each (d1, s0) and seed base_seed + i: one init_params draw, then both
// parametrizations trained from it. Divergent runs are reported and left out
// of the averages. Runs are spread over `workers` threads; the bundle does
// not depend on the worker count.
ResultsBundle run_experiment(const ExperimentPlan& plan, std::uint64_t base_seed,
                             std::size_t workers = 1);

// run_experiment at one size over several initial scales, with the tuned
// learning rates for d1.
ResultsBundle small_s_study(std::size_t d1, const std::vector<double>& s0_list,
                            std::size_t seeds, std::uint64_t base_seed = 0,
                            std::size_t workers = 1);

// Layout:
//   <dir>/summary.csv                 d1,s0,max_speedup,final_E_w,final_E_z
//   <dir>/variance.csv                d1,s0,var_w,var_z,diverged_w,diverged_z
//   <dir>/d{d1}/s{s0}/avg_w.csv       epoch,mean_error
//   <dir>/d{d1}/s{s0}/avg_z.csv       epoch,mean_error
//   <dir>/d{d1}/s{s0}/speedup.csv     percent_toward_zero,speedup
//   <dir>/d{d1}/s{s0}/{kind}_d.._seed{seed}.csv per run
void write_bundle(const ResultsBundle& bundle, const std::filesystem::path& dir);

std::filesystem::path config_dir(std::size_t d1, double s0);

} // namespace zparam
