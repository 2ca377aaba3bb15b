#include "zparam/experiment.hpp"

#include "parallel.hpp"
#include "zparam/csv_io.hpp"
#include "zparam/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace zparam {

std::size_t ExperimentPlan::runs_for(std::size_t d1) const {
  auto it = runs_per_config.find(d1);
  return it == runs_per_config.end() ? kDefaultRuns : it->second;
}

void validate(const ExperimentPlan& plan) {
  if (plan.d1_list.empty())
    throw InvalidArgument("plan has no d1 values");
  if (plan.s0_list.empty())
    throw InvalidArgument("plan has no s0 values");
  if (plan.epochs < 1)
    throw InvalidArgument("plan epochs must be >= 1");
  for (std::size_t d1 : plan.d1_list) {
    if (d1 < 8 || !is_power_of_two(d1))
      throw InvalidArgument("plan d1 must be a power of two >= 8, got " + std::to_string(d1));
    auto it = plan.eta_table.find(d1);
    if (it == plan.eta_table.end())
      throw InvalidArgument("plan has no learning rates for d1=" + std::to_string(d1));
    if (!(it->second.z > 0.0) || !(it->second.w > 0.0))
      throw InvalidArgument("plan learning rates must be positive");
    if (plan.runs_for(d1) < 1)
      throw InvalidArgument("plan needs at least one run per config");
  }
  for (double s0 : plan.s0_list)
    if (!(s0 > 0.0))
      throw InvalidArgument("plan s0 values must be positive");
}

ExperimentPlan default_plan() {
  ExperimentPlan p;
  p.d1_list = {8, 16, 32, 64, 128};
  p.runs_per_config = {{8, 20}, {16, 20}, {32, 20}, {64, 20}, {128, 10}};
  p.epochs = 1500;
  p.eta_table = {
      {8, {0.180, 0.45}}, {16, {0.110, 0.22}}, {32, {0.040, 0.12}},
      {64, {0.016, 0.07}}, {128, {0.010, 0.06}},
  };
  p.s0_list = {1.0};
  return p;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double final_variance(const std::vector<RunRecord>& runs) {
  std::vector<RunRecord> done;
  for (const auto& r : runs)
    if (!r.diverged())
      done.push_back(r);
  if (done.size() < 2)
    return kNaN;
  return run_variance(done, done.front().errors.size() - 1);
}

AveragedCurve average_completed(const std::vector<RunRecord>& runs) {
  std::vector<std::vector<double>> curves;
  for (const auto& r : runs)
    if (!r.diverged())
      curves.push_back(r.errors);
  if (curves.empty())
    return {};
  return average_curves(curves);
}

} // namespace

double ConfigResult::max_speedup() const noexcept { return speedup ? speedup->max_speedup : kNaN; }

double ConfigResult::final_error_w() const noexcept {
  return avg_w.errors.empty() ? kNaN : avg_w.errors.back();
}

double ConfigResult::final_error_z() const noexcept {
  return avg_z.errors.empty() ? kNaN : avg_z.errors.back();
}

const ConfigResult& ResultsBundle::at(std::size_t d1, double s0) const {
  for (const auto& c : configs)
    if (c.d1 == d1 && c.s0 == s0)
      return c;
  throw OutOfRange("bundle has no results for d1=" + std::to_string(d1) + " s0=" + format_short(s0));
}

std::size_t ResultsBundle::run_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : configs)
    n += c.runs_w.size() + c.runs_z.size();
  return n;
}

std::size_t ResultsBundle::diverged_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : configs)
    n += c.divergences.size();
  return n;
}

void aggregate_config(ConfigResult& c) {
  c.divergences.clear();
  for (const auto* runs : {&c.runs_w, &c.runs_z})
    for (const auto& r : *runs)
      if (r.diverged())
        c.divergences.push_back({r.config, *r.diverged_at});
  c.avg_w = average_completed(c.runs_w);
  c.avg_z = average_completed(c.runs_z);
  c.speedup.reset();
  if (!c.avg_w.errors.empty() && !c.avg_z.errors.empty()) {
    try {
      c.speedup = epoch_speedup(c.avg_w, c.avg_z);
    } catch (const NoOverlap&) {
    }
  }
  c.final_variance_w = final_variance(c.runs_w);
  c.final_variance_z = final_variance(c.runs_z);
}

ResultsBundle run_experiment(const ExperimentPlan& plan, std::uint64_t base_seed,
                             std::size_t workers) {
  validate(plan);

  struct Task {
    std::size_t config;
    std::size_t seed_index;
  };
  ResultsBundle bundle;
  std::vector<Dataset> datasets;
  std::vector<Task> tasks;
  for (std::size_t d1 : plan.d1_list) {
    for (double s0 : plan.s0_list) {
      ConfigResult c;
      c.d1 = d1;
      c.s0 = s0;
      c.eta = plan.eta_table.at(d1);
      const std::size_t runs = plan.runs_for(d1);
      c.runs_w.resize(runs);
      c.runs_z.resize(runs);
      for (std::size_t i = 0; i < runs; ++i)
        tasks.push_back({bundle.configs.size(), i});
      bundle.configs.push_back(std::move(c));
      datasets.push_back(make_autoencoder_dataset(d1, plan.targets));
    }
  }

  detail::parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const Task task = tasks[t];
    ConfigResult& c = bundle.configs[task.config];
    TrainConfig cfg;
    cfg.architecture = architecture_for(c.d1);
    cfg.epochs = plan.epochs;
    cfg.seed = base_seed + task.seed_index;
    cfg.s0 = c.s0;

    Rng rng(cfg.seed);
    const InitialParams init = init_params(cfg.architecture, cfg.s0, rng);
    cfg.param_kind = ParamKind::w;
    cfg.eta = c.eta.w;
    c.runs_w[task.seed_index] = train_from(cfg, datasets[task.config], init);
    cfg.param_kind = ParamKind::z;
    cfg.eta = c.eta.z;
    c.runs_z[task.seed_index] = train_from(cfg, datasets[task.config], init);
  });

  for (ConfigResult& c : bundle.configs) {
    aggregate_config(c);
    bundle.summary.push_back({c.d1, c.s0, c.max_speedup(), c.final_error_w(), c.final_error_z()});
  }
  return bundle;
}

ResultsBundle small_s_study(std::size_t d1, const std::vector<double>& s0_list, std::size_t seeds,
                            std::uint64_t base_seed, std::size_t workers) {
  ExperimentPlan plan = default_plan();
  if (!plan.eta_table.contains(d1))
    throw InvalidArgument("no tuned learning rates for d1=" + std::to_string(d1));
  plan.d1_list = {d1};
  plan.runs_per_config = {{d1, seeds}};
  plan.s0_list = s0_list;
  return run_experiment(plan, base_seed, workers);
}

std::filesystem::path config_dir(std::size_t d1, double s0) {
  return std::filesystem::path("d" + std::to_string(d1)) / ("s" + format_short(s0));
}

void write_bundle(const ResultsBundle& bundle, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir / "summary.csv");
    out << "d1,s0,max_speedup,final_E_w,final_E_z\n";
    for (const auto& r : bundle.summary)
      out << r.d1 << ',' << format_real(r.s0) << ',' << format_real(r.max_speedup) << ','
          << format_real(r.final_e_w) << ',' << format_real(r.final_e_z) << '\n';
  }
  {
    auto out = open_output(dir / "variance.csv");
    out << "d1,s0,var_w,var_z,diverged_w,diverged_z\n";
    for (const auto& c : bundle.configs) {
      std::size_t dw = 0, dz = 0;
      for (const auto& d : c.divergences)
        (d.config.param_kind == ParamKind::w ? dw : dz) += 1;
      out << c.d1 << ',' << format_real(c.s0) << ',' << format_real(c.final_variance_w) << ','
          << format_real(c.final_variance_z) << ',' << dw << ',' << dz << '\n';
    }
  }
  for (const auto& c : bundle.configs) {
    const auto sub = dir / config_dir(c.d1, c.s0);
    write_curve_csv(sub / "avg_w.csv", "mean_error", c.avg_w.errors);
    write_curve_csv(sub / "avg_z.csv", "mean_error", c.avg_z.errors);
    {
      auto out = open_output(sub / "speedup.csv");
      Table2 t{"percent_toward_zero", "speedup", {}, {}};
      if (c.speedup)
        for (const auto& p : c.speedup->points) {
          t.x.push_back(p.percent_toward_zero);
          t.y.push_back(p.speedup);
        }
      write_table(out, t);
    }
    for (const auto* runs : {&c.runs_w, &c.runs_z})
      for (const auto& r : *runs)
        write_run_csv(sub / run_filename(r.config), r);
  }
}

} // namespace zparam
