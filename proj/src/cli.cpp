#include "zparam/cli.hpp"

#include "zparam/csv_io.hpp"
#include "zparam/error.hpp"
#include "zparam/experiment.hpp"
#include "zparam/grad.hpp"
#include "zparam/kernels.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace zparam::cli {

namespace {

[[noreturn]] void usage(const std::string& msg) { throw UsageError(msg, 2); }

struct Flags {
  std::vector<std::size_t> d1;
  std::string param;
  double eta = 0.0;
  std::vector<double> grid;
  std::size_t epochs = 1500;
  std::uint64_t seed = 0;
  std::vector<double> s0;
  std::size_t runs = 0;
  std::string out = "results";
  std::size_t workers = 1;
  std::string targets = "pm1";
  bool full_batch = false;
  bool dump_params = false;
  std::string isa;
};

struct Options {
  CLI::Option* d1 = nullptr;
  CLI::Option* param = nullptr;
  CLI::Option* eta = nullptr;
  CLI::Option* s0 = nullptr;
  CLI::Option* runs = nullptr;
  CLI::Option* grid = nullptr;
};

Options add_common(CLI::App& sub, Flags& f, bool multi_d1, bool multi_s0) {
  Options o;
  if (multi_d1)
    o.d1 = sub.add_option("--d1", f.d1, "Input layer size (power of two); repeatable");
  else
    o.d1 = sub.add_option("--d1", f.d1, "Input layer size (power of two)")->expected(1);
  o.eta = sub.add_option("--eta", f.eta, "Learning rate");
  sub.add_option("--epochs", f.epochs, "Epochs per run")->default_val(1500);
  sub.add_option("--seed", f.seed, "Seed (base seed for multi-run commands)")->default_val(0);
  if (multi_s0)
    o.s0 = sub.add_option("--s0", f.s0, "Initial scale s; repeatable");
  else
    o.s0 = sub.add_option("--s0", f.s0, "Initial scale s")->expected(1);
  o.runs = sub.add_option("--runs", f.runs, "Seeds per configuration");
  sub.add_option("--out", f.out, "Output directory")->default_val("results");
  sub.add_option("--workers", f.workers, "Worker threads")->default_val(1);
  sub.add_option("--targets", f.targets, "Target encoding: pm1 or shifted")->default_val("pm1");
  sub.add_option("--isa", f.isa, "Kernel variant: scalar, avx2 or neon");
  return o;
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    usage(std::string(name) + " must be a positive number");
}

void check_d1(std::size_t d1, std::size_t min) {
  if (!is_power_of_two(d1))
    usage("d1 must be a power of two, got " + std::to_string(d1));
  if (d1 < min)
    usage("d1 must be >= " + std::to_string(min) + ", got " + std::to_string(d1));
}

} // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Compare w- and z-parametrized hyperplanes on autoencoders", "zparam"};
  app.require_subcommand(1);
  Flags f;

  auto* train = app.add_subcommand("train", "Train one seeded run");
  Options ot = add_common(*train, f, false, false);
  ot.param = train->add_option("--param", f.param, "Parametrization: w or z")->required();
  train->add_flag("--full-batch", f.full_batch, "Update once per epoch instead of per pattern");
  train->add_flag("--dump-params", f.dump_params, "Also write the final parameters as CSV");

  auto* grid = app.add_subcommand("grid", "Grid search over the learning rate");
  Options og = add_common(*grid, f, false, false);
  og.param = grid->add_option("--param", f.param, "Parametrization: w or z")->required();
  og.grid = grid->add_option("--grid", f.grid, "Explicit learning rates (default: log grid)")
                ->delimiter(',');

  auto* repro = app.add_subcommand("reproduce", "All sizes, both parametrizations, tuned rates");
  Options orp = add_common(*repro, f, true, true);

  auto* smalls = app.add_subcommand("small-s", "Initial-scale study at one size");
  Options os = add_common(*smalls, f, false, true);

  auto* gc = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
  Options oc = add_common(*gc, f, false, false);
  oc.param = gc->add_option("--param", f.param, "Parametrization: w or z")->required();

  std::vector<const char*> argv{"zparam"};
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    std::string text = out.str() + err.str();
    while (!text.empty() && text.back() == '\n')
      text.pop_back();
    throw UsageError(text.empty() ? e.what() : text, code == 0 ? 0 : 2);
  }

  CliConfig c;
  Options opts;
  if (*train) {
    c.command = Command::train;
    opts = ot;
  } else if (*grid) {
    c.command = Command::grid;
    opts = og;
  } else if (*repro) {
    c.command = Command::reproduce;
    opts = orp;
  } else if (*smalls) {
    c.command = Command::small_s;
    opts = os;
  } else {
    c.command = Command::gradcheck;
    opts = oc;
  }

  if (f.targets == "pm1")
    c.targets = TargetEncoding::plus_minus_one;
  else if (f.targets == "shifted")
    c.targets = TargetEncoding::shifted_input;
  else
    usage("--targets must be pm1 or shifted");

  if (!f.isa.empty()) {
    if (f.isa == "scalar")
      kernels::select(kernels::Isa::scalar);
    else if (f.isa == "avx2" && kernels::isa_supported(kernels::Isa::avx2))
      kernels::select(kernels::Isa::avx2);
    else if (f.isa == "neon" && kernels::isa_supported(kernels::Isa::neon))
      kernels::select(kernels::Isa::neon);
    else
      usage("--isa " + f.isa + " is not available here");
  }

  if (opts.param && opts.param->count()) {
    try {
      c.param = parse_param_kind(f.param);
    } catch (const InvalidArgument& e) {
      usage(e.what());
    }
  }

  const ExperimentPlan table = default_plan();
  switch (c.command) {
  case Command::train:
  case Command::grid:
  case Command::gradcheck:
    if (!opts.d1->count()) {
      if (c.command != Command::gradcheck)
        usage("--d1 is required");
      f.d1 = {8};
    }
    check_d1(f.d1.front(), 4);
    break;
  case Command::reproduce:
    if (!opts.d1->count())
      f.d1 = table.d1_list;
    for (std::size_t d1 : f.d1) {
      check_d1(d1, 8);
      if (!table.eta_table.contains(d1))
        usage("reproduce has no tuned learning rates for d1=" + std::to_string(d1));
    }
    break;
  case Command::small_s:
    if (!opts.d1->count())
      f.d1 = {128};
    check_d1(f.d1.front(), 8);
    if (!table.eta_table.contains(f.d1.front()))
      usage("small-s has no tuned learning rates for d1=" + std::to_string(f.d1.front()));
    break;
  }
  c.d1_list = f.d1;

  if (opts.eta->count() && c.command != Command::reproduce && c.command != Command::small_s) {
    check_positive(f.eta, "--eta");
    c.eta = f.eta;
  }
  if (c.command == Command::train && !c.eta) {
    auto it = table.eta_table.find(c.d1_list.front());
    if (it == table.eta_table.end())
      usage("--eta is required for d1=" + std::to_string(c.d1_list.front()));
    c.eta = *c.param == ParamKind::z ? it->second.z : it->second.w;
  }
  if (opts.grid && opts.grid->count()) {
    if (f.grid.empty())
      usage("--grid needs at least one learning rate");
    for (double e : f.grid)
      check_positive(e, "--grid values");
    c.etas = f.grid;
  }

  if (f.epochs < 1)
    usage("--epochs must be >= 1");
  c.epochs = f.epochs;
  c.seed = f.seed;

  if (opts.s0->count()) {
    for (double s : f.s0)
      check_positive(s, "--s0");
    c.s0_list = f.s0;
  } else if (c.command == Command::small_s) {
    c.s0_list = {1.0, 0.1, 0.0001};
  }

  if (opts.runs->count()) {
    if (f.runs < 1)
      usage("--runs must be >= 1");
    c.runs = f.runs;
  }
  if (f.workers < 1)
    usage("--workers must be >= 1");
  c.workers = f.workers;
  c.out = f.out;
  c.update = f.full_batch ? UpdateMode::full_batch : UpdateMode::online;
  c.dump_params = f.dump_params;
  return c;
}

namespace {

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

int do_train(const CliConfig& c, std::ostream& out) {
  TrainConfig t;
  t.architecture = architecture_for(c.d1_list.front());
  t.param_kind = *c.param;
  t.eta = *c.eta;
  t.epochs = c.epochs;
  t.seed = c.seed;
  t.s0 = c.s0_list.front();
  t.update = c.update;
  const Dataset data = make_autoencoder_dataset(t.architecture.d1, c.targets);
  const RunRecord rec = train_run(t, data);

  const auto path = c.out / run_filename(t);
  write_run_csv(path, rec);
  if (c.dump_params) {
    auto stem = path.stem().string();
    auto p = open_output(c.out / ("params_" + stem + ".csv"));
    std::visit([&](const auto& params) { write_params_csv(p, params); }, rec.final_params);
  }

  out << "train " << to_string(t.param_kind) << "-param " << t.architecture.d1 << '-'
      << t.architecture.d2 << '-' << t.architecture.d3 << " eta=" << fmt(t.eta)
      << " s0=" << fmt(t.s0) << " seed=" << t.seed << '\n';
  if (rec.diverged()) {
    out << "diverged at epoch " << *rec.diverged_at << '\n';
    return 1;
  }
  out << "final E = " << fmt(rec.final_error(), 8) << " after " << rec.errors.size()
      << " epochs\nwrote " << path.string() << '\n';
  return 0;
}

int do_grid(const CliConfig& c, std::ostream& out) {
  GridSpec g;
  g.architecture = architecture_for(c.d1_list.front());
  g.param_kind = *c.param;
  g.etas = c.etas.empty() ? default_eta_grid() : c.etas;
  g.runs_per_point = c.runs.value_or(default_plan().runs_for(g.architecture.d1));
  g.epochs = c.epochs;
  g.s0 = c.s0_list.front();
  g.base_seed = c.seed;
  GridResult r;
  try {
    r = grid_search_eta(g, c.workers);
  } catch (const Error& e) {
    out << e.what() << '\n';
    return 1;
  }
  const auto path =
      c.out / ("grid_" + std::string(to_string(g.param_kind)) + "_d" + std::to_string(g.architecture.d1) + ".csv");
  auto f = open_output(path);
  f << "eta,mean_final_error,diverged\n";
  for (const auto& p : r.points)
    f << format_real(p.eta) << ',' << format_real(p.mean_final_error) << ',' << p.diverged << '\n';
  out << "grid " << to_string(g.param_kind) << "-param d1=" << g.architecture.d1 << ": "
      << r.points.size() << " learning rates x " << g.runs_per_point << " runs\n"
      << "best eta = " << fmt(r.best_eta) << '\n'
      << "wrote " << path.string() << '\n';
  return 0;
}

void print_summary(const ResultsBundle& b, std::ostream& out) {
  out << std::left << std::setw(6) << "d1" << std::setw(10) << "s0" << std::setw(14)
      << "max_speedup" << std::setw(14) << "final_E_w" << std::setw(14) << "final_E_z"
      << std::setw(12) << "var_w" << "var_z\n";
  for (const auto& c : b.configs)
    out << std::setw(6) << c.d1 << std::setw(10) << fmt(c.s0) << std::setw(14)
        << fmt(c.max_speedup(), 4) << std::setw(14) << fmt(c.final_error_w(), 4) << std::setw(14)
        << fmt(c.final_error_z(), 4) << std::setw(12) << fmt(c.final_variance_w, 3)
        << fmt(c.final_variance_z, 3) << '\n';
  if (b.diverged_count())
    out << b.diverged_count() << " of " << b.run_count() << " runs diverged\n";
}

int finish_bundle(const ResultsBundle& b, const CliConfig& c, std::ostream& out) {
  write_bundle(b, c.out);
  print_summary(b, out);
  out << "wrote " << (c.out / "summary.csv").string() << '\n';
  return 2 * b.diverged_count() > b.run_count() ? 1 : 0;
}

int do_reproduce(const CliConfig& c, std::ostream& out) {
  ExperimentPlan plan = default_plan();
  plan.d1_list = c.d1_list;
  plan.epochs = c.epochs;
  plan.s0_list = c.s0_list;
  plan.targets = c.targets;
  if (c.runs)
    for (std::size_t d1 : plan.d1_list)
      plan.runs_per_config[d1] = *c.runs;
  return finish_bundle(run_experiment(plan, c.seed, c.workers), c, out);
}

int do_small_s(const CliConfig& c, std::ostream& out) {
  ExperimentPlan plan = default_plan();
  const std::size_t d1 = c.d1_list.front();
  plan.d1_list = {d1};
  plan.runs_per_config = {{d1, c.runs.value_or(10)}};
  plan.epochs = c.epochs;
  plan.s0_list = c.s0_list;
  plan.targets = c.targets;
  return finish_bundle(run_experiment(plan, c.seed, c.workers), c, out);
}

int do_gradcheck(const CliConfig& c, std::ostream& out) {
  const Architecture arch = architecture_for(c.d1_list.front());
  const std::size_t n = c.runs.value_or(1);
  double worst = 0.0, worst_constant_error = 0.0;
  double constant = 0.0;
  bool consistent = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(c.seed + i);
    const auto r = gradient_check(*c.param, arch, rng);
    if (i > 0 && r.constant != constant)
      consistent = false;
    constant = r.constant;
    worst = std::max(worst, r.max_rel_error);
    worst_constant_error = std::max(worst_constant_error, r.constant_error);
  }
  const bool ok = consistent && worst < 1e-6 && worst_constant_error < 1e-6;
  out << "gradcheck " << to_string(*c.param) << "-param " << arch.d1 << '-' << arch.d2 << '-'
      << arch.d3 << " over " << n << " configuration(s)\n"
      << "numeric/analytic constant = " << fmt(constant) << " (fit error "
      << fmt(worst_constant_error, 3) << ")\n"
      << "max relative error = " << fmt(worst, 3) << '\n'
      << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

} // namespace

int run_cli(const CliConfig& c, std::ostream& out, std::ostream& err) {
  try {
    switch (c.command) {
    case Command::train: return do_train(c, out);
    case Command::grid: return do_grid(c, out);
    case Command::reproduce: return do_reproduce(c, out);
    case Command::small_s: return do_small_s(c, out);
    case Command::gradcheck: return do_gradcheck(c, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliConfig config;
  try {
    config = parse_args(args);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? std::cout : std::cerr) << e.what() << '\n';
    return e.exit_code();
  }
  return run_cli(config, std::cout, std::cerr);
}

} // namespace zparam::cli
