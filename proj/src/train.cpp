#include "zparam/train.hpp"

#include "parallel.hpp"
#include "zparam/csv_io.hpp"
#include "zparam/error.hpp"
#include "zparam/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zparam {

std::string_view to_string(ParamKind kind) noexcept { return kind == ParamKind::w ? "w" : "z"; }

ParamKind parse_param_kind(std::string_view text) {
  if (text == "w")
    return ParamKind::w;
  if (text == "z")
    return ParamKind::z;
  throw InvalidArgument("parametrization must be 'w' or 'z', got '" + std::string(text) + "'");
}

void validate(const TrainConfig& c) {
  validate(c.architecture);
  if (!(c.eta > 0.0) || !std::isfinite(c.eta))
    throw InvalidArgument("eta must be a positive finite number");
  if (c.epochs < 1)
    throw InvalidArgument("epochs must be >= 1");
  if (!(c.s0 > 0.0) || !std::isfinite(c.s0))
    throw InvalidArgument("s0 must be a positive finite number");
}

InitialParams init_params(const Architecture& arch, double s0, Rng& rng) {
  if (!(s0 > 0.0))
    throw InvalidArgument("s0 must be > 0");
  ZParams z = ZParams::zeros(arch);
  for (ZLayer* l : {&z.layer1, &z.layer2}) {
    for (std::size_t p = 0; p < l->nodes(); ++p) {
      l->s[p] = s0;
      l->c[p] = 0.0;
      const UnitVector u = random_unit_vector(l->fan_in(), rng);
      std::ranges::copy(u.components(), l->u.row(p).begin());
    }
  }
  WParams w = z_to_w(z);
  return {std::move(z), std::move(w)};
}

double RunRecord::final_error() const noexcept {
  if (diverged() || errors.empty())
    return std::numeric_limits<double>::infinity();
  return errors.back();
}

namespace {

void add_scaled(std::span<double> dst, std::span<const double> src, double alpha) {
  kernels::axpy(alpha, src, dst);
}

void add_scaled(ZParams& dst, const ZParams& src, double alpha) {
  add_scaled(dst.layer1.s, src.layer1.s, alpha);
  add_scaled(dst.layer1.c, src.layer1.c, alpha);
  add_scaled(dst.layer1.u.flat(), src.layer1.u.flat(), alpha);
  add_scaled(dst.layer2.s, src.layer2.s, alpha);
  add_scaled(dst.layer2.c, src.layer2.c, alpha);
  add_scaled(dst.layer2.u.flat(), src.layer2.u.flat(), alpha);
}

void add_scaled(WParams& dst, const WParams& src, double alpha) {
  add_scaled(dst.layer1.flat(), src.layer1.flat(), alpha);
  add_scaled(dst.layer2.flat(), src.layer2.flat(), alpha);
}

void zero(ZParams& p) {
  for (ZLayer* l : {&p.layer1, &p.layer2}) {
    std::ranges::fill(l->s, 0.0);
    std::ranges::fill(l->c, 0.0);
    std::ranges::fill(l->u.flat(), 0.0);
  }
}

void zero(WParams& p) {
  std::ranges::fill(p.layer1.flat(), 0.0);
  std::ranges::fill(p.layer2.flat(), 0.0);
}

template <class Params>
RunRecord descend(const TrainConfig& config, const Dataset& data, Params params) {
  const Architecture& arch = config.architecture;
  check_shape(params, arch);
  if (data.d1() != arch.d1 || arch.d3 != arch.d1)
    throw ShapeMismatch("dataset with d1=" + std::to_string(data.d1()) +
                        " does not fit architecture " + std::to_string(arch.d1) + "-" +
                        std::to_string(arch.d2) + "-" + std::to_string(arch.d3));

  RunRecord rec;
  rec.config = config;
  rec.errors.reserve(config.epochs);

  ForwardTrace trace;
  BackpropIntermediates deltas;
  Params grad = Params::zeros(arch);
  Params batch = Params::zeros(arch);
  const double n = static_cast<double>(data.size());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double sum = 0.0;
    if (config.update == UpdateMode::full_batch)
      zero(batch);
    for (std::size_t i = 0; i < data.size(); ++i) {
      forward_into(params, data.pattern(i), trace);
      const double e = training_error(trace, data.target(i));
      if (!std::isfinite(e)) {
        rec.diverged_at = epoch;
        rec.final_params = std::move(params);
        return rec;
      }
      sum += e;
      grad_into(params, trace, data.target(i), deltas, grad);
      if (config.update == UpdateMode::online)
        apply_update(params, grad, config.eta);
      else
        add_scaled(batch, grad, 1.0);
    }
    if (config.update == UpdateMode::full_batch)
      apply_update(params, batch, config.eta);
    rec.errors.push_back(sum / n);
  }
  rec.final_params = std::move(params);
  return rec;
}

} // namespace

void apply_update(ZParams& params, const ZGradient& grad, double eta) {
  check_shape(grad, params.architecture());
  add_scaled(params, grad, -eta);
}

void apply_update(WParams& params, const WGradient& grad, double eta) {
  check_shape(grad, params.architecture());
  add_scaled(params, grad, -eta);
}

RunRecord train_from(const TrainConfig& config, const Dataset& dataset, const InitialParams& init) {
  validate(config);
  if (config.param_kind == ParamKind::z)
    return descend(config, dataset, init.z);
  return descend(config, dataset, init.w);
}

RunRecord train_run(const TrainConfig& config, const Dataset& dataset) {
  validate(config);
  Rng rng(config.seed);
  return train_from(config, dataset, init_params(config.architecture, config.s0, rng));
}

std::vector<double> default_eta_grid() {
  std::vector<double> etas;
  for (int k = 0; k <= 39; ++k)
    etas.push_back(std::pow(10.0, -3.0 + k / 13.0));
  return etas;
}

GridResult grid_search_eta(const GridSpec& spec, std::size_t workers) {
  if (spec.etas.empty())
    throw InvalidArgument("eta grid is empty");
  if (spec.runs_per_point < 1)
    throw InvalidArgument("runs_per_point must be >= 1");

  std::vector<double> etas = spec.etas;
  std::ranges::sort(etas);
  etas.erase(std::unique(etas.begin(), etas.end()), etas.end());

  const Dataset data = make_autoencoder_dataset(spec.architecture.d1);
  const std::size_t runs = spec.runs_per_point;
  std::vector<double> finals(etas.size() * runs);
  detail::parallel_for(finals.size(), workers, [&](std::size_t idx) {
    TrainConfig cfg;
    cfg.architecture = spec.architecture;
    cfg.param_kind = spec.param_kind;
    cfg.eta = etas[idx / runs];
    cfg.epochs = spec.epochs;
    cfg.seed = spec.base_seed + idx % runs;
    cfg.s0 = spec.s0;
    finals[idx] = train_run(cfg, data).final_error();
  });

  GridResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < etas.size(); ++e) {
    GridPoint pt{etas[e], 0.0, 0};
    for (std::size_t r = 0; r < runs; ++r) {
      const double f = finals[e * runs + r];
      if (!std::isfinite(f))
        ++pt.diverged;
      pt.mean_final_error += f;
    }
    pt.mean_final_error = pt.diverged ? std::numeric_limits<double>::infinity()
                                      : pt.mean_final_error / static_cast<double>(runs);
    if (pt.mean_final_error < best) {
      best = pt.mean_final_error;
      result.best_eta = pt.eta;
    }
    result.points.push_back(pt);
  }
  if (!std::isfinite(best))
    throw Error("grid search: every eta diverged");
  return result;
}

std::string run_filename(const TrainConfig& c) {
  return std::string(to_string(c.param_kind)) + "_d" + std::to_string(c.architecture.d1) +
         "_eta" + format_short(c.eta) + "_s" + format_short(c.s0) + "_seed" +
         std::to_string(c.seed) + ".csv";
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& record) {
  write_curve_csv(path, "error", record.errors);
}

} // namespace zparam
