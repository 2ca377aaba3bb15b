#include "zparam/grad.hpp"

#include "zparam/error.hpp"
#include "zparam/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zparam {

namespace {

void check_trace(const ForwardTrace& t, const Architecture& a, std::span<const double> target) {
  if (t.n1.size() != a.d1 || t.h1.size() != a.d2 || t.n2.size() != a.d2 ||
      t.h2.size() != a.d3 || t.n3.size() != a.d3)
    throw ShapeMismatch("forward trace does not match the parameter shapes");
  if (target.size() != a.d3)
    throw ShapeMismatch("target has length " + std::to_string(target.size()) +
                        ", output layer has " + std::to_string(a.d3));
}

void output_deltas(const ForwardTrace& t, std::span<const double> target, std::vector<double>& a) {
  a.resize(t.n3.size());
  for (std::size_t p = 0; p < a.size(); ++p)
    a[p] = activation_deriv(t.h2[p]) * (t.n3[p] - target[p]);
}

void hidden_deltas(const ForwardTrace& t, const ZParams& params, BackpropIntermediates& d) {
  const auto& k = kernels::active();
  const ZLayer& l2 = params.layer2;
  d.b.assign(t.n2.size(), 0.0);
  for (std::size_t m = 0; m < l2.nodes(); ++m)
    k.axpy(l2.s[m] * d.a[m], l2.u.row(m).data(), d.b.data(), d.b.size());
  for (std::size_t p = 0; p < d.b.size(); ++p)
    d.b[p] *= activation_deriv(t.h1[p]);
}

void hidden_deltas(const ForwardTrace& t, const WParams& params, BackpropIntermediates& d) {
  const auto& k = kernels::active();
  const Matrix& w2 = params.layer2;
  d.b.assign(t.n2.size(), 0.0);
  for (std::size_t m = 0; m < w2.rows(); ++m)
    k.axpy(d.a[m], w2.row(m).data() + 1, d.b.data(), d.b.size());
  for (std::size_t p = 0; p < d.b.size(); ++p)
    d.b[p] *= activation_deriv(t.h1[p]);
}

void layer_grad_z(const ZLayer& l, std::span<const double> in, std::span<const double> delta,
                  ZLayer& g) {
  const auto& k = kernels::active();
  for (std::size_t p = 0; p < l.nodes(); ++p) {
    const double dist = l.c[p] + k.dot(l.u.row(p).data(), in.data(), in.size());
    g.s[p] = dist * delta[p];
    g.c[p] = l.s[p] * delta[p];
    const double sd = l.s[p] * delta[p];
    auto row = g.u.row(p);
    for (std::size_t q = 0; q < in.size(); ++q)
      row[q] = sd * in[q];
  }
}

void layer_grad_w(std::span<const double> in, std::span<const double> delta, Matrix& g) {
  for (std::size_t p = 0; p < delta.size(); ++p) {
    auto row = g.row(p);
    row[0] = delta[p];
    for (std::size_t q = 0; q < in.size(); ++q)
      row[q + 1] = in[q] * delta[p];
  }
}

} // namespace

BackpropIntermediates backprop_deltas(const WParams& params, const ForwardTrace& trace,
                                      std::span<const double> target) {
  const Architecture a = params.architecture();
  check_shape(params, a);
  check_trace(trace, a, target);
  BackpropIntermediates d;
  output_deltas(trace, target, d.a);
  hidden_deltas(trace, params, d);
  return d;
}

BackpropIntermediates backprop_deltas(const ZParams& params, const ForwardTrace& trace,
                                      std::span<const double> target) {
  const Architecture a = params.architecture();
  check_shape(params, a);
  check_trace(trace, a, target);
  BackpropIntermediates d;
  output_deltas(trace, target, d.a);
  hidden_deltas(trace, params, d);
  return d;
}

void grad_into(const ZParams& params, const ForwardTrace& trace, std::span<const double> target,
               BackpropIntermediates& d, ZGradient& out) {
  const Architecture a = params.architecture();
  check_shape(params, a);
  check_trace(trace, a, target);
  if (out.architecture() != a)
    out = ZParams::zeros(a);
  output_deltas(trace, target, d.a);
  hidden_deltas(trace, params, d);
  layer_grad_z(params.layer2, trace.n2, d.a, out.layer2);
  layer_grad_z(params.layer1, trace.n1, d.b, out.layer1);
}

void grad_into(const WParams& params, const ForwardTrace& trace, std::span<const double> target,
               BackpropIntermediates& d, WGradient& out) {
  const Architecture a = params.architecture();
  check_shape(params, a);
  check_trace(trace, a, target);
  if (out.architecture() != a)
    out = WParams::zeros(a);
  output_deltas(trace, target, d.a);
  hidden_deltas(trace, params, d);
  layer_grad_w(trace.n2, d.a, out.layer2);
  layer_grad_w(trace.n1, d.b, out.layer1);
}

ZGradient grad_z(const ZParams& params, const ForwardTrace& trace,
                 std::span<const double> target) {
  BackpropIntermediates d;
  ZGradient g = ZParams::zeros(params.architecture());
  grad_into(params, trace, target, d, g);
  return g;
}

WGradient grad_w(const WParams& params, const ForwardTrace& trace,
                 std::span<const double> target) {
  BackpropIntermediates d;
  WGradient g = WParams::zeros(params.architecture());
  grad_into(params, trace, target, d, g);
  return g;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

namespace {

using Real = long double;

Real f_ld(Real h) { return std::tanh(h / 2); }

Real sq_error(const std::vector<Real>& out, std::span<const double> t) {
  Real e = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Real diff = out[k] - static_cast<Real>(t[k]);
    e += diff * diff;
  }
  return e;
}

// Layout matches flatten(WParams).
Real eval_w(const std::vector<Real>& th, const Architecture& a, std::span<const double> x,
            std::span<const double> t) {
  std::vector<Real> n2(a.d2), n3(a.d3);
  std::size_t at = 0;
  for (std::size_t j = 0; j < a.d2; ++j, at += a.d1 + 1) {
    Real h = th[at];
    for (std::size_t i = 0; i < a.d1; ++i)
      h += th[at + 1 + i] * static_cast<Real>(x[i]);
    n2[j] = f_ld(h);
  }
  for (std::size_t k = 0; k < a.d3; ++k, at += a.d2 + 1) {
    Real h = th[at];
    for (std::size_t j = 0; j < a.d2; ++j)
      h += th[at + 1 + j] * n2[j];
    n3[k] = f_ld(h);
  }
  return sq_error(n3, t);
}

// Layout matches flatten(ZParams): s block, c block, u rows; per layer.
std::vector<Real> z_layer(const std::vector<Real>& th, std::size_t& at, std::size_t nodes,
                          std::size_t fan_in, const std::vector<Real>& in) {
  const std::size_t s0 = at, c0 = at + nodes, u0 = at + 2 * nodes;
  std::vector<Real> out(nodes);
  for (std::size_t p = 0; p < nodes; ++p) {
    Real dist = th[c0 + p];
    for (std::size_t q = 0; q < fan_in; ++q)
      dist += th[u0 + p * fan_in + q] * in[q];
    out[p] = f_ld(th[s0 + p] * dist);
  }
  at = u0 + nodes * fan_in;
  return out;
}

Real eval_z(const std::vector<Real>& th, const Architecture& a, std::span<const double> x,
            std::span<const double> t) {
  std::vector<Real> n1(x.begin(), x.end());
  std::size_t at = 0;
  auto n2 = z_layer(th, at, a.d2, a.d1, n1);
  auto n3 = z_layer(th, at, a.d3, a.d2, n2);
  return sq_error(n3, t);
}

template <class Params, class Eval>
Params central_differences(const Params& params, std::span<const double> x,
                           std::span<const double> t, double step, Eval eval) {
  if (!(step > 0.0))
    throw InvalidArgument("finite-difference step must be > 0");
  const Architecture a = params.architecture();
  check_shape(params, a);
  if (x.size() != a.d1 || t.size() != a.d3)
    throw ShapeMismatch("finite_diff_grad: input/target length does not match the network");

  const auto flat = flatten(params);
  std::vector<Real> th(flat.begin(), flat.end());
  std::vector<double> g(flat.size());
  const Real h = step;
  for (std::size_t i = 0; i < th.size(); ++i) {
    const Real saved = th[i];
    th[i] = saved + h;
    const Real plus = eval(th, a, x, t);
    th[i] = saved - h;
    const Real minus = eval(th, a, x, t);
    th[i] = saved;
    g[i] = static_cast<double>((plus - minus) / (2 * h));
  }
  Params out = params;
  assign_flat(out, g);
  return out;
}

} // namespace

WGradient finite_diff_grad(const WParams& params, std::span<const double> x,
                           std::span<const double> target, double step) {
  return central_differences(params, x, target, step, eval_w);
}

ZGradient finite_diff_grad(const ZParams& params, std::span<const double> x,
                           std::span<const double> target, double step) {
  return central_differences(params, x, target, step, eval_z);
}

GradCheckReport compare_gradients(std::span<const double> analytic,
                                  std::span<const double> numeric) {
  if (analytic.size() != numeric.size())
    throw ShapeMismatch("compare_gradients: sizes differ");
  GradCheckReport r;
  r.entries = analytic.size();
  double na = 0.0, aa = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    na += numeric[i] * analytic[i];
    aa += analytic[i] * analytic[i];
  }
  r.fitted_constant = aa > 0.0 ? na / aa : 0.0;
  r.constant = std::fabs(r.fitted_constant - 1.0) <= std::fabs(r.fitted_constant - 2.0) ? 1.0 : 2.0;
  r.constant_error = std::fabs(r.fitted_constant - r.constant);
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double scaled = r.constant * analytic[i];
    const double denom = std::max({std::fabs(scaled), std::fabs(numeric[i]), 1e-8});
    r.max_rel_error = std::max(r.max_rel_error, std::fabs(numeric[i] - scaled) / denom);
  }
  return r;
}

WParams random_wparams(const Architecture& arch, Rng& rng) {
  WParams p = WParams::zeros(arch);
  for (double& v : p.layer1.flat())
    v = rng.normal();
  for (double& v : p.layer2.flat())
    v = rng.normal();
  return p;
}

ZParams random_zparams(const Architecture& arch, Rng& rng) {
  ZParams p = ZParams::zeros(arch);
  for (ZLayer* l : {&p.layer1, &p.layer2}) {
    for (std::size_t n = 0; n < l->nodes(); ++n) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      l->s[n] = sign * rng.uniform(0.5, 2.0);
      l->c[n] = 0.5 * rng.normal();
      const UnitVector u = random_unit_vector(l->fan_in(), rng);
      const double len = rng.uniform(0.7, 1.3);
      auto row = l->u.row(n);
      for (std::size_t q = 0; q < row.size(); ++q)
        row[q] = len * u[q];
    }
  }
  return p;
}

GradCheckReport gradient_check(ParamKind kind, const Architecture& arch, Rng& rng, double step) {
  validate(arch);
  std::vector<double> x(arch.d1), t(arch.d3);
  if (arch.d1 >= 2) {
    const Dataset ds = make_autoencoder_dataset(arch.d1);
    const auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(arch.d1));
    std::ranges::copy(ds.pattern(idx), x.begin());
    if (arch.d3 == arch.d1)
      std::ranges::copy(ds.target(idx), t.begin());
    else
      for (double& v : t)
        v = rng.uniform(-0.9, 0.9);
  } else {
    for (double& v : x)
      v = rng.uniform(-1.0, 1.0);
    for (double& v : t)
      v = rng.uniform(-0.9, 0.9);
  }

  if (kind == ParamKind::z) {
    const ZParams p = random_zparams(arch, rng);
    const auto trace = forward_z(p, x);
    return compare_gradients(flatten(grad_z(p, trace, t)), flatten(finite_diff_grad(p, x, t, step)));
  }
  const WParams p = random_wparams(arch, rng);
  const auto trace = forward_w(p, x);
  return compare_gradients(flatten(grad_w(p, trace, t)), flatten(finite_diff_grad(p, x, t, step)));
}

} // namespace zparam
