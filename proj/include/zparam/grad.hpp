#pragma once

#include "zparam/mathcore.hpp"
#include "zparam/model.hpp"

#include <span>
#include <vector>

namespace zparam {

// Output-layer deltas A(p) = f'(h2(p)) (n3(p) - t(p)) and hidden-layer deltas
// B(p) = f'(h1(p)) sum_m s2(m) u2(m,p) A(m), with w2(m,p) in place of
// s2(m) u2(m,p) for the w form.
//
// A carries no factor 2 from differentiating the square in E, so every
// analytic gradient below is exactly half of dE/dtheta. The constant is
// absorbed into the learning rate and is the same for both parametrizations.
struct BackpropIntermediates {
  std::vector<double> a;
  std::vector<double> b;
};

BackpropIntermediates backprop_deltas(const WParams& params, const ForwardTrace& trace,
                                      std::span<const double> target);
BackpropIntermediates backprop_deltas(const ZParams& params, const ForwardTrace& trace,
                                      std::span<const double> target);

// The six z derivatives:
//   dE/ds_v(p)   = [c_v(p) + sum_q u_v(p,q) n_v(q)] D_v(p)
//   dE/dc_v(p)   = s_v(p) D_v(p)
//   dE/du_v(p,q) = s_v(p) n_v(q) D_v(p)
// with D_2 = A, D_1 = B, n_1 = x and n_2 = f(h_1).
// `trace` must come from forward_z on the same params.
ZGradient grad_z(const ZParams& params, const ForwardTrace& trace,
                 std::span<const double> target);

// dE/dw_2(k,0) = A(k), dE/dw_2(k,j) = n2(j) A(k), and likewise with B for
// layer 1. `trace` must come from forward_w on the same params.
WGradient grad_w(const WParams& params, const ForwardTrace& trace,
                 std::span<const double> target);

// Training-loop variants writing into preallocated containers.
void grad_into(const ZParams& params, const ForwardTrace& trace, std::span<const double> target,
               BackpropIntermediates& deltas, ZGradient& out);
void grad_into(const WParams& params, const ForwardTrace& trace, std::span<const double> target,
               BackpropIntermediates& deltas, WGradient& out);

// Central differences (E(theta + step) - E(theta - step)) / (2 step) for every
// entry, each probe re-running a full forward pass. The forward pass here is
// a separate long-double evaluation that shares no code with forward_w /
// forward_z, so it can serve as an independent check on them.
inline constexpr double kDefaultFdStep = 1e-5;

WGradient finite_diff_grad(const WParams& params, std::span<const double> x,
                           std::span<const double> target, double step = kDefaultFdStep);
ZGradient finite_diff_grad(const ZParams& params, std::span<const double> x,
                           std::span<const double> target, double step = kDefaultFdStep);

// Result of comparing an analytic gradient against the finite-difference one.
struct GradCheckReport {
  // Least-squares fit of numeric ~= k * analytic.
  double fitted_constant = 0.0;
  // 1.0 or 2.0, whichever the fit is closest to.
  double constant = 0.0;
  // |fitted - constant|
  double constant_error = 0.0;
  // max_i |numeric_i - constant * analytic_i| / max(|constant * analytic_i|, |numeric_i|, 1e-8)
  double max_rel_error = 0.0;
  std::size_t entries = 0;
};

GradCheckReport compare_gradients(std::span<const double> analytic,
                                  std::span<const double> numeric);

// Random parameters for gradient checking: entries of O(1), no unit-norm
// constraint on u, so the check exercises the general (drifted) case.
WParams random_wparams(const Architecture& arch, Rng& rng);
ZParams random_zparams(const Architecture& arch, Rng& rng);

// Draws random parameters of `kind` plus a random dataset pattern for
// `arch`, and compares analytic and finite-difference gradients there.
GradCheckReport gradient_check(ParamKind kind, const Architecture& arch, Rng& rng,
                               double step = kDefaultFdStep);

} // namespace zparam
