#include <doctest.h>

#include "zparam/data.hpp"
#include "zparam/error.hpp"
#include "zparam/grad.hpp"

#include <cmath>
#include <vector>

using namespace zparam;

namespace {

std::vector<double> random_input(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x)
    v = rng.uniform(-1.0, 1.0);
  return x;
}

bool all_zero(std::span<const double> v) {
  for (double x : v)
    if (x != 0.0)
      return false;
  return true;
}

} // namespace

TEST_CASE("zero scale zeroes the offset and orientation gradients") {
  Rng rng(1);
  const Architecture arch{4, 2, 4};
  ZParams z = random_zparams(arch, rng);
  for (ZLayer* l : {&z.layer1, &z.layer2})
    for (double& s : l->s)
      s = 0.0;
  const auto x = random_input(4, rng);
  const std::vector<double> t{1, -1, -1, -1};
  const ZGradient g = grad_z(z, forward_z(z, x), t);
  for (const ZLayer* l : {&g.layer1, &g.layer2}) {
    CHECK(all_zero(l->c));
    CHECK(all_zero(l->u.flat()));
  }
  // The scale gradient of the output layer is not annihilated.
  CHECK_FALSE(all_zero(g.layer2.s));
}

TEST_CASE("perfect reconstruction gives a zero gradient") {
  Rng rng(2);
  const Architecture arch{4, 2, 4};
  const ZParams z = random_zparams(arch, rng);
  const WParams w = random_wparams(arch, rng);
  const auto x = random_input(4, rng);

  const auto tz = forward_z(z, x);
  const ZGradient gz = grad_z(z, tz, tz.n3);
  for (const ZLayer* l : {&gz.layer1, &gz.layer2}) {
    CHECK(all_zero(l->s));
    CHECK(all_zero(l->c));
    CHECK(all_zero(l->u.flat()));
  }
  const auto tw = forward_w(w, x);
  const WGradient gw = grad_w(w, tw, tw.n3);
  CHECK(all_zero(gw.layer1.flat()));
  CHECK(all_zero(gw.layer2.flat()));
}

TEST_CASE("finite-difference check on random 4-2-4 and 8-3-8 instances") {
  Rng rng(12345);
  for (const Architecture arch : {Architecture{4, 2, 4}, Architecture{8, 3, 8}}) {
    for (int trial = 0; trial < 20; ++trial) {
      for (ParamKind kind : {ParamKind::w, ParamKind::z}) {
        const GradCheckReport r = gradient_check(kind, arch, rng);
        CAPTURE(trial);
        CHECK(r.constant == 2.0);
        CHECK(r.constant_error < 1e-6);
        CHECK(r.max_rel_error < 1e-6);
        CHECK(r.entries == flatten(WParams::zeros(arch)).size() + (kind == ParamKind::z ? arch.d2 + arch.d3 : 0));
      }
    }
  }
}

TEST_CASE("the finite-difference oracle is second order") {
  Rng rng(9);
  const Architecture arch{4, 2, 4};
  const WParams w = random_wparams(arch, rng);
  const auto x = random_input(4, rng);
  const std::vector<double> t{1, -1, -1, -1};
  const auto exact = flatten(grad_w(w, forward_w(w, x), t));
  auto err = [&](double step) {
    const auto fd = flatten(finite_diff_grad(w, x, t, step));
    double worst = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i)
      worst = std::max(worst, std::fabs(fd[i] - 2.0 * exact[i]));
    return worst;
  };
  const double ratio = err(1e-2) / err(5e-3);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  CHECK_THROWS_AS(finite_diff_grad(w, x, t, 0.0), InvalidArgument);
  CHECK_THROWS_AS(finite_diff_grad(w, x, t, -1e-5), InvalidArgument);
}

TEST_CASE("offset gradient is the scale times the bias gradient") {
  Rng rng(21);
  const Architecture arch{8, 3, 8};
  const auto data = make_autoencoder_dataset(8);
  for (int trial = 0; trial < 10; ++trial) {
    const ZParams z = random_zparams(arch, rng);
    const WParams w = z_to_w(z);
    const auto x = data.pattern(trial % 8);
    const auto t = data.target(trial % 8);
    const ZGradient gz = grad_z(z, forward_z(z, x), t);
    const WGradient gw = grad_w(w, forward_w(w, x), t);
    for (std::size_t p = 0; p < 3; ++p)
      CHECK(std::fabs(gz.layer1.c[p] - z.layer1.s[p] * gw.layer1(p, 0)) <= 1e-10);
    for (std::size_t p = 0; p < 8; ++p)
      CHECK(std::fabs(gz.layer2.c[p] - z.layer2.s[p] * gw.layer2(p, 0)) <= 1e-10);

    const auto dz = backprop_deltas(z, forward_z(z, x), t);
    const auto dw = backprop_deltas(w, forward_w(w, x), t);
    for (std::size_t i = 0; i < dz.a.size(); ++i)
      CHECK(std::fabs(dz.a[i] - dw.a[i]) <= 1e-12);
    for (std::size_t i = 0; i < dz.b.size(); ++i)
      CHECK(std::fabs(dz.b[i] - dw.b[i]) <= 1e-12);
  }
}

TEST_CASE("orientation gradient vanishes for a silent hidden node") {
  Rng rng(5);
  const Architecture arch{4, 2, 4};
  ZParams z = random_zparams(arch, rng);
  z.layer1.s[1] = 0.0; // n2(1) = f(0) = 0
  const auto x = random_input(4, rng);
  const std::vector<double> t{1, -1, -1, -1};
  const ZGradient g = grad_z(z, forward_z(z, x), t);
  for (std::size_t m = 0; m < 4; ++m)
    CHECK(g.layer2.u(m, 1) == 0.0);
}

TEST_CASE("finite differences agree on a zero gradient") {
  Rng rng(6);
  const Architecture arch{4, 2, 4};
  const ZParams z = random_zparams(arch, rng);
  const auto x = random_input(4, rng);
  const auto target = forward_z(z, x).n3;
  for (double v : flatten(finite_diff_grad(z, x, target)))
    CHECK(std::fabs(v) <= 1e-9);
}

TEST_CASE("grad_into matches the allocating form") {
  Rng rng(10);
  const Architecture arch{8, 3, 8};
  const ZParams z = random_zparams(arch, rng);
  const WParams w = random_wparams(arch, rng);
  const auto x = random_input(8, rng);
  const std::vector<double> t(8, -1.0);
  BackpropIntermediates d;
  ZGradient gz = ZParams::zeros(arch);
  grad_into(z, forward_z(z, x), t, d, gz);
  CHECK(gz == grad_z(z, forward_z(z, x), t));
  WGradient gw = WParams::zeros(arch);
  grad_into(w, forward_w(w, x), t, d, gw);
  CHECK(gw == grad_w(w, forward_w(w, x), t));
}

TEST_CASE("compare_gradients") {
  const std::vector<double> a{1.0, -2.0, 0.5};
  const std::vector<double> n{2.0, -4.0, 1.0};
  const auto r = compare_gradients(a, n);
  CHECK(r.fitted_constant == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.constant == 2.0);
  CHECK(r.max_rel_error == 0.0);
  CHECK(r.entries == 3);
  CHECK(compare_gradients(a, a).constant == 1.0);
  CHECK_THROWS_AS(compare_gradients(a, std::vector<double>{1.0}), ShapeMismatch);
}
