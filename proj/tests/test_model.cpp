#include <doctest.h>

#include "zparam/error.hpp"
#include "zparam/grad.hpp"
#include "zparam/model.hpp"

#include <cmath>
#include <sstream>
#include <vector>

using namespace zparam;

namespace {

// 30-digit evaluation of f(f(1)).
constexpr double kChainN3 = 0.227032608717454300940;
constexpr double kF1 = 0.462117157260009758502;

WParams one_one_one_w() {
  WParams w = WParams::zeros({1, 1, 1});
  w.layer1(0, 1) = 1.0;
  w.layer2(0, 1) = 1.0;
  return w;
}

ZParams one_one_one_z() {
  ZParams z = ZParams::zeros({1, 1, 1});
  for (ZLayer* l : {&z.layer1, &z.layer2}) {
    l->s[0] = 1.0;
    l->c[0] = 0.0;
    l->u(0, 0) = 1.0;
  }
  return z;
}

std::vector<double> random_input(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x)
    v = rng.uniform(-1.0, 1.0);
  return x;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::fabs(a[i] - b[i]) <= tol);
}

} // namespace

TEST_CASE("zero parameters give a zero output") {
  const Architecture arch{5, 3, 5};
  const std::vector<double> x{0.3, -0.1, 0.7, 0.0, -0.9};
  for (const auto& t : {forward_w(WParams::zeros(arch), x), forward_z(ZParams::zeros(arch), x)}) {
    for (double v : t.h1)
      CHECK(v == 0.0);
    for (double v : t.h2)
      CHECK(v == 0.0);
    for (double v : t.n3)
      CHECK(v == 0.0);
  }
}

TEST_CASE("1-1-1 chain") {
  const std::vector<double> x{1.0};
  const auto tw = forward_w(one_one_one_w(), x);
  CHECK(tw.n1 == x);
  CHECK(tw.h1[0] == 1.0);
  CHECK(std::fabs(tw.n2[0] - 0.4621171573) < 1e-9);
  CHECK(tw.h2[0] == doctest::Approx(kF1).epsilon(1e-14));
  CHECK(tw.n3[0] == doctest::Approx(kChainN3).epsilon(1e-14));

  const auto tz = forward_z(one_one_one_z(), x);
  CHECK(tz.h2[0] == tw.h2[0]);
  CHECK(tz.n3[0] == tw.n3[0]);
}

TEST_CASE("forward_z is invariant to rescaling u and c against s") {
  Rng rng(3);
  const Architecture arch{6, 3, 6};
  const ZParams z = random_zparams(arch, rng);
  ZParams scaled = z;
  const double lambda = 2.5;
  for (ZLayer* l : {&scaled.layer1, &scaled.layer2}) {
    for (double& v : l->s)
      v /= lambda;
    for (double& v : l->c)
      v *= lambda;
    for (double& v : l->u.flat())
      v *= lambda;
  }
  const auto x = random_input(6, rng);
  check_close(forward_z(z, x).n3, forward_z(scaled, x).n3, 1e-14);
}

TEST_CASE("training_error") {
  ForwardTrace t;
  t.n3 = {0.0, 0.0};
  CHECK(training_error(t, std::vector<double>{0.5, -0.5}) == 0.5);
  t.n3 = {0.25, -0.75, 0.5};
  CHECK(training_error(t, t.n3) == 0.0);
  CHECK_THROWS_AS(training_error(t, std::vector<double>{1.0}), ShapeMismatch);
}

TEST_CASE("w_to_z examples") {
  WParams w = WParams::zeros({2, 2, 1});
  w.layer1(0, 0) = 0.0;
  w.layer1(0, 1) = 1.0;
  w.layer1(0, 2) = 0.0;
  w.layer1(1, 0) = 2.0;
  w.layer1(1, 1) = 3.0;
  w.layer1(1, 2) = 4.0;
  w.layer2(0, 1) = 1.0;
  const ZParams z = w_to_z(w);
  CHECK(z.layer1.s[0] == 1.0);
  CHECK(z.layer1.c[0] == 0.0);
  CHECK(z.layer1.u(0, 0) == 1.0);
  CHECK(z.layer1.u(0, 1) == 0.0);
  CHECK(z.layer1.s[1] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(z.layer1.c[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(z.layer1.u(1, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(z.layer1.u(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("w_to_z rejects a zero-norm row") {
  WParams w = WParams::zeros({2, 2, 2});
  w.layer1(0, 1) = 1.0;
  w.layer1(1, 1) = 1.0;
  w.layer2(0, 1) = 1.0;
  w.layer2(1, 0) = 0.7; // bias only
  try {
    (void)w_to_z(w);
    FAIL("expected DegenerateHyperplane");
  } catch (const DegenerateHyperplane& e) {
    CHECK(e.layer() == 1);
    CHECK(e.node() == 1);
  }
}

TEST_CASE("z_to_w examples") {
  ZParams z = ZParams::zeros({2, 2, 1});
  z.layer1.s = {1.0, 0.0};
  z.layer1.c = {0.0, 3.0};
  z.layer1.u(0, 0) = 0.6;
  z.layer1.u(0, 1) = 0.8;
  z.layer1.u(1, 0) = 0.6;
  z.layer1.u(1, 1) = -0.8;
  const WParams w = z_to_w(z);
  CHECK(w.layer1(0, 0) == 0.0);
  CHECK(w.layer1(0, 1) == 0.6);
  CHECK(w.layer1(0, 2) == 0.8);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(w.layer1(1, j) == 0.0);
}

TEST_CASE("parametrization equivalence over 500 random pairs") {
  Rng rng(2718);
  const Architecture archs[] = {{4, 2, 4}, {8, 3, 8}, {5, 3, 2}, {16, 4, 16}};
  for (int trial = 0; trial < 500; ++trial) {
    const Architecture arch = archs[trial % 4];
    const WParams w = random_wparams(arch, rng);
    const auto x = random_input(arch.d1, rng);
    const ZParams z = w_to_z(w);
    const auto tw = forward_w(w, x);
    const auto tz = forward_z(z, x);
    check_close(tw.h1, tz.h1, 1e-12);
    check_close(tw.n2, tz.n2, 1e-12);
    check_close(tw.h2, tz.h2, 1e-12);
    check_close(tw.n3, tz.n3, 1e-12);

    const WParams back = z_to_w(z);
    check_close(flatten(back), flatten(w), 1e-12);
  }
}

TEST_CASE("w_to_z(z_to_w(z)) stays in the same equivalence class") {
  Rng rng(77);
  const Architecture arch{8, 3, 8};
  for (int trial = 0; trial < 50; ++trial) {
    const ZParams z = random_zparams(arch, rng);
    const ZParams canon = w_to_z(z_to_w(z));
    // Canonical form: s >= 0 and unit u.
    for (const ZLayer* l : {&canon.layer1, &canon.layer2})
      for (std::size_t p = 0; p < l->nodes(); ++p) {
        CHECK(l->s[p] >= 0.0);
        CHECK(std::fabs(l2_norm(l->u.row(p)) - 1.0) <= 1e-12);
      }
    const auto x = random_input(8, rng);
    check_close(forward_z(z, x).n3, forward_z(canon, x).n3, 1e-12);
  }
}

TEST_CASE("forward_into matches forward and reuses the trace") {
  Rng rng(4);
  const Architecture arch{8, 3, 8};
  const WParams w = random_wparams(arch, rng);
  const ZParams z = random_zparams(arch, rng);
  ForwardTrace t;
  for (int i = 0; i < 3; ++i) {
    const auto x = random_input(8, rng);
    forward_into(w, x, t);
    CHECK(t.n3 == forward_w(w, x).n3);
    forward_into(z, x, t);
    CHECK(t.n3 == forward_z(z, x).n3);
  }
}

TEST_CASE("shape errors") {
  const WParams w = WParams::zeros({4, 2, 4});
  const ZParams z = ZParams::zeros({4, 2, 4});
  const std::vector<double> x(3, 0.0);
  CHECK_THROWS_AS(forward_w(w, x), ShapeMismatch);
  CHECK_THROWS_AS(forward_z(z, x), ShapeMismatch);
  CHECK_THROWS_AS(check_shape(w, Architecture{4, 3, 4}), ShapeMismatch);
  ZParams bad = z;
  bad.layer1.c.pop_back();
  CHECK_THROWS_AS(check_shape(bad, Architecture{4, 2, 4}), ShapeMismatch);
  CHECK(w.architecture() == Architecture{4, 2, 4});
  CHECK(z.architecture() == Architecture{4, 2, 4});
}

TEST_CASE("flatten and assign_flat roundtrip") {
  Rng rng(8);
  const Architecture arch{4, 2, 4};
  const ZParams z = random_zparams(arch, rng);
  const auto flat = flatten(z);
  CHECK(flat.size() == 2 * (2 + 4) + 4 * (2 + 2));
  CHECK(flat[0] == z.layer1.s[0]);
  CHECK(flat[2] == z.layer1.c[0]);
  CHECK(flat[4] == z.layer1.u(0, 0));
  ZParams copy = ZParams::zeros(arch);
  assign_flat(copy, flat);
  CHECK(copy == z);

  const WParams w = random_wparams(arch, rng);
  WParams wc = WParams::zeros(arch);
  assign_flat(wc, flatten(w));
  CHECK(wc == w);
  CHECK_THROWS_AS(assign_flat(wc, std::vector<double>(3)), ShapeMismatch);
}

TEST_CASE("params CSV layout") {
  ZParams z = ZParams::zeros({2, 1, 1});
  z.layer1.s = {0.5};
  z.layer1.c = {-0.25};
  z.layer1.u(0, 0) = 0.6;
  z.layer1.u(0, 1) = 0.8;
  z.layer2.s = {2.0};
  z.layer2.u(0, 0) = 1.0;
  std::ostringstream out;
  write_params_csv(out, z);
  const std::string text = out.str();
  CHECK(text.rfind("layer,node,field,index,value\n", 0) == 0);
  CHECK(text.find("0,0,s,0,0.5\n") != std::string::npos);
  CHECK(text.find("0,0,c,0,-0.25\n") != std::string::npos);
  CHECK(text.find("0,0,u,2,0.80000000000000004\n") != std::string::npos);
  CHECK(text.find("1,0,u,1,1\n") != std::string::npos);

  std::ostringstream wout;
  write_params_csv(wout, z_to_w(z));
  CHECK(wout.str().find("0,0,w,0,-0.125\n") != std::string::npos);
}
