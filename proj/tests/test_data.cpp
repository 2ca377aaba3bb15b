#include <doctest.h>

#include "zparam/data.hpp"
#include "zparam/error.hpp"

#include <cmath>

using namespace zparam;

TEST_CASE("mean-shifted one-hot patterns") {
  const auto d4 = make_autoencoder_dataset(4);
  REQUIRE(d4.size() == 4);
  const std::vector<double> p0(d4.pattern(0).begin(), d4.pattern(0).end());
  CHECK(p0 == std::vector<double>{0.75, -0.25, -0.25, -0.25});

  const auto d2 = make_autoencoder_dataset(2);
  CHECK(d2.pattern(0)[0] == 0.5);
  CHECK(d2.pattern(0)[1] == -0.5);
  CHECK(d2.pattern(1)[0] == -0.5);
  CHECK(d2.pattern(1)[1] == 0.5);
}

TEST_CASE("every column has zero mean") {
  for (std::size_t d1 : {2u, 3u, 8u, 100u, 128u}) {
    const auto ds = make_autoencoder_dataset(d1);
    CHECK(ds.d1() == d1);
    for (std::size_t k = 0; k < d1; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < d1; ++i) {
        REQUIRE(ds.pattern(i).size() == d1);
        sum += ds.pattern(i)[k];
      }
      CHECK(std::fabs(sum / static_cast<double>(d1)) <= 1e-12);
    }
  }
}

TEST_CASE("target encodings") {
  const auto pm = make_autoencoder_dataset(8);
  CHECK(pm.encoding() == TargetEncoding::plus_minus_one);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(pm.target(i)[k] == (i == k ? 1.0 : -1.0));

  const auto sh = make_autoencoder_dataset(8, TargetEncoding::shifted_input);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(sh.target(i)[k] == sh.pattern(i)[k]);
      CHECK(std::fabs(sh.target(i)[k]) < 1.0);
    }
}

TEST_CASE("dataset construction is deterministic and validated") {
  const auto a = make_autoencoder_dataset(16);
  const auto b = make_autoencoder_dataset(16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t k = 0; k < 16; ++k) {
      CHECK(a.pattern(i)[k] == b.pattern(i)[k]);
      CHECK(a.target(i)[k] == b.target(i)[k]);
    }
  CHECK_THROWS_AS(make_autoencoder_dataset(1), InvalidArgument);
  CHECK_THROWS_AS(make_autoencoder_dataset(0), InvalidArgument);
  CHECK_THROWS(a.pattern(16));
}

TEST_CASE("architecture_for") {
  CHECK(architecture_for(8) == Architecture{8, 3, 8});
  CHECK(architecture_for(16) == Architecture{16, 4, 16});
  CHECK(architecture_for(128) == Architecture{128, 7, 128});
  CHECK(architecture_for(4) == Architecture{4, 2, 4});
  for (std::size_t bad : {0u, 1u, 2u, 6u, 9u, 100u})
    CHECK_THROWS_AS(architecture_for(bad), InvalidArgument);
  CHECK_THROWS_AS(validate(Architecture{1, 0, 1}), InvalidArgument);
}
