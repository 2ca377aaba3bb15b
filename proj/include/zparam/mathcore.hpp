#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace zparam {

// f(h) = 2 / (1 + exp(-h)) - 1, the (-1, 1) sigmoid. Evaluated as tanh(h/2),
// which is the same function and never overflows.
double activation(double h) noexcept;

// f'(h) = (1 - f(h)^2) / 2, evaluated as 2e / (1 + e)^2 with e = exp(-|h|) so
// the saturated tails keep their relative precision instead of cancelling.
double activation_deriv(double h) noexcept;

// Seeded generator with a platform-independent stream.
//
// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
// standard. The distributions are done here rather than with <random>
// because std::normal_distribution and friends differ between standard
// libraries. Normals use the Marsaglia polar method; the second variate of
// each accepted pair is cached and returned by the next call.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Components of unit L2 norm (to 1e-12).
class UnitVector {
public:
  // Normalizes `v`; throws InvalidArgument when it is empty or has norm < 1e-12.
  static UnitVector normalized(std::vector<double> v);

  std::span<const double> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }

private:
  explicit UnitVector(std::vector<double> v) : components_(std::move(v)) {}
  std::vector<double> components_;
};

// Isotropic direction in R^dim: one standard normal per component, then
// normalize. Degenerate draws (norm < 1e-12) are redrawn.
UnitVector random_unit_vector(std::size_t dim, Rng& rng);

double l2_norm(std::span<const double> v) noexcept;

} // namespace zparam
