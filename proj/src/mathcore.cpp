#include "zparam/mathcore.hpp"

#include "zparam/error.hpp"

#include <cmath>

namespace zparam {

double activation(double h) noexcept { return std::tanh(0.5 * h); }

double activation_deriv(double h) noexcept {
  const double e = std::exp(-std::fabs(h));
  const double denom = 1.0 + e;
  return 2.0 * e / (denom * denom);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double x, y, r2;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    r2 = x * x + y * y;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_ = y * scale;
  has_spare_ = true;
  return x * scale;
}

double l2_norm(std::span<const double> v) noexcept {
  double sum = 0.0;
  for (double x : v)
    sum += x * x;
  return std::sqrt(sum);
}

UnitVector UnitVector::normalized(std::vector<double> v) {
  if (v.empty())
    throw InvalidArgument("unit vector needs dimension >= 1");
  const double norm = l2_norm(v);
  if (!(norm >= 1e-12) || !std::isfinite(norm))
    throw InvalidArgument("cannot normalize a vector with norm " + std::to_string(norm));
  for (double& x : v)
    x /= norm;
  return UnitVector(std::move(v));
}

UnitVector random_unit_vector(std::size_t dim, Rng& rng) {
  if (dim == 0)
    throw InvalidArgument("random_unit_vector: dim must be >= 1");
  std::vector<double> v(dim);
  for (;;) {
    for (double& x : v)
      x = rng.normal();
    if (l2_norm(v) >= 1e-12)
      return UnitVector::normalized(std::move(v));
  }
}

} // namespace zparam
