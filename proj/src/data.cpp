#include "zparam/data.hpp"

#include "zparam/error.hpp"

#include <bit>
#include <string>

namespace zparam {

void validate(const Architecture& arch) {
  if (arch.d1 == 0 || arch.d2 == 0 || arch.d3 == 0)
    throw InvalidArgument("architecture layers must have at least one node");
}

bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

Architecture architecture_for(std::size_t d1) {
  if (d1 < 4 || !is_power_of_two(d1))
    throw InvalidArgument("d1 must be a power of two >= 4, got " + std::to_string(d1));
  const auto d2 = static_cast<std::size_t>(std::countr_zero(d1));
  return {d1, d2, d1};
}

Dataset make_autoencoder_dataset(std::size_t d1, TargetEncoding encoding) {
  if (d1 < 2)
    throw InvalidArgument("autoencoder dataset needs d1 >= 2, got " + std::to_string(d1));
  const double n = static_cast<double>(d1);
  const double off = -1.0 / n;
  const double on = (n - 1.0) / n;

  Dataset ds;
  ds.d1_ = d1;
  ds.encoding_ = encoding;
  ds.patterns_.assign(d1, std::vector<double>(d1, off));
  for (std::size_t i = 0; i < d1; ++i)
    ds.patterns_[i][i] = on;
  if (encoding == TargetEncoding::shifted_input) {
    ds.targets_ = ds.patterns_;
  } else {
    ds.targets_.assign(d1, std::vector<double>(d1, -1.0));
    for (std::size_t i = 0; i < d1; ++i)
      ds.targets_[i][i] = 1.0;
  }
  return ds;
}

} // namespace zparam
