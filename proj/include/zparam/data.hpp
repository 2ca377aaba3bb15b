#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zparam {

// Layer node counts of the 3-layer network.
struct Architecture {
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  std::size_t d3 = 0;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Throws InvalidArgument unless every layer has at least one node.
void validate(const Architecture& arch);

// The d1-d2-d1 autoencoder family with d2 = log2(d1); d1 must be a power of
// two >= 4.
Architecture architecture_for(std::size_t d1);

bool is_power_of_two(std::size_t n) noexcept;

// How the autoencoder targets are encoded. Inputs are always the mean-shifted
// one-hot patterns.
enum class TargetEncoding {
  // The one-hot pattern in the (-1, 1) encoding: +1 at position i, -1
  // elsewhere. The activation only reaches these asymptotically.
  plus_minus_one,
  // Targets equal the mean-shifted inputs, (d1-1)/d1 and -1/d1. Every target
  // is strictly inside (-1, 1), but training tends to stall in a shallow
  // local minimum for both parametrizations.
  shifted_input,
};

// One-hot patterns e_0 .. e_{d1-1}, each shifted by the per-component mean
// 1/d1, so pattern i holds (d1-1)/d1 at position i and -1/d1 elsewhere.
class Dataset {
public:
  std::size_t d1() const noexcept { return d1_; }
  std::size_t size() const noexcept { return patterns_.size(); }

  std::span<const double> pattern(std::size_t i) const { return patterns_.at(i); }
  std::span<const double> target(std::size_t i) const { return targets_.at(i); }

  TargetEncoding encoding() const noexcept { return encoding_; }

  friend Dataset make_autoencoder_dataset(std::size_t d1, TargetEncoding encoding);

private:
  std::size_t d1_ = 0;
  TargetEncoding encoding_ = TargetEncoding::plus_minus_one;
  std::vector<std::vector<double>> patterns_;
  std::vector<std::vector<double>> targets_;
};

Dataset make_autoencoder_dataset(std::size_t d1,
                                 TargetEncoding encoding = TargetEncoding::plus_minus_one);

} // namespace zparam
