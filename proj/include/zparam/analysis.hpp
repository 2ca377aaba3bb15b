#pragma once

#include "zparam/train.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace zparam {

struct AveragedCurve {
  std::vector<double> errors;
  std::size_t run_count = 0;

  std::size_t size() const noexcept { return errors.size(); }
};

struct SpeedupPoint {
  double percent_toward_zero = 0.0;
  double speedup = 0.0;
};

struct SpeedupCurve {
  std::vector<SpeedupPoint> points; // strictly increasing percent
  double max_speedup = 0.0;
  // The shared error window [low, high] the percentages are measured on.
  double window_low = 0.0;
  double window_high = 0.0;
};

// Element-wise mean. Throws InvalidArgument on an empty list and
// ShapeMismatch when the error curves differ in length (diverged runs must
// be filtered out by the caller).
AveragedCurve average_runs(std::span<const RunRecord> records);
AveragedCurve average_curves(std::span<const std::vector<double>> curves);

// Running minimum: out[t] = min(in[0..t]).
AveragedCurve monotone_envelope(const AveragedCurve& curve);

// Centered moving average with the window clipped at the ends. Display aid
// only; the speedup computation does not use it. window <= 1 is a copy.
AveragedCurve moving_average(const AveragedCurve& curve, std::size_t window);

// Fractional epoch at which a non-increasing curve first gets down to
// `level`, interpolating linearly between the bracketing epochs. Throws
// OutOfRange for a level above curve[0] or below the curve's minimum.
double epochs_to_reach(const AveragedCurve& curve, double level);

// 100 (high - level) / (high - low): 0 at the top of the window, 100 at the
// bottom (the error closest to zero).
double percent_toward_zero(double level, double low, double high) noexcept;

inline constexpr std::size_t kDefaultSpeedupLevels = 200;

// Epoch speedup t_w / t_z over the error window both curves attain,
// [max(min_w, min_z), min(max_w, max_z)], after taking each curve's
// monotone envelope. n_levels levels are spaced linearly from the top of the
// window (0 percent toward zero) to the bottom (100 percent); levels either
// curve reaches at epoch 0 are skipped since the ratio is undefined there.
// Throws NoOverlap when the window is empty or no level survives.
SpeedupCurve epoch_speedup(const AveragedCurve& curve_w, const AveragedCurve& curve_z,
                           std::size_t n_levels = kDefaultSpeedupLevels);

// Sample variance (n - 1 denominator) of E across runs at `epoch`.
double run_variance(std::span<const RunRecord> records, std::size_t epoch);

} // namespace zparam
