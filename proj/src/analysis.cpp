#include "zparam/analysis.hpp"

#include "zparam/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zparam {

AveragedCurve average_curves(std::span<const std::vector<double>> curves) {
  if (curves.empty())
    throw InvalidArgument("average of zero curves");
  AveragedCurve out;
  out.errors.assign(curves.front().size(), 0.0);
  out.run_count = curves.size();
  for (const auto& c : curves) {
    if (c.size() != out.errors.size())
      throw ShapeMismatch("curves to average have different lengths (" +
                          std::to_string(c.size()) + " vs " +
                          std::to_string(out.errors.size()) + ")");
    for (std::size_t t = 0; t < c.size(); ++t)
      out.errors[t] += c[t];
  }
  for (double& e : out.errors)
    e /= static_cast<double>(curves.size());
  return out;
}

AveragedCurve average_runs(std::span<const RunRecord> records) {
  std::vector<std::vector<double>> curves;
  curves.reserve(records.size());
  for (const auto& r : records)
    curves.push_back(r.errors);
  return average_curves(curves);
}

AveragedCurve monotone_envelope(const AveragedCurve& curve) {
  AveragedCurve out = curve;
  for (std::size_t t = 1; t < out.errors.size(); ++t)
    out.errors[t] = std::min(out.errors[t], out.errors[t - 1]);
  return out;
}

AveragedCurve moving_average(const AveragedCurve& curve, std::size_t window) {
  if (window <= 1)
    return curve;
  AveragedCurve out = curve;
  const std::size_t n = curve.errors.size();
  const std::size_t half = window / 2;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t >= half ? t - half : 0;
    const std::size_t hi = std::min(n - 1, t + (window - 1 - half));
    double sum = 0.0;
    for (std::size_t i = lo; i <= hi; ++i)
      sum += curve.errors[i];
    out.errors[t] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double epochs_to_reach(const AveragedCurve& curve, double level) {
  const auto& e = curve.errors;
  if (e.empty())
    throw InvalidArgument("epochs_to_reach on an empty curve");
  if (level > e.front())
    throw OutOfRange("level is above the curve's starting error");
  if (e.front() <= level)
    return 0.0;
  for (std::size_t t = 1; t < e.size(); ++t) {
    if (e[t] <= level) {
      const double drop = e[t - 1] - e[t];
      const double frac = drop > 0.0 ? (e[t - 1] - level) / drop : 1.0;
      return static_cast<double>(t - 1) + frac;
    }
  }
  throw OutOfRange("level is below the curve's minimum");
}

double percent_toward_zero(double level, double low, double high) noexcept {
  return 100.0 * (high - level) / (high - low);
}

SpeedupCurve epoch_speedup(const AveragedCurve& curve_w, const AveragedCurve& curve_z,
                           std::size_t n_levels) {
  if (curve_w.errors.empty() || curve_z.errors.empty())
    throw InvalidArgument("epoch_speedup on an empty curve");
  if (n_levels < 2)
    throw InvalidArgument("epoch_speedup needs at least 2 levels");

  const AveragedCurve w = monotone_envelope(curve_w);
  const AveragedCurve z = monotone_envelope(curve_z);
  // After the envelope, the maximum is the first entry and the minimum the last.
  const double high = std::min(w.errors.front(), z.errors.front());
  const double low = std::max(w.errors.back(), z.errors.back());
  if (!(high > low))
    throw NoOverlap("the two curves share no error range");

  SpeedupCurve out;
  out.window_low = low;
  out.window_high = high;
  for (std::size_t i = 0; i < n_levels; ++i) {
    // Pin the last level to the window bottom exactly.
    const double frac = static_cast<double>(i) / static_cast<double>(n_levels - 1);
    const double level = i + 1 == n_levels ? low : high - frac * (high - low);
    const double tw = epochs_to_reach(w, level);
    const double tz = epochs_to_reach(z, level);
    if (tw <= 0.0 || tz <= 0.0)
      continue;
    out.points.push_back({percent_toward_zero(level, low, high), tw / tz});
  }
  if (out.points.empty())
    throw NoOverlap("no error level inside the window is reached after epoch 0 by both curves");
  out.max_speedup = std::ranges::max(out.points, {}, &SpeedupPoint::speedup).speedup;
  return out;
}

double run_variance(std::span<const RunRecord> records, std::size_t epoch) {
  if (records.size() < 2)
    throw InvalidArgument("run_variance needs at least 2 runs");
  double mean = 0.0;
  for (const auto& r : records) {
    if (epoch >= r.errors.size())
      throw OutOfRange("epoch " + std::to_string(epoch) + " is past the end of a run");
    mean += r.errors[epoch];
  }
  mean /= static_cast<double>(records.size());
  double ss = 0.0;
  for (const auto& r : records) {
    const double d = r.errors[epoch] - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(records.size() - 1);
}

} // namespace zparam
