#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hfcal/report.hpp"

namespace hfcal {

namespace {

constexpr double kStartWindow = 3.0;
constexpr double kCoreWindow = 2.0;
constexpr double kIqrToSigma = 1.349;
constexpr double kRelativeTolerance = 1e-3;
constexpr int kMaxIterations = 10;

// Quantile with linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

Moments window_moments(const std::vector<double>& sorted, double lo, double hi) {
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  const auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
  Moments m;
  m.n = static_cast<std::size_t>(last - first);
  if (m.n < 2) return m;
  double sum = 0.0;
  for (auto it = first; it != last; ++it) sum += *it;
  m.mean = sum / static_cast<double>(m.n);
  double ss = 0.0;
  for (auto it = first; it != last; ++it) ss += (*it - m.mean) * (*it - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
  return m;
}

}  // namespace

double truncated_normal_sd(double k) {
  const double pdf = std::exp(-0.5 * k * k) / std::sqrt(2.0 * std::numbers::pi);
  const double mass = std::erf(k / std::numbers::sqrt2);
  return std::sqrt(1.0 - 2.0 * k * pdf / mass);
}

PeakFit core_width(std::span<const double> samples) {
  if (samples.size() < kMinCoreSamples) {
    throw DegenerateSample("core width needs at least " + std::to_string(kMinCoreSamples) + " samples, got " +
                           std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DegenerateSample("core width: non-finite sample");
  }
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw DegenerateSample("core width: all samples identical");

  const double median = quantile(sorted, 0.5);
  double sigma = (quantile(sorted, 0.75) - quantile(sorted, 0.25)) / kIqrToSigma;
  if (!(sigma > 0.0)) sigma = window_moments(sorted, sorted.front(), sorted.back()).sd;

  Moments m = window_moments(sorted, median - kStartWindow * sigma, median + kStartWindow * sigma);
  if (!(m.sd > 0.0)) throw DegenerateSample("core width: no spread inside the start window");
  PeakFit fit;
  fit.mean = m.mean;
  fit.sigma = m.sd / truncated_normal_sd(kStartWindow);
  fit.n_core = m.n;
  const double core_scale = truncated_normal_sd(kCoreWindow);
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    fit.n_iterations = iter;
    m = window_moments(sorted, fit.mean - kCoreWindow * fit.sigma, fit.mean + kCoreWindow * fit.sigma);
    if (!(m.sd > 0.0)) throw DegenerateSample("core width: window collapsed");
    const double next = m.sd / core_scale;
    const double change = std::abs(next - fit.sigma) / fit.sigma;
    fit.mean = m.mean;
    fit.sigma = next;
    fit.n_core = m.n;
    if (change < kRelativeTolerance) break;
  }
  return fit;
}

}  // namespace hfcal
