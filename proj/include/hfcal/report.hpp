#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfcal {

// Fixed-width binning on [lo, hi) with under- and overflow.
class Histogram {
 public:
  Histogram(std::size_t n_bins, double lo, double hi);

  // Throws std::invalid_argument for non-finite values.
  void fill(double value, double weight = 1.0);
  // Throws std::invalid_argument for incompatible binning.
  void merge(const Histogram& other);
  bool compatible(const Histogram& other) const;

  std::size_t n_bins() const { return counts_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double bin_width() const { return (hi_ - lo_) / static_cast<double>(counts_.size()); }
  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
  double count(std::size_t i) const { return counts_.at(i); }
  const std::vector<double>& counts() const { return counts_; }
  double underflow() const { return underflow_; }
  double overflow() const { return overflow_; }
  double total() const;

  bool operator==(const Histogram&) const = default;

 private:
  double lo_;
  double hi_;
  std::vector<double> counts_;
  double underflow_ = 0.0;
  double overflow_ = 0.0;
};

// `bin_lo,bin_hi,count` rows, then `underflow,,count` and `overflow,,count`.
void write_csv(const Histogram& h, std::ostream& out);
Histogram read_csv(std::istream& in);

class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeakFit {
  double mean = 0.0;
  double sigma = 0.0;
  std::size_t n_core = 0;
  int n_iterations = 0;
};

inline constexpr std::size_t kMinCoreSamples = 50;

// Iterated truncated moments: a median +- 3 IQR/1.349 start window, then
// mean +- 2 sigma windows until sigma changes by less than 0.1% (at most 10
// iterations). The truncated standard deviation is rescaled so that the
// estimate is unbiased for a Gaussian peak.
PeakFit core_width(std::span<const double> samples);

// Standard deviation of a unit Gaussian truncated to +-k sigma.
double truncated_normal_sd(double k);

struct PlotSeries {
  std::string label;
  std::string color;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "mass [GeV]";
  std::string y_label = "candidates / bin";
  bool paneled = false;  // side-by-side panels instead of an overlay
};

// Step histograms as polylines in a self-contained SVG document. Throws
// std::invalid_argument on empty input, mismatched style count or
// incompatible binning.
void write_svg_plot(std::span<const Histogram> hists, std::span<const PlotSeries> series, const PlotOptions& options,
                    std::ostream& out);

// Default colour for the i-th series.
std::string series_color(std::size_t i);

}  // namespace hfcal
