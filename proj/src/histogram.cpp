#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "hfcal/report.hpp"

namespace hfcal {

Histogram::Histogram(std::size_t n_bins, double lo, double hi) : lo_(lo), hi_(hi), counts_(n_bins, 0.0) {
  if (n_bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("histogram needs finite hi > lo");
  }
}

double Histogram::bin_lo(std::size_t i) const { return lo_ + static_cast<double>(i) * bin_width(); }

double Histogram::bin_hi(std::size_t i) const {
  return i + 1 == counts_.size() ? hi_ : lo_ + static_cast<double>(i + 1) * bin_width();
}

void Histogram::fill(double value, double weight) {
  if (!std::isfinite(value)) throw std::invalid_argument("histogram fill with non-finite value");
  if (value < lo_) {
    underflow_ += weight;
    return;
  }
  if (value >= hi_) {
    overflow_ += weight;
    return;
  }
  auto index = static_cast<std::size_t>(std::floor((value - lo_) / bin_width()));
  if (index >= counts_.size()) index = counts_.size() - 1;
  counts_[index] += weight;
}

bool Histogram::compatible(const Histogram& other) const {
  return n_bins() == other.n_bins() && lo_ == other.lo_ && hi_ == other.hi_;
}

void Histogram::merge(const Histogram& other) {
  if (!compatible(other)) throw std::invalid_argument("cannot merge histograms with different binning");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  underflow_ += other.underflow_;
  overflow_ += other.overflow_;
}

double Histogram::total() const {
  double sum = underflow_ + overflow_;
  for (double c : counts_) sum += c;
  return sum;
}

namespace {

std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_csv(const Histogram& h, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.n_bins(); ++i) {
    out << g9(h.bin_lo(i)) << ',' << g9(h.bin_hi(i)) << ',' << g9(h.count(i)) << '\n';
  }
  out << "underflow,," << g9(h.underflow()) << '\n';
  out << "overflow,," << g9(h.overflow()) << '\n';
  if (!out) throw std::runtime_error("failed to write histogram csv");
}

Histogram read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "bin_lo,bin_hi,count") {
    throw std::invalid_argument("csv: missing header row");
  }
  std::vector<double> los, his, counts;
  double under = 0.0, over = 0.0;
  bool have_under = false, have_over = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("csv line " + std::to_string(line_no) + ": need 3 fields");
    const std::string_view view = line;
    const std::string_view f0 = view.substr(0, c1);
    const std::string_view f1 = view.substr(c1 + 1, c2 - c1 - 1);
    const double count = parse_double(view.substr(c2 + 1), line_no);
    if (f0 == "underflow") {
      under = count;
      have_under = true;
    } else if (f0 == "overflow") {
      over = count;
      have_over = true;
    } else {
      los.push_back(parse_double(f0, line_no));
      his.push_back(parse_double(f1, line_no));
      counts.push_back(count);
    }
  }
  if (counts.empty() || !have_under || !have_over) throw std::invalid_argument("csv: incomplete histogram");
  Histogram h(counts.size(), los.front(), his.back());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0.0) h.fill(0.5 * (los[i] + his[i]), counts[i]);
  }
  if (under != 0.0) h.fill(h.lo() - 1.0, under);
  if (over != 0.0) h.fill(h.hi(), over);
  return h;
}

}  // namespace hfcal
