#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>
#include <string>

#include "hfcal/report.hpp"

namespace hfcal {

namespace {

constexpr double kPanelWidth = 640.0;
constexpr double kPanelHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;
constexpr int kTicks = 5;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, y0, w, h;  // plotting area in document coordinates
  double lo, hi, ymax;
  double px(double x) const { return x0 + (x - lo) / (hi - lo) * w; }
  double py(double y) const { return y0 + h - y / ymax * h; }
};

void draw_axes(std::ostream& out, const Frame& f, const PlotOptions& o) {
  out << "<rect x=\"" << num(f.x0) << "\" y=\"" << num(f.y0) << "\" width=\"" << num(f.w) << "\" height=\""
      << num(f.h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double x = f.lo + (f.hi - f.lo) * i / kTicks;
    const double y = f.ymax * i / kTicks;
    out << "<line x1=\"" << num(f.px(x)) << "\" y1=\"" << num(f.y0 + f.h) << "\" x2=\"" << num(f.px(x))
        << "\" y2=\"" << num(f.y0 + f.h - 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(f.y0 + f.h + 16)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(x) << "</text>\n";
    out << "<line x1=\"" << num(f.x0) << "\" y1=\"" << num(f.py(y)) << "\" x2=\"" << num(f.x0 + 5) << "\" y2=\""
        << num(f.py(y)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(f.x0 - 6) << "\" y=\"" << num(f.py(y) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << num(y) << "</text>\n";
  }
  out << "<text x=\"" << num(f.x0 + f.w / 2) << "\" y=\"" << num(f.y0 + f.h + 40)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(o.x_label) << "</text>\n";
  out << "<text x=\"" << num(f.x0 - 50) << "\" y=\"" << num(f.y0 + f.h / 2) << "\" text-anchor=\"middle\" "
      << "font-size=\"13\" transform=\"rotate(-90 " << num(f.x0 - 50) << ' ' << num(f.y0 + f.h / 2) << ")\">"
      << escape(o.y_label) << "</text>\n";
}

void draw_series(std::ostream& out, const Frame& f, const Histogram& h, const PlotSeries& s) {
  out << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
  out << num(f.px(h.lo())) << ',' << num(f.py(0.0));
  for (std::size_t i = 0; i < h.n_bins(); ++i) {
    const double y = f.py(h.count(i));
    out << ' ' << num(f.px(h.bin_lo(i))) << ',' << num(y) << ' ' << num(f.px(h.bin_hi(i))) << ',' << num(y);
  }
  out << ' ' << num(f.px(h.hi())) << ',' << num(f.py(0.0)) << "\"/>\n";
}

void draw_legend(std::ostream& out, const Frame& f, std::span<const PlotSeries> series) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = f.y0 + 18.0 + 16.0 * static_cast<double>(i);
    const double x = f.x0 + f.w - 150.0;
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(y - 4) << "\" x2=\"" << num(x + 20) << "\" y2=\""
        << num(y - 4) << "\" stroke=\"" << escape(series[i].color) << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(x + 26) << "\" y=\"" << num(y) << "\" font-size=\"11\">" << escape(series[i].label)
        << "</text>\n";
  }
}

}  // namespace

std::string series_color(std::size_t i) {
  static constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                         "#9467bd", "#ff7f0e", "#17becf"};
  return kColors[i % kColors.size()];
}

void write_svg_plot(std::span<const Histogram> hists, std::span<const PlotSeries> series, const PlotOptions& options,
                    std::ostream& out) {
  if (hists.empty()) throw std::invalid_argument("plot: no histograms");
  if (series.size() != hists.size()) throw std::invalid_argument("plot: one style per histogram required");
  for (const auto& h : hists) {
    if (!h.compatible(hists.front())) throw std::invalid_argument("plot: incompatible binning");
  }
  double ymax = 0.0;
  for (const auto& h : hists) {
    for (double c : h.counts()) ymax = std::max(ymax, c);
  }
  ymax = ymax > 0.0 ? 1.1 * ymax : 1.0;

  const std::size_t panels = options.paneled ? hists.size() : 1;
  const double width = kPanelWidth * static_cast<double>(panels);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(kPanelHeight)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(kPanelHeight) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(options.title) << "</text>\n";
  for (std::size_t p = 0; p < panels; ++p) {
    const Frame f{kPanelWidth * static_cast<double>(p) + kMarginLeft,
                  kMarginTop,
                  kPanelWidth - kMarginLeft - kMarginRight,
                  kPanelHeight - kMarginTop - kMarginBottom,
                  hists.front().lo(),
                  hists.front().hi(),
                  ymax};
    out << "<g>\n";
    draw_axes(out, f, options);
    if (options.paneled) {
      draw_series(out, f, hists[p], series[p]);
      draw_legend(out, f, series.subspan(p, 1));
    } else {
      for (std::size_t i = 0; i < hists.size(); ++i) draw_series(out, f, hists[i], series[i]);
      draw_legend(out, f, series);
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("failed to write plot");
}

}  // namespace hfcal
