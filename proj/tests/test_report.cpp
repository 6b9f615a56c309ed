#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "hfcal/random.hpp"
#include "hfcal/report.hpp"

using namespace hfcal;

TEST_CASE("histogram filling") {
  Histogram h(10, 0.0, 1.0);
  h.fill(0.0);
  CHECK(h.count(0) == 1.0);
  h.fill(1.0);
  CHECK(h.overflow() == 1.0);
  h.fill(-1e-12);
  CHECK(h.underflow() == 1.0);
  h.fill(std::nextafter(1.0, 0.0));
  CHECK(h.count(9) == 1.0);
  h.fill(0.35, 2.5);
  CHECK(h.count(3) == 2.5);
  CHECK_THROWS_AS(h.fill(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(h.fill(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(Histogram(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Histogram(5, 1.0, 1.0), std::invalid_argument);

  Histogram g(10, -3.0, 3.0);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) g.fill(gaussian(rng, 0.0, 2.0));
  CHECK(g.total() == 1000.0);
}

TEST_CASE("histogram merging") {
  Histogram a(4, 0, 4), b(4, 0, 4), c(5, 0, 4);
  a.fill(1.5);
  b.fill(1.2);
  b.fill(9.0);
  a.merge(b);
  CHECK(a.count(1) == 2.0);
  CHECK(a.overflow() == 1.0);
  CHECK_FALSE(a.compatible(c));
  CHECK_THROWS_AS(a.merge(c), std::invalid_argument);
}

TEST_CASE("csv output") {
  SUBCASE("empty histogram") {
    std::ostringstream out;
    write_csv(Histogram(2, 0.0, 1.0), out);
    CHECK(out.str() == "bin_lo,bin_hi,count\n0,0.5,0\n0.5,1,0\nunderflow,,0\noverflow,,0\n");
  }
  SUBCASE("round trip") {
    Histogram h(50, 4.0, 6.0);
    Rng rng(2);
    for (int i = 0; i < 5000; ++i) h.fill(gaussian(rng, 5.0, 0.5));
    std::stringstream first;
    write_csv(h, first);
    const Histogram back = read_csv(first);
    CHECK(back == h);
    std::stringstream second;
    write_csv(back, second);
    CHECK(second.str() == first.str());
  }
  SUBCASE("malformed input") {
    std::istringstream bad("bin_lo,bin_hi,count\n0,1,x\n");
    CHECK_THROWS(read_csv(bad));
  }
}

TEST_CASE("core width") {
  SUBCASE("standard normal") {
    Rng rng(3);
    std::vector<double> x;
    for (int i = 0; i < 100000; ++i) x.push_back(gaussian(rng));
    const PeakFit f = core_width(x);
    CHECK(std::abs(f.mean) < 0.02);
    CHECK(std::abs(f.sigma - 1.0) < 0.02);
    CHECK(f.n_iterations <= 10);
  }
  SUBCASE("unbiased for smaller normal samples") {
    Rng rng(4);
    double sum = 0.0;
    const int reps = 50;
    for (int k = 0; k < reps; ++k) {
      std::vector<double> x;
      for (int i = 0; i < 10000; ++i) x.push_back(gaussian(rng, 5.0, 0.03));
      sum += core_width(x).sigma;
    }
    CHECK(std::abs(sum / reps - 0.03) < 0.02 * 0.03);
  }
  SUBCASE("peak on a wide pedestal") {
    // 80% N(0,1) plus 20% uniform over a range ten times wider than the peak.
    Rng rng(5);
    std::vector<double> x;
    for (int i = 0; i < 100000; ++i) x.push_back(bernoulli(rng, 0.8) ? gaussian(rng) : uniform(rng, -10.0, 10.0));
    CHECK(std::abs(core_width(x).sigma - 1.0) < 0.1);
  }
  SUBCASE("degenerate samples") {
    CHECK_THROWS_AS(core_width(std::vector<double>(49, 1.0)), DegenerateSample);
    CHECK_THROWS_AS(core_width(std::vector<double>(100, 1.0)), DegenerateSample);
    std::vector<double> ok;
    Rng rng(6);
    for (int i = 0; i < 50; ++i) ok.push_back(gaussian(rng));
    CHECK_NOTHROW(core_width(ok));
  }
  CHECK(truncated_normal_sd(2.0) == doctest::Approx(0.87962566).epsilon(1e-7));
}

TEST_CASE("svg plots") {
  Histogram a(20, 0, 1), b(20, 0, 1), c(10, 0, 1);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    a.fill(uniform01(rng));
    b.fill(uniform01(rng) * uniform01(rng));
  }
  const std::vector<PlotSeries> styles{{"S1 & raw", series_color(0)}, {"S3 <fit>", series_color(1)}};
  for (bool paneled : {false, true}) {
    std::ostringstream out;
    PlotOptions options;
    options.title = "masses";
    options.paneled = paneled;
    const std::vector<Histogram> hs{a, b};
    write_svg_plot(hs, styles, options, out);
    std::istringstream in(out.str());
    boost::property_tree::ptree tree;
    REQUIRE_NOTHROW(boost::property_tree::read_xml(in, tree));
    int polylines = 0;
    std::function<void(const boost::property_tree::ptree&)> walk = [&](const boost::property_tree::ptree& t) {
      for (const auto& [key, child] : t) {
        if (key == "polyline") ++polylines;
        walk(child);
      }
    };
    walk(tree);
    CHECK(polylines == 2);
  }
  std::ostringstream sink;
  CHECK_THROWS_AS(write_svg_plot(std::vector<Histogram>{}, std::vector<PlotSeries>{}, PlotOptions{}, sink),
                  std::invalid_argument);
  CHECK_THROWS_AS(write_svg_plot(std::vector<Histogram>{a, c}, styles, PlotOptions{}, sink), std::invalid_argument);
  CHECK_THROWS_AS(write_svg_plot(std::vector<Histogram>{a}, styles, PlotOptions{}, sink), std::invalid_argument);
}
