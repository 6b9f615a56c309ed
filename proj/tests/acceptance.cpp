// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hfcal/analysis.hpp"
#include "hfcal/kinfit.hpp"
#include "hfcal/particle_data.hpp"
#include "hfcal/pipeline.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hfcal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Single pi0 energy resolution before and after the mass fit.
Outcome criterion_1() {
  Outcome o;
  const auto t0 = Clock::now();
  const DetectorScenario s = test::scenario("S3");
  for (double e : {1.0, 2.0, 5.0, 10.0}) {
    const SinglePi0Point p = single_pi0_point(e, 100000, s, 0.8, stream_seed(101, static_cast<std::uint64_t>(e)),
                                              worker_count());
    const double limit = 1.5 * 0.03 / std::sqrt(e);
    std::ostringstream w;
    w << e << " GeV raw " << fmt("%.4f", p.raw.sigma) << " fit " << fmt("%.4f", p.fit.sigma) << " limit "
      << fmt("%.4f", limit);
    o.require(p.fit.sigma < p.raw.sigma && p.fit.sigma <= limit, w.str());
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, fmt("%.1f s", t));
  return o;
}

double ds_pi_separation(const std::string& scenario, double* sigma_bs, double* sigma_b0) {
  RunConfig run = RunConfig::load(test::config_path("run.cfg"));
  run.n_events = 20000;
  run.scenario_name = scenario;
  run.channel = Channel::ds_pi;
  const ChannelResult r =
      run_channel(run, test::generator_config(), test::scenario(scenario), test::cuts(), worker_count());
  *sigma_bs = r.metric("sigma_bs").value_or(0.0);
  *sigma_b0 = r.metric("sigma_b0").value_or(0.0);
  return r.metric("separation").value_or(0.0);
}

// Bs / B0 separation under S1 (no fit) and S3 (fit).
Outcome criterion_2() {
  Outcome o;
  const auto t0 = Clock::now();
  double s1_bs = 0, s1_b0 = 0, s3_bs = 0, s3_b0 = 0;
  const double s1 = ds_pi_separation("S1", &s1_bs, &s1_b0);
  const double s3 = ds_pi_separation("S3", &s3_bs, &s3_b0);
  o.require(std::abs(s1 - 0.6) <= 0.3, "S1 " + fmt("%.3f", s1) + " (sigma " + fmt("%.4f", s1_bs) + "/" +
                                           fmt("%.4f", s1_b0) + ")");
  o.require(std::abs(s3 - 1.6) <= 0.5, "S3 " + fmt("%.3f", s3) + " (sigma " + fmt("%.4f", s3_bs) + "/" +
                                           fmt("%.4f", s3_b0) + ")");
  o.require(s3 > 2.0 * s1, "S3 > 2 x S1");
  const double t = seconds_since(t0);
  o.require(t < 300.0, fmt("%.1f s", t));
  return o;
}

// Pull, chi2 and tail closure of the pi0 fit on correctly modelled photons.
Outcome criterion_3() {
  Outcome o;
  const DetectorScenario s = test::scenario("S3");
  const double energy = 20.0;
  const int target = 100000;
  Rng rng(stream_seed(303, 0));
  std::vector<double> sum(6, 0.0), sum2(6, 0.0);
  double chi2_sum = 0.0;
  int tail = 0, converged = 0, attempted = 0;
  while (converged < target) {
    const ThreeVector dir = isotropic_direction(rng);
    const double p = std::sqrt(energy * energy - constants::kPi0Mass * constants::kPi0Mass);
    const FourVector pi0 = from_momentum(p * dir, constants::kPi0Mass);
    auto [g1, g2] = two_body_decay(constants::kPi0Mass, 0.0, 0.0, rng);
    g1 = hfcal::boost(g1, beta_of(pi0));
    g2 = hfcal::boost(g2, beta_of(pi0));
    const FitResult r = fit_pi0_mass(photon_parameters(smear_photon(g1, s, rng), smear_photon(g2, s, rng)));
    ++attempted;
    if (!r.converged) continue;
    ++converged;
    for (int i = 0; i < 6; ++i) {
      sum[static_cast<std::size_t>(i)] += r.pulls(i);
      sum2[static_cast<std::size_t>(i)] += r.pulls(i) * r.pulls(i);
    }
    chi2_sum += r.chi2;
    tail += r.chi2 > 3.841;
  }
  const char* names[6] = {"E1", "theta1", "phi1", "E2", "theta2", "phi2"};
  for (std::size_t i = 0; i < 6; ++i) {
    const double mean = sum[i] / target;
    const double width = std::sqrt(sum2[i] / target - mean * mean);
    o.require(std::abs(mean) <= 0.02 && std::abs(width - 1.0) <= 0.03,
              std::string(names[i]) + " " + fmt("%+.4f", mean) + "/" + fmt("%.4f", width));
  }
  const double chi2_mean = chi2_sum / target;
  const double tail_frac = static_cast<double>(tail) / target;
  o.require(std::abs(chi2_mean - 1.0) <= 0.02, "chi2 mean " + fmt("%.4f", chi2_mean));
  o.require(std::abs(tail_frac - 0.05) <= 0.003, "P(chi2>3.841) " + fmt("%.4f", tail_frac));
  o.require(true, std::to_string(converged) + "/" + std::to_string(attempted) + " converged");
  return o;
}

// Kinematics oracles.
Outcome criterion_4() {
  Outcome o;
  const double m = 5.3669, m1 = 1.9683, m2 = 0.13957;
  const double e1 = (m * m + m1 * m1 - m2 * m2) / (2.0 * m);
  const double oracle = std::sqrt(e1 * e1 - m1 * m1);
  const double p = two_body_momentum(m, m1, m2);
  o.require(std::abs(p - oracle) < 1e-6 && std::abs(p - 2.3201) < 5e-5, "p* " + fmt("%.7f", p));

  std::vector<FourVector> mercedes;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    mercedes.emplace_back(1.0, std::cos(a), std::sin(a), 0.0);
  }
  const double t = thrust(mercedes).value;
  o.require(std::abs(t - 2.0 / 3.0) < 1e-6, "Mercedes T " + fmt("%.9f", t));

  Rng rng(404);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 3 + i % 6;
    std::vector<double> masses(static_cast<std::size_t>(n));
    for (auto& x : masses) x = uniform(rng, 0.0, 0.5);
    const FourVector parent = from_momentum(isotropic_direction(rng) * uniform(rng, 0.0, 40.0), 5.3669);
    FourVector sum = FourVector::Zero();
    for (const auto& d : n_body_phase_space(parent, masses, rng)) sum += d;
    worst = std::max(worst, (sum - parent).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-9, "closure " + fmt("%.2e", worst) + " GeV");

  const int cells = 10, n_events = 100000;
  std::vector<double> counts(cells * cells, 0.0);
  const std::vector<double> massless3{0.0, 0.0, 0.0};
  for (int i = 0; i < n_events; ++i) {
    const auto d = n_body_phase_space(FourVector(1, 0, 0, 0), massless3, rng);
    const int a = std::min(cells - 1, static_cast<int>(mass_squared(FourVector(d[0] + d[1])) * cells));
    const int b = std::min(cells - 1, static_cast<int>(mass_squared(FourVector(d[1] + d[2])) * cells));
    counts[static_cast<std::size_t>(a * cells + b)] += 1.0;
  }
  double chi2 = 0.0;
  int bins = 0;
  for (int a = 0; a < cells; ++a) {
    for (int b = 0; a + b < cells; ++b) {
      const double expected = n_events * (a + b == cells - 1 ? 0.5 : 1.0) / (cells * cells / 2.0);
      const double obs = counts[static_cast<std::size_t>(a * cells + b)];
      chi2 += (obs - expected) * (obs - expected) / expected;
      ++bins;
    }
  }
  const double pval = boost::math::gamma_q(0.5 * (bins - 1), 0.5 * chi2);
  o.require(pval > 0.01, "Dalitz p " + fmt("%.3f", pval));
  return o;
}

// B0 -> pi0 pi0 peak position, fit benefit, yield arithmetic and purity.
Outcome criterion_5() {
  Outcome o;
  GeneratorConfig g = test::generator_config();
  g.signal_chain = named_chain("b0_pi0pi0");
  const DetectorScenario s = test::scenario("S3");
  const SampleMasses m = run_sample(g, stream_seed(505, 0), 20000, Channel::pi0pi0, s, test::cuts(), worker_count());
  const PeakFit fit = core_width(m.fitted);
  const PeakFit raw = core_width(m.raw);
  o.require(std::abs(fit.mean - 5.2797) < 0.05, "peak " + fmt("%.4f", fit.mean));
  o.require(fit.sigma < raw.sigma, "width fit " + fmt("%.4f", fit.sigma) + " < raw " + fmt("%.4f", raw.sigma));
  const double yield = scale_yield(1.0, 1.0, constants::kBrB0ToPi0Pi0, constants::kRb, 0.40, 1e9);
  o.require(std::abs(yield - 267.6) <= 0.1, "yield " + fmt("%.2f", yield));
  o.require(s.fake_rate == 0.0 && s.photon_threshold == 0.05 && m.fake_candidates == 0,
            std::to_string(m.fake_candidates) + " fake candidates of " + std::to_string(m.candidates));
  return o;
}

// K* gamma: perfect-detector efficiency, strict boundaries, merged pi0 rejection.
Outcome criterion_6() {
  Outcome o;
  GeneratorConfig g = test::generator_config();
  g.signal_chain = named_chain("b0_kstar_gamma");
  const DetectorScenario perfect = builtin_scenario("perfect");
  const KStarGammaCuts& cuts = test::cuts().kstar_gamma;
  int truth_pass = 0, selected = 0;
  for (std::int64_t id = 0; id < 5000; ++id) {
    const Event ev = generate_event(g, 606, id);
    Rng rng(stream_seed(ev.seed, kDetectorStream));
    const RecoEvent r = reconstruct_event(ev, perfect, rng);
    if (!test::kstar_gamma_truth_passes(ev, r.axis, cuts)) continue;
    ++truth_pass;
    selected += !select_kstar_gamma(r, perfect, cuts, rng).empty();
  }
  o.require(truth_pass > 0 && selected == truth_pass,
            "efficiency " + std::to_string(selected) + "/" + std::to_string(truth_pass));

  const double v = 1.0, mk = 0.9, eg = 10.0, es = 40.0;
  const bool boundaries =
      !cuts.accepts(0.050, mk, eg, es) && cuts.accepts(std::nextafter(0.050, 1.0), mk, eg, es) &&
      !cuts.accepts(v, 0.85, eg, es) && cuts.accepts(v, std::nextafter(0.85, 1.0), eg, es) &&
      !cuts.accepts(v, 1.0, eg, es) && cuts.accepts(v, std::nextafter(1.0, 0.0), eg, es) &&
      !cuts.accepts(v, mk, 5.0, es) && cuts.accepts(v, mk, std::nextafter(5.0, 6.0), es) &&
      !cuts.accepts(v, mk, eg, 30.0) && cuts.accepts(v, mk, eg, std::nextafter(30.0, 31.0));
  o.require(boundaries, "cut boundaries");

  const DetectorScenario s3 = test::scenario("S3");
  Rng rng(6060);
  bool all_rejected = true;
  ReconstructedPhoton cluster;
  cluster.origin = PhotonOrigin::merged_pi0;
  for (int i = 0; i <= 350; ++i) {
    cluster.e = 0.1 * i;
    for (int k = 0; k < 100; ++k) all_rejected &= gamma_pi0_separation(cluster, s3, rng) == PhotonTag::pi0_like;
  }
  o.require(all_rejected, "merged pi0 <= 35 GeV rejected");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HFCAL_CLI_PATH) + " " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

// Determinism of the analyze command across invocations and thread counts.
Outcome criterion_7() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "hfcal_acceptance";
  fs::remove_all(base);
  const std::string common = "analyze --config " + test::config_path("run.cfg") + " --events 3000 --seed 77";
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"a", "--threads 4"}, {"b", "--threads 4"}, {"t1", "--threads 1"}, {"t8", "--threads 8"}};
  for (const auto& [dir, extra] : runs) {
    if (run_cli(common + " " + extra + " --out " + (base / dir).string()) != 0) {
      o.require(false, "cli run " + dir);
      return o;
    }
  }
  const fs::path sub = "ds_pi_S3";
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(base / "a" / sub)) files.push_back(entry.path().filename().string());
  std::sort(files.begin(), files.end());
  const bool has_all = std::count_if(files.begin(), files.end(), [](const std::string& f) {
                         return f.ends_with(".csv");
                       }) > 0 && std::find(files.begin(), files.end(), "report.txt") != files.end() &&
                       std::find(files.begin(), files.end(), "plot.svg") != files.end();
  o.require(has_all, std::to_string(files.size()) + " output files");
  bool repeat = true, threads = true;
  for (const auto& f : files) {
    const std::string a = slurp(base / "a" / sub / f);
    repeat &= a == slurp(base / "b" / sub / f);
    threads &= slurp(base / "t1" / sub / f) == slurp(base / "t8" / sub / f);
    threads &= a == slurp(base / "t1" / sub / f);
  }
  o.require(repeat, "repeat invocations byte-identical");
  o.require(threads, "--threads 1 and 8 byte-identical");
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"single pi0 fitted resolution", criterion_1}, {"Bs/B0 separation", criterion_2},
      {"fit statistical closure", criterion_3},      {"kinematics oracles", criterion_4},
      {"B0 -> pi0 pi0", criterion_5},                {"B0 -> K* gamma", criterion_6},
      {"determinism", criterion_7}};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
