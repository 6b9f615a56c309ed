#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "hfcal/analysis.hpp"
#include "hfcal/config.hpp"
#include "hfcal/particle_data.hpp"
#include "hfcal/report.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hfcal;

namespace {

GeneratorConfig config_with_chain(const std::string& chain) {
  GeneratorConfig c = test::generator_config();
  c.signal_chain = named_chain(chain);
  return c;
}

ReconstructedTrack track_along(const ThreeVector& p) {
  ReconstructedTrack t;
  t.p = from_momentum(p, 0.13957);
  t.charge = 1;
  return t;
}

}  // namespace

TEST_CASE("hemisphere split") {
  const UnitAxis axis = UnitAxis::from(0, 0, 1);
  std::vector<ReconstructedTrack> tracks{track_along({0, 0, 1}), track_along({0, 0, -1}), track_along({1, 0, 0})};
  ReconstructedPhoton g;
  g.e = 1.0;
  g.theta = 0.5 * std::numbers::pi;
  std::vector<ReconstructedPhoton> photons{g};
  const auto [plus, minus] = split_hemispheres(photons, tracks, axis);
  CHECK(plus.tracks.size() == 2);
  CHECK(minus.tracks.size() == 1);
  CHECK(plus.photons.size() == 1);
  CHECK(plus.side == Side::plus);
  CHECK(minus.side == Side::minus);
}

TEST_CASE("separation metric") {
  CHECK(bs_b0_separation(0.1453 / std::sqrt(2.0), 0.1453 / std::sqrt(2.0), 0.0872) == doctest::Approx(0.600).epsilon(1e-3));
  CHECK(bs_b0_separation(0.0545 / std::sqrt(2.0), 0.0545 / std::sqrt(2.0), 0.0872) == doctest::Approx(1.600).epsilon(1e-3));
  CHECK(bs_b0_separation(0.03, 0.05, 0.0872) == bs_b0_separation(0.05, 0.03, 0.0872));
  CHECK_THROWS_AS(bs_b0_separation(0.0, 0.05, 0.0872), std::domain_error);
  CHECK_THROWS_AS(bs_b0_separation(0.05, -0.01, 0.0872), std::domain_error);
}

TEST_CASE("yield scaling") {
  const double n_z = 1e9;
  CHECK(std::abs(scale_yield(1, 1, constants::kBrB0ToPi0Pi0, constants::kRb, 0.40, n_z) - 267.6) < 0.1);
  CHECK(scale_yield(50, 100, 1e-3, 0.2, 0.5, n_z) == doctest::Approx(n_z * 2 * 0.2 * 0.5 * 1e-3 * 0.5));
  CHECK_THROWS_AS(scale_yield(1, 0, 0.1, 0.2, 0.4, n_z), std::domain_error);
  CHECK_THROWS_AS(scale_yield(2, 1, 0.1, 0.2, 0.4, n_z), std::domain_error);
  CHECK_THROWS_AS(scale_yield(1, 1, 1.5, 0.2, 0.4, n_z), std::domain_error);
}

TEST_CASE("b-tagging rates") {
  const BTagModel m;
  Rng rng(1);
  const int n = 100000;
  for (auto [f, p] : {std::pair{Flavour::b, 0.9}, std::pair{Flavour::c, 0.1}, std::pair{Flavour::uds, 0.0}}) {
    CHECK(m.probability(f) == p);
    int tagged = 0;
    for (int i = 0; i < n; ++i) tagged += m.tag(f, rng);
    CHECK(std::abs(tagged - p * n) <= 5.0 * std::sqrt(n * p * (1 - p)));
  }
  BTagModel bad;
  bad.eff_b = 1.2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("K* gamma cut boundaries are strict") {
  const KStarGammaCuts c;
  const double inside_v = 1.0, inside_m = 0.9, inside_e = 10.0, inside_s = 40.0;
  CHECK(c.accepts(inside_v, inside_m, inside_e, inside_s));

  CHECK_FALSE(c.accepts(0.050, inside_m, inside_e, inside_s));
  CHECK(c.accepts(std::nextafter(0.050, 1.0), inside_m, inside_e, inside_s));
  CHECK_FALSE(c.accepts(std::nextafter(0.050, 0.0), inside_m, inside_e, inside_s));

  CHECK_FALSE(c.accepts(inside_v, 0.85, inside_e, inside_s));
  CHECK(c.accepts(inside_v, std::nextafter(0.85, 1.0), inside_e, inside_s));
  CHECK_FALSE(c.accepts(inside_v, 1.0, inside_e, inside_s));
  CHECK(c.accepts(inside_v, std::nextafter(1.0, 0.0), inside_e, inside_s));

  CHECK_FALSE(c.accepts(inside_v, inside_m, 5.0, inside_s));
  CHECK(c.accepts(inside_v, inside_m, std::nextafter(5.0, 6.0), inside_s));

  CHECK_FALSE(c.accepts(inside_v, inside_m, inside_e, 30.0));
  CHECK(c.accepts(inside_v, inside_m, inside_e, std::nextafter(30.0, 31.0)));
}

TEST_CASE("cut file") {
  const Cuts& c = test::cuts();
  CHECK(c.kstar_gamma.vertex_min == 0.050);
  CHECK(c.kstar_gamma.kpi_min == 0.85);
  CHECK(c.kstar_gamma.kpi_max == 1.0);
  CHECK(c.kstar_gamma.photon_energy_min == 5.0);
  CHECK(c.kstar_gamma.system_energy_min == 30.0);
  CHECK(c.pi0pi0.btag.eff_b == 0.9);
  CHECK(c.pi0pi0.btag.mistag_c == 0.1);
  CHECK(c.single_pi0.energies == std::vector<double>{1, 2, 5, 10});
  CHECK_FALSE(describe_cuts(c, "ds_pi").empty());

  const auto path = std::filesystem::temp_directory_path() / "hfcal_bad_cuts.cfg";
  {
    std::ifstream in(test::config_path("cuts.cfg"));
    std::ofstream out(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("kpi_max", 0) != 0) out << line << '\n';
    }
  }
  CHECK_THROWS_AS(Cuts::load(path), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("Ds pi reconstruction at a perfect detector") {
  const GeneratorConfig c = config_with_chain("bs_ds_pi");
  const DetectorScenario s = builtin_scenario("perfect");
  int events = 0, good = 0;
  for (std::int64_t id = 0; id < 400; ++id) {
    const Event ev = generate_event(c, 4, id);
    Rng rng(static_cast<std::uint64_t>(id));
    const RecoEvent r = reconstruct_event(ev, s, rng);
    const auto cands = select_ds_pi(r, s, test::cuts().ds_pi);
    // Combinatorial candidates may share the event; the signal one must be there.
    if (cands.empty()) continue;
    ++events;
    bool matched = false;
    for (const auto& cand : cands) {
      CHECK(passes(cand, test::cuts().ds_pi));
      matched = matched || (std::abs(cand.m_ds - 1.9683) < 1e-3 && std::abs(cand.m_b - 5.3669) < 1e-3);
    }
    good += matched;
  }
  CHECK(events > 200);
  CHECK(good >= 0.95 * events);
}

TEST_CASE("phi window rejects kaon pairs outside it") {
  // Two kaons with m(KK) = 1.08 GeV back to back along z in the plus hemisphere frame.
  const double mk = nominal_mass(pdg::kKPlus);
  const double p = two_body_momentum(1.08, mk, mk);
  ReconstructedTrack kp, km, pi1, pi2;
  kp.p = boost(from_momentum(ThreeVector(0, p, 0), mk), ThreeVector(0, 0, 0.9));
  km.p = boost(from_momentum(ThreeVector(0, -p, 0), mk), ThreeVector(0, 0, 0.9));
  kp.pid = km.pid = Pid::kaon;
  kp.charge = 1;
  km.charge = -1;
  pi1.p = from_momentum(ThreeVector(0.3, 0, 3), 0.13957);
  pi2.p = from_momentum(ThreeVector(-0.3, 0, 5), 0.13957);
  pi1.charge = 1;
  pi2.charge = -1;
  CHECK(mass(FourVector(kp.p + km.p)) == doctest::Approx(1.08).epsilon(1e-9));
  RecoEvent ev;
  ev.plus.tracks = {kp, km, pi1, pi2};
  ReconstructedPhoton g1, g2;
  g1.e = 1.0;
  g1.theta = 0.1;
  g2.e = 1.0;
  g2.theta = 0.1 + 0.135;
  ev.plus.photons = {g1, g2};
  CHECK(select_ds_pi(ev, builtin_scenario("perfect"), test::cuts().ds_pi).empty());
}

TEST_CASE("pi0 fit narrows the Ds pi mass peak under S3") {
  const GeneratorConfig c = config_with_chain("bs_ds_pi");
  const DetectorScenario s = test::scenario("S3");
  std::vector<double> fitted, raw;
  for (std::int64_t id = 0; id < 4000; ++id) {
    const Event ev = generate_event(c, 8, id);
    Rng rng(stream_seed(ev.seed, 1));
    const RecoEvent r = reconstruct_event(ev, s, rng);
    for (const auto& cand : select_ds_pi(r, s, test::cuts().ds_pi)) {
      CHECK(cand.pi0.fitted);
      fitted.push_back(cand.m_b);
      raw.push_back(cand.m_b_raw);
    }
  }
  REQUIRE(fitted.size() > 500);
  CHECK(core_width(fitted).sigma < core_width(raw).sigma);
}

TEST_CASE("pi0 pi0 selection without fakes") {
  const GeneratorConfig c = config_with_chain("b0_pi0pi0");
  const DetectorScenario s = test::scenario("S3");
  int n = 0;
  for (std::int64_t id = 0; id < 2000; ++id) {
    const Event ev = generate_event(c, 9, id);
    Rng rng(stream_seed(ev.seed, 1));
    const RecoEvent r = reconstruct_event(ev, s, rng);
    for (const auto& cand : select_pi0pi0(r, s, test::cuts().pi0pi0, rng)) {
      CHECK(passes(cand, test::cuts().pi0pi0));
      CHECK_FALSE(cand.has_fake);
      ++n;
    }
  }
  CHECK(n > 0);
}

TEST_CASE("K* gamma selection") {
  SUBCASE("merged pi0 clusters are never taken as photons") {
    DetectorScenario s = builtin_scenario("perfect");
    ReconstructedTrack k, pi;
    k.pid = Pid::kaon;
    k.charge = 1;
    k.p = from_momentum(ThreeVector(0, 0, 12), nominal_mass(pdg::kKPlus));
    pi.charge = -1;
    pi.p = from_momentum(ThreeVector(0, 0.3, 8), 0.13957);
    k.impact_vertex = pi.impact_vertex = ThreeVector(0, 0, 2);
    k.truth_vertex = pi.truth_vertex = k.impact_vertex;
    ReconstructedPhoton g;
    g.e = 20.0;
    g.theta = 0.05;
    g.origin = PhotonOrigin::merged_pi0;
    RecoEvent ev;
    ev.plus.tracks = {k, pi};
    ev.plus.photons = {g};
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) CHECK(select_kstar_gamma(ev, s, test::cuts().kstar_gamma, rng).empty());
    ev.plus.photons[0].origin = PhotonOrigin::genuine;
    const double m_kpi = mass(FourVector(k.p + pi.p));
    const auto cands = select_kstar_gamma(ev, s, test::cuts().kstar_gamma, rng);
    if (m_kpi > 0.85 && m_kpi < 1.0) CHECK(cands.size() == 1);
  }
  SUBCASE("truth-passing signal is always selected at a perfect detector") {
    const GeneratorConfig c = config_with_chain("b0_kstar_gamma");
    const DetectorScenario s = builtin_scenario("perfect");
    int truth_pass = 0, selected = 0;
    for (std::int64_t id = 0; id < 1000; ++id) {
      const Event ev = generate_event(c, 10, id);
      Rng rng(stream_seed(ev.seed, 1));
      const RecoEvent r = reconstruct_event(ev, s, rng);
      if (!test::kstar_gamma_truth_passes(ev, r.axis, test::cuts().kstar_gamma)) continue;
      ++truth_pass;
      selected += !select_kstar_gamma(r, s, test::cuts().kstar_gamma, rng).empty();
    }
    CHECK(truth_pass > 100);
    CHECK(selected == truth_pass);
  }
}

TEST_CASE("single pi0 toy") {
  const DetectorScenario s = test::scenario("S3");
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const SinglePi0Outcome o = simulate_single_pi0(5.0, 0.8, s, rng);
    CHECK(o.true_energy == 5.0);
    CHECK(o.raw_energy > 0.0);
    if (o.fit_converged) CHECK(std::abs(mass(o.fit.fitted_pi0) - constants::kPi0Mass) < 1e-4);
  }
}
