#include "hfcal/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "hfcal/config.hpp"
#include "hfcal/particle_data.hpp"

namespace hfcal {

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ThreeVector direction(const ReconstructedPhoton& g) {
  const double st = std::sin(g.theta);
  return ThreeVector(st * std::cos(g.phi), st * std::sin(g.phi), std::cos(g.theta));
}

double opening_angle(const ReconstructedPhoton& a, const ReconstructedPhoton& b) {
  const ThreeVector u = direction(a);
  const ThreeVector v = direction(b);
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

void check_window(double lo, double hi, const std::string& what) {
  if (!(lo < hi)) throw ConfigError("cuts: " + what + " window needs min < max");
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("cuts: " + what + " must lie in [0, 1]");
}

}  // namespace

std::string_view to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

std::pair<Hemisphere, Hemisphere> split_hemispheres(std::span<const ReconstructedPhoton> photons,
                                                    std::span<const ReconstructedTrack> tracks,
                                                    const UnitAxis& axis) {
  std::pair<Hemisphere, Hemisphere> out;
  out.first.side = Side::plus;
  out.second.side = Side::minus;
  for (const auto& g : photons) {
    (g.p4().tail<3>().dot(axis.vector()) >= 0.0 ? out.first : out.second).photons.push_back(g);
  }
  for (const auto& t : tracks) {
    (t.p.tail<3>().dot(axis.vector()) >= 0.0 ? out.first : out.second).tracks.push_back(t);
  }
  return out;
}

RecoEvent reconstruct_event(const Event& event, const DetectorScenario& scenario, Rng& rng) {
  RecoEvent r;
  r.id = event.id;
  r.flavour = event.flavour;
  r.photons = reconstruct_photons(event, scenario, rng);
  r.tracks = reconstruct_tracks(event, scenario, rng);
  std::vector<FourVector> momenta;
  momenta.reserve(r.photons.size() + r.tracks.size());
  for (const auto& g : r.photons) momenta.push_back(g.p4());
  for (const auto& t : r.tracks) momenta.push_back(t.p);
  try {
    const Thrust t = thrust(momenta);
    r.thrust = t.value;
    r.axis = t.axis;
  } catch (const DegenerateEvent&) {
    r.thrust = 1.0;
    r.axis = UnitAxis::from(0.0, 0.0, 1.0);
  }
  auto [plus, minus] = split_hemispheres(r.photons, r.tracks, r.axis);
  r.plus = std::move(plus);
  r.minus = std::move(minus);
  return r;
}

void BTagModel::validate() const {
  check_probability(eff_b, "btag_eff_b");
  check_probability(mistag_c, "btag_mistag_c");
  check_probability(mistag_uds, "btag_mistag_uds");
}

double BTagModel::probability(Flavour f) const {
  switch (f) {
    case Flavour::b: return eff_b;
    case Flavour::c: return mistag_c;
    case Flavour::uds: return mistag_uds;
  }
  return 0.0;
}

Cuts Cuts::load(const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::load(path);
  Cuts c;
  {
    const ConfigSection& s = file.section("ds_pi");
    s.require_only({"phi_min", "phi_max", "rho_min", "rho_max", "ds_min", "ds_max", "pi0_min", "pi0_max",
                    "fit_prob_min"});
    c.ds_pi.phi_min = s.number("phi_min");
    c.ds_pi.phi_max = s.number("phi_max");
    c.ds_pi.rho_min = s.number("rho_min");
    c.ds_pi.rho_max = s.number("rho_max");
    c.ds_pi.ds_min = s.number("ds_min");
    c.ds_pi.ds_max = s.number("ds_max");
    c.ds_pi.pi0_min = s.number("pi0_min");
    c.ds_pi.pi0_max = s.number("pi0_max");
    c.ds_pi.fit_prob_min = s.number("fit_prob_min");
  }
  {
    const ConfigSection& s = file.section("pi0pi0");
    s.require_only({"pi0_min", "pi0_max", "mass_min", "mass_max", "system_energy_min", "vertex_veto",
                    "fit_prob_min", "companion", "btag_eff_b", "btag_mistag_c", "btag_mistag_uds"});
    c.pi0pi0.pi0_min = s.number("pi0_min");
    c.pi0pi0.pi0_max = s.number("pi0_max");
    c.pi0pi0.mass_min = s.number("mass_min");
    c.pi0pi0.mass_max = s.number("mass_max");
    c.pi0pi0.system_energy_min = s.number("system_energy_min");
    c.pi0pi0.vertex_veto = s.number("vertex_veto");
    c.pi0pi0.fit_prob_min = s.number("fit_prob_min");
    const std::string& companion = s.text("companion");
    if (companion == "mass") {
      c.pi0pi0.companion = CompanionMetric::mass;
    } else if (companion == "angle") {
      c.pi0pi0.companion = CompanionMetric::angle;
    } else {
      throw ConfigError(file.source() + ": [pi0pi0] key 'companion': expected 'mass' or 'angle'");
    }
    c.pi0pi0.btag.eff_b = s.number("btag_eff_b");
    c.pi0pi0.btag.mistag_c = s.number("btag_mistag_c");
    c.pi0pi0.btag.mistag_uds = s.number("btag_mistag_uds");
  }
  {
    const ConfigSection& s = file.section("kstar_gamma");
    s.require_only({"vertex_min", "kpi_min", "kpi_max", "photon_energy_min", "system_energy_min"});
    c.kstar_gamma.vertex_min = s.number("vertex_min");
    c.kstar_gamma.kpi_min = s.number("kpi_min");
    c.kstar_gamma.kpi_max = s.number("kpi_max");
    c.kstar_gamma.photon_energy_min = s.number("photon_energy_min");
    c.kstar_gamma.system_energy_min = s.number("system_energy_min");
  }
  {
    const ConfigSection& s = file.section("single_pi0");
    s.require_only({"energies", "cos_theta_max"});
    c.single_pi0.energies = s.numbers("energies");
    c.single_pi0.cos_theta_max = s.number("cos_theta_max");
  }
  c.validate();
  return c;
}

void Cuts::validate() const {
  check_window(ds_pi.phi_min, ds_pi.phi_max, "phi");
  check_window(ds_pi.rho_min, ds_pi.rho_max, "rho");
  check_window(ds_pi.ds_min, ds_pi.ds_max, "Ds");
  check_window(ds_pi.pi0_min, ds_pi.pi0_max, "ds_pi pi0");
  check_probability(ds_pi.fit_prob_min, "ds_pi fit_prob_min");
  check_window(pi0pi0.pi0_min, pi0pi0.pi0_max, "pi0pi0 pi0");
  check_window(pi0pi0.mass_min, pi0pi0.mass_max, "pi0pi0 mass");
  check_probability(pi0pi0.fit_prob_min, "pi0pi0 fit_prob_min");
  if (!(pi0pi0.vertex_veto >= 0.0)) throw ConfigError("cuts: vertex_veto must be non-negative");
  pi0pi0.btag.validate();
  check_window(kstar_gamma.kpi_min, kstar_gamma.kpi_max, "K pi");
  if (single_pi0.energies.empty()) throw ConfigError("cuts: single_pi0 energies list is empty");
  for (double e : single_pi0.energies) {
    if (!(e > 2.0 * constants::kPi0Mass)) throw ConfigError("cuts: single_pi0 energies must exceed 0.27 GeV");
  }
  if (!(single_pi0.cos_theta_max > 0.0 && single_pi0.cos_theta_max <= 1.0)) {
    throw ConfigError("cuts: cos_theta_max must lie in (0, 1]");
  }
}

std::vector<std::pair<std::string, std::string>> describe_cuts(const Cuts& c, std::string_view channel) {
  if (channel == "ds_pi") {
    return {{"phi_min", g6(c.ds_pi.phi_min)}, {"phi_max", g6(c.ds_pi.phi_max)},
            {"rho_min", g6(c.ds_pi.rho_min)}, {"rho_max", g6(c.ds_pi.rho_max)},
            {"ds_min", g6(c.ds_pi.ds_min)},   {"ds_max", g6(c.ds_pi.ds_max)},
            {"pi0_min", g6(c.ds_pi.pi0_min)}, {"pi0_max", g6(c.ds_pi.pi0_max)},
            {"fit_prob_min", g6(c.ds_pi.fit_prob_min)}};
  }
  if (channel == "pi0pi0") {
    return {{"pi0_min", g6(c.pi0pi0.pi0_min)},
            {"pi0_max", g6(c.pi0pi0.pi0_max)},
            {"mass_min", g6(c.pi0pi0.mass_min)},
            {"mass_max", g6(c.pi0pi0.mass_max)},
            {"system_energy_min", g6(c.pi0pi0.system_energy_min)},
            {"vertex_veto", g6(c.pi0pi0.vertex_veto)},
            {"fit_prob_min", g6(c.pi0pi0.fit_prob_min)},
            {"companion", c.pi0pi0.companion == CompanionMetric::mass ? "mass" : "angle"},
            {"btag_eff_b", g6(c.pi0pi0.btag.eff_b)},
            {"btag_mistag_c", g6(c.pi0pi0.btag.mistag_c)},
            {"btag_mistag_uds", g6(c.pi0pi0.btag.mistag_uds)}};
  }
  if (channel == "kstar_gamma") {
    return {{"vertex_min", g6(c.kstar_gamma.vertex_min)},
            {"kpi_min", g6(c.kstar_gamma.kpi_min)},
            {"kpi_max", g6(c.kstar_gamma.kpi_max)},
            {"photon_energy_min", g6(c.kstar_gamma.photon_energy_min)},
            {"system_energy_min", g6(c.kstar_gamma.system_energy_min)}};
  }
  std::string energies;
  for (double e : c.single_pi0.energies) energies += (energies.empty() ? "" : ", ") + g6(e);
  return {{"energies", energies}, {"cos_theta_max", g6(c.single_pi0.cos_theta_max)}};
}

std::optional<Pi0Candidate> make_pi0(const Hemisphere& h, int i, int j, const DetectorScenario& scenario, double lo,
                                     double hi, double fit_prob_min) {
  const ReconstructedPhoton& a = h.photons[static_cast<std::size_t>(i)];
  const ReconstructedPhoton& b = h.photons[static_cast<std::size_t>(j)];
  Pi0Candidate c;
  c.photon1 = i;
  c.photon2 = j;
  c.raw_p = a.p4() + b.p4();
  c.raw_mass = mass(c.raw_p);
  if (!(c.raw_mass > lo && c.raw_mass < hi)) return std::nullopt;
  c.metric = std::abs(c.raw_mass - constants::kPi0Mass);
  c.p = c.raw_p;
  if (scenario.pi0_mass_fit_enabled) {
    c.fit = fit_pi0_mass(photon_parameters(a, b));
    c.fitted = true;
    if (!c.fit.converged) return std::nullopt;
    if (fit_prob_min > 0.0 && chi2_probability(c.fit.chi2) < fit_prob_min) return std::nullopt;
    c.p = c.fit.fitted_pi0;
  }
  return c;
}

bool passes(const DsPiCandidate& c, const DsPiCuts& cuts) {
  return c.m_kk > cuts.phi_min && c.m_kk < cuts.phi_max && c.m_rho > cuts.rho_min && c.m_rho < cuts.rho_max &&
         c.m_ds > cuts.ds_min && c.m_ds < cuts.ds_max && c.pi0.raw_mass > cuts.pi0_min &&
         c.pi0.raw_mass < cuts.pi0_max;
}

constexpr double kMetricTie = 1e-6;

std::vector<DsPiCandidate> select_ds_pi(const RecoEvent& event, const DetectorScenario& scenario,
                                        const DsPiCuts& cuts, FitCounter* fits) {
  std::vector<DsPiCandidate> out;
  const double ds_mass = nominal_mass(pdg::kDsPlus);
  for (const Hemisphere* h : {&event.plus, &event.minus}) {
    struct Phi {
      int kp, km;
      FourVector p;
      double m;
    };
    std::vector<Phi> phis;
    std::vector<int> pions;
    for (int a = 0; a < static_cast<int>(h->tracks.size()); ++a) {
      const ReconstructedTrack& ta = h->tracks[static_cast<std::size_t>(a)];
      if (ta.pid == Pid::pion) pions.push_back(a);
      if (ta.pid != Pid::kaon || ta.charge != 1) continue;
      for (int b = 0; b < static_cast<int>(h->tracks.size()); ++b) {
        const ReconstructedTrack& tb = h->tracks[static_cast<std::size_t>(b)];
        if (tb.pid != Pid::kaon || tb.charge != -1) continue;
        const FourVector p = ta.p + tb.p;
        const double m = mass(p);
        if (m > cuts.phi_min && m < cuts.phi_max) phis.push_back({a, b, p, m});
      }
    }
    if (phis.empty() || pions.size() < 2) continue;

    std::optional<DsPiCandidate> best;
    const int n_photons = static_cast<int>(h->photons.size());
    for (int i = 0; i < n_photons; ++i) {
      for (int j = i + 1; j < n_photons; ++j) {
        const auto pi0 = make_pi0(*h, i, j, scenario, cuts.pi0_min, cuts.pi0_max, 0.0);
        if (fits != nullptr && scenario.pi0_mass_fit_enabled) {
          const FourVector raw = h->photons[static_cast<std::size_t>(i)].p4() + h->photons[static_cast<std::size_t>(j)].p4();
          const double m = mass(raw);
          if (m > cuts.pi0_min && m < cuts.pi0_max) {
            ++fits->attempted;
            if (pi0) ++fits->converged;
          }
        }
        if (!pi0) continue;
        if (cuts.fit_prob_min > 0.0 && pi0->fitted && chi2_probability(pi0->fit.chi2) < cuts.fit_prob_min) continue;
        if (best && pi0->metric > best->pi0.metric + kMetricTie) continue;
        for (int r : pions) {
          const ReconstructedTrack& tr = h->tracks[static_cast<std::size_t>(r)];
          const FourVector rho = tr.p + pi0->p;
          const double m_rho = mass(rho);
          if (!(m_rho > cuts.rho_min && m_rho < cuts.rho_max)) continue;
          for (const Phi& phi : phis) {
            const FourVector ds = phi.p + rho;
            const double m_ds = mass(ds);
            if (!(m_ds > cuts.ds_min && m_ds < cuts.ds_max)) continue;
            for (int b : pions) {
              const ReconstructedTrack& tb = h->tracks[static_cast<std::size_t>(b)];
              if (b == r || tb.charge != -tr.charge) continue;
              const FourVector bp = ds + tb.p;
              DsPiCandidate c;
              c.side = h->side;
              c.kaon_plus = phi.kp;
              c.kaon_minus = phi.km;
              c.rho_pion = r;
              c.bachelor = b;
              c.pi0 = *pi0;
              c.m_kk = phi.m;
              c.m_rho = m_rho;
              c.m_ds = m_ds;
              c.m_b = mass(bp);
              const FourVector ds_raw = phi.p + tr.p + pi0->raw_p;
              c.m_ds_raw = mass(ds_raw);
              c.m_b_raw = mass(FourVector(ds_raw + tb.p));
              c.energy = bp(0);
              // Pairs whose metrics agree to rounding (every true pi0 at zero
              // smearing) are ranked by how well they reproduce the Ds mass.
              const bool tied = best && std::abs(c.pi0.metric - best->pi0.metric) <= kMetricTie;
              const double ds_dev = std::abs(c.m_ds - ds_mass);
              // Remaining ties share the Ds; the bachelor from the displaced B
              // vertex is preferred over prompt fragmentation pions.
              const double best_dev = best ? std::abs(best->m_ds - ds_mass) : 0.0;
              const double flight = tb.impact_vertex.norm();
              const double best_flight =
                  best ? h->tracks[static_cast<std::size_t>(best->bachelor)].impact_vertex.norm() : 0.0;
              const bool same_ds = tied && std::abs(ds_dev - best_dev) <= kMetricTie;
              const bool better = !best || (!tied && c.pi0.metric < best->pi0.metric) ||
                                  (tied && ds_dev < best_dev - kMetricTie) || (same_ds && flight > best_flight) ||
                                  (same_ds && flight == best_flight && c.energy > best->energy);
              if (better) best = c;
            }
          }
        }
      }
    }
    if (best) out.push_back(*best);
  }
  return out;
}

bool passes(const Pi0Pi0Candidate& c, const Pi0Pi0Cuts& cuts) {
  const auto in_window = [&](const Pi0Candidate& p) { return p.raw_mass > cuts.pi0_min && p.raw_mass < cuts.pi0_max; };
  return in_window(c.pi0_1) && in_window(c.pi0_2) && c.m_4gamma_raw > cuts.mass_min &&
         c.m_4gamma_raw < cuts.mass_max && c.energy > cuts.system_energy_min && !(c.vertex_max > cuts.vertex_veto);
}

std::vector<Pi0Pi0Candidate> select_pi0pi0(const RecoEvent& event, const DetectorScenario& scenario,
                                           const Pi0Pi0Cuts& cuts, Rng& rng, FitCounter* fits) {
  const bool tag_plus = cuts.btag.tag(event.flavour, rng);
  const bool tag_minus = cuts.btag.tag(event.flavour, rng);
  std::vector<Pi0Pi0Candidate> out;
  for (const Hemisphere* h : {&event.plus, &event.minus}) {
    const bool opposite_tagged = h->side == Side::plus ? tag_minus : tag_plus;
    if (!opposite_tagged) continue;

    double vertex_max = 0.0;
    for (const auto& group : vertex_groups(h->tracks)) {
      std::vector<ReconstructedTrack> members;
      for (int k : group) members.push_back(h->tracks[static_cast<std::size_t>(k)]);
      vertex_max = std::max(vertex_max, reconstruct_secondary_vertex(members).distance);
    }
    if (vertex_max > cuts.vertex_veto) continue;

    std::vector<int> order(h->photons.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return h->photons[static_cast<std::size_t>(a)].e > h->photons[static_cast<std::size_t>(b)].e;
    });
    if (order.size() < 4) continue;

    std::vector<char> used(h->photons.size(), 0);
    auto pair_with_companion = [&](int lead) -> std::optional<Pi0Candidate> {
      std::optional<Pi0Candidate> best;
      double best_metric = 0.0;
      for (int k : order) {
        if (k == lead || used[static_cast<std::size_t>(k)]) continue;
        auto c = make_pi0(*h, lead, k, scenario, cuts.pi0_min, cuts.pi0_max, 0.0);
        if (!c) {
          if (fits != nullptr && scenario.pi0_mass_fit_enabled) {
            const double m = mass(FourVector(h->photons[static_cast<std::size_t>(lead)].p4() +
                                             h->photons[static_cast<std::size_t>(k)].p4()));
            if (m > cuts.pi0_min && m < cuts.pi0_max) ++fits->attempted;
          }
          continue;
        }
        if (fits != nullptr && c->fitted) {
          ++fits->attempted;
          ++fits->converged;
        }
        const double metric = cuts.companion == CompanionMetric::mass
                                  ? c->metric
                                  : opening_angle(h->photons[static_cast<std::size_t>(lead)],
                                                  h->photons[static_cast<std::size_t>(k)]);
        if (!best || metric < best_metric) {
          best = c;
          best_metric = metric;
        }
      }
      return best;
    };

    const int lead1 = order[0];
    auto pi0_1 = pair_with_companion(lead1);
    if (!pi0_1) continue;
    used[static_cast<std::size_t>(pi0_1->photon1)] = used[static_cast<std::size_t>(pi0_1->photon2)] = 1;
    int lead2 = -1;
    for (int k : order) {
      if (!used[static_cast<std::size_t>(k)]) {
        lead2 = k;
        break;
      }
    }
    if (lead2 < 0) continue;
    auto pi0_2 = pair_with_companion(lead2);
    if (!pi0_2) continue;

    const auto prob_ok = [&](const Pi0Candidate& p) {
      return cuts.fit_prob_min <= 0.0 || !p.fitted || chi2_probability(p.fit.chi2) >= cuts.fit_prob_min;
    };
    if (!prob_ok(*pi0_1) || !prob_ok(*pi0_2)) continue;

    Pi0Pi0Candidate c;
    c.side = h->side;
    c.pi0_1 = *pi0_1;
    c.pi0_2 = *pi0_2;
    c.m_4gamma_raw = mass(FourVector(pi0_1->raw_p + pi0_2->raw_p));
    const FourVector sum = pi0_1->p + pi0_2->p;
    c.mass = mass(sum);
    c.mass_raw = c.m_4gamma_raw;
    c.energy = sum(0);
    c.vertex_max = vertex_max;
    for (int k : {pi0_1->photon1, pi0_1->photon2, pi0_2->photon1, pi0_2->photon2}) {
      if (h->photons[static_cast<std::size_t>(k)].origin == PhotonOrigin::fake) c.has_fake = true;
    }
    if (passes(c, cuts)) out.push_back(c);
  }
  return out;
}

std::vector<KStarGammaCandidate> select_kstar_gamma(const RecoEvent& event, const DetectorScenario& scenario,
                                                    const KStarGammaCuts& cuts, Rng& rng) {
  std::vector<KStarGammaCandidate> out;
  std::vector<PhotonTag> tags_plus, tags_minus;
  for (const auto& g : event.plus.photons) tags_plus.push_back(gamma_pi0_separation(g, scenario, rng));
  for (const auto& g : event.minus.photons) tags_minus.push_back(gamma_pi0_separation(g, scenario, rng));
  const double m_kstar = nominal_mass(pdg::kKStar0);

  for (const Hemisphere* h : {&event.plus, &event.minus}) {
    const auto& tags = h->side == Side::plus ? tags_plus : tags_minus;
    std::optional<KStarGammaCandidate> best;
    for (int k = 0; k < static_cast<int>(h->tracks.size()); ++k) {
      const ReconstructedTrack& tk = h->tracks[static_cast<std::size_t>(k)];
      if (tk.pid != Pid::kaon) continue;
      for (int p = 0; p < static_cast<int>(h->tracks.size()); ++p) {
        const ReconstructedTrack& tp = h->tracks[static_cast<std::size_t>(p)];
        if (tp.pid != Pid::pion || tp.charge != -tk.charge) continue;
        if (tp.truth_vertex != tk.truth_vertex) continue;
        const std::array<ReconstructedTrack, 2> pair = {tk, tp};
        const double distance = reconstruct_secondary_vertex(pair).distance;
        const FourVector kpi = tk.p + tp.p;
        const double m_kpi = mass(kpi);
        for (int g = 0; g < static_cast<int>(h->photons.size()); ++g) {
          if (tags[static_cast<std::size_t>(g)] != PhotonTag::single_photon) continue;
          const ReconstructedPhoton& ph = h->photons[static_cast<std::size_t>(g)];
          const FourVector total = kpi + ph.p4();
          if (!cuts.accepts(distance, m_kpi, ph.e, total(0))) continue;
          KStarGammaCandidate c;
          c.side = h->side;
          c.kaon = k;
          c.pion = p;
          c.photon = g;
          c.vertex_distance = distance;
          c.m_kpi = m_kpi;
          c.e_gamma = ph.e;
          c.e_system = total(0);
          c.mass = mass(total);
          c.photon_genuine = ph.origin == PhotonOrigin::genuine;
          const bool better =
              !best || c.e_gamma > best->e_gamma ||
              (c.e_gamma == best->e_gamma && std::abs(c.m_kpi - m_kstar) < std::abs(best->m_kpi - m_kstar));
          if (better) best = c;
        }
      }
    }
    if (best) out.push_back(*best);
  }
  return out;
}

double bs_b0_separation(double sigma_bs, double sigma_b0, double delta_m) {
  if (!(sigma_bs > 0.0) || !(sigma_b0 > 0.0)) throw std::domain_error("separation: resolutions must be positive");
  return delta_m / std::hypot(sigma_bs, sigma_b0);
}

double scale_yield(double n_pass, double n_generated, double chain_br_product, double flavour_fraction,
                   double species_fraction, double n_z) {
  if (!(n_generated > 0.0)) throw std::domain_error("scale_yield: no generated events");
  for (double f : {chain_br_product, flavour_fraction, species_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("scale_yield: fractions must lie in [0, 1]");
  }
  if (!(n_pass >= 0.0 && n_pass <= n_generated)) throw std::domain_error("scale_yield: n_pass outside [0, n_generated]");
  return n_z * 2.0 * flavour_fraction * species_fraction * chain_br_product * (n_pass / n_generated);
}

SinglePi0Outcome simulate_single_pi0(double energy, double cos_theta_max, const DetectorScenario& scenario,
                                     Rng& rng) {
  const double m = constants::kPi0Mass;
  const double p = std::sqrt(energy * energy - m * m);
  for (;;) {
    const double cos_theta = uniform(rng, -cos_theta_max, cos_theta_max);
    const double phi = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
    const FourVector pi0(energy, p * sin_theta * std::cos(phi), p * sin_theta * std::sin(phi), p * cos_theta);
    auto [g1, g2] = two_body_decay(m, 0.0, 0.0, rng);
    const ThreeVector beta = beta_of(pi0);
    g1 = boost(g1, beta);
    g2 = boost(g2, beta);
    if (g1(0) < scenario.photon_threshold || g2(0) < scenario.photon_threshold) continue;

    SinglePi0Outcome out;
    out.true_energy = energy;
    const ReconstructedPhoton r1 = smear_photon(g1, scenario, rng);
    const ReconstructedPhoton r2 = smear_photon(g2, scenario, rng);
    out.raw_energy = r1.e + r2.e;
    out.fit = fit_pi0_mass(photon_parameters(r1, r2));
    out.fit_converged = out.fit.converged;
    out.fit_energy = out.fit.fitted_pi0(0);
    return out;
  }
}

}  // namespace hfcal
