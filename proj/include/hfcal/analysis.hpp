#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hfcal/detector.hpp"
#include "hfcal/evtgen.hpp"
#include "hfcal/kinfit.hpp"
#include "hfcal/kinematics.hpp"

namespace hfcal {

class ConfigSection;

enum class Side { plus, minus };
std::string_view to_string(Side s);

struct Hemisphere {
  Side side = Side::plus;
  std::vector<ReconstructedPhoton> photons;
  std::vector<ReconstructedTrack> tracks;
};

// Objects with p.axis >= 0 go to the plus hemisphere.
std::pair<Hemisphere, Hemisphere> split_hemispheres(std::span<const ReconstructedPhoton> photons,
                                                    std::span<const ReconstructedTrack> tracks,
                                                    const UnitAxis& axis);

struct RecoEvent {
  std::int64_t id = 0;
  Flavour flavour = Flavour::b;
  std::vector<ReconstructedPhoton> photons;
  std::vector<ReconstructedTrack> tracks;
  double thrust = 1.0;
  UnitAxis axis = UnitAxis::from(0.0, 0.0, 1.0);
  Hemisphere plus;
  Hemisphere minus;

  const Hemisphere& hemisphere(Side s) const { return s == Side::plus ? plus : minus; }
};

// Photon and track reconstruction, thrust of the reconstructed objects and
// the hemisphere split.
RecoEvent reconstruct_event(const Event& event, const DetectorScenario& scenario, Rng& rng);

struct BTagModel {
  double eff_b = 0.90;
  double mistag_c = 0.10;
  double mistag_uds = 0.0;

  void validate() const;
  double probability(Flavour f) const;
  bool tag(Flavour f, Rng& rng) const { return bernoulli(rng, probability(f)); }
};

enum class CompanionMetric { mass, angle };

struct DsPiCuts {
  double phi_min = 1.010, phi_max = 1.030;
  double rho_min = 0.600, rho_max = 0.950;
  double ds_min = 1.93, ds_max = 2.01;
  double pi0_min = 0.110, pi0_max = 0.160;
  double fit_prob_min = 0.0;  // 0 disables the fit-probability cut
};

struct Pi0Pi0Cuts {
  double pi0_min = 0.110, pi0_max = 0.160;
  double mass_min = 4.0, mass_max = 6.0;
  double system_energy_min = 30.0;
  double vertex_veto = 0.5;  // mm
  double fit_prob_min = 0.0;
  CompanionMetric companion = CompanionMetric::mass;
  BTagModel btag;
};

struct KStarGammaCuts {
  double vertex_min = 0.050;  // mm
  double kpi_min = 0.85, kpi_max = 1.0;
  double photon_energy_min = 5.0;
  double system_energy_min = 30.0;

  // All inequalities are strict.
  bool accepts(double vertex_distance, double m_kpi, double e_gamma, double e_system) const {
    return vertex_distance > vertex_min && m_kpi > kpi_min && m_kpi < kpi_max && e_gamma > photon_energy_min &&
           e_system > system_energy_min;
  }
};

struct SinglePi0Cuts {
  std::vector<double> energies{1.0, 2.0, 5.0, 10.0};
  double cos_theta_max = 0.8;
};

struct Cuts {
  DsPiCuts ds_pi;
  Pi0Pi0Cuts pi0pi0;
  KStarGammaCuts kstar_gamma;
  SinglePi0Cuts single_pi0;

  // Sections [ds_pi], [pi0pi0], [kstar_gamma], [single_pi0]; every key required.
  static Cuts load(const std::filesystem::path& path);
  void validate() const;
};

// key = value lines describing the effective cuts of one channel.
std::vector<std::pair<std::string, std::string>> describe_cuts(const Cuts& cuts, std::string_view channel);

struct Pi0Candidate {
  int photon1 = -1;  // indices into the hemisphere photon list
  int photon2 = -1;
  double raw_mass = 0.0;
  double metric = 0.0;  // |m(gg) - m_pi0|
  FourVector raw_p = FourVector::Zero();
  FourVector p = FourVector::Zero();  // fitted when the fit ran
  bool fitted = false;
  FitResult fit;
};

// Builds a pi0 candidate from two photons if the raw mass lies inside
// (lo, hi); fits it when the scenario enables the fit and rejects
// unconverged fits and fits below `fit_prob_min`.
std::optional<Pi0Candidate> make_pi0(const Hemisphere& h, int i, int j, const DetectorScenario& scenario, double lo,
                                     double hi, double fit_prob_min);

struct FitCounter {
  std::size_t attempted = 0;
  std::size_t converged = 0;
};

struct DsPiCandidate {
  Side side = Side::plus;
  int kaon_plus = -1, kaon_minus = -1, rho_pion = -1, bachelor = -1;
  Pi0Candidate pi0;
  double m_kk = 0.0, m_rho = 0.0, m_ds = 0.0, m_b = 0.0;
  double m_ds_raw = 0.0, m_b_raw = 0.0;  // same combination with the unfitted pi0
  double energy = 0.0;
};

bool passes(const DsPiCandidate& c, const DsPiCuts& cuts);

std::vector<DsPiCandidate> select_ds_pi(const RecoEvent& event, const DetectorScenario& scenario,
                                        const DsPiCuts& cuts, FitCounter* fits = nullptr);

struct Pi0Pi0Candidate {
  Side side = Side::plus;
  Pi0Candidate pi0_1;
  Pi0Candidate pi0_2;
  double m_4gamma_raw = 0.0;
  double mass = 0.0;      // after fits
  double mass_raw = 0.0;
  double energy = 0.0;    // of the (fitted) pi0 pair
  double vertex_max = 0.0;
  bool has_fake = false;
};

bool passes(const Pi0Pi0Candidate& c, const Pi0Pi0Cuts& cuts);

// Both hemispheres' b-tags are drawn first (plus, then minus); each
// hemisphere is searched when the opposite one is tagged.
std::vector<Pi0Pi0Candidate> select_pi0pi0(const RecoEvent& event, const DetectorScenario& scenario,
                                           const Pi0Pi0Cuts& cuts, Rng& rng, FitCounter* fits = nullptr);

struct KStarGammaCandidate {
  Side side = Side::plus;
  int kaon = -1, pion = -1, photon = -1;
  double vertex_distance = 0.0;
  double m_kpi = 0.0;
  double e_gamma = 0.0;
  double e_system = 0.0;
  double mass = 0.0;
  bool photon_genuine = false;
};

// Photon identification tags are drawn for every photon, plus hemisphere first.
std::vector<KStarGammaCandidate> select_kstar_gamma(const RecoEvent& event, const DetectorScenario& scenario,
                                                    const KStarGammaCuts& cuts, Rng& rng);

double bs_b0_separation(double sigma_bs, double sigma_b0, double delta_m);

double scale_yield(double n_pass, double n_generated, double chain_br_product, double flavour_fraction,
                   double species_fraction, double n_z);

// One isolated pi0 of fixed energy, decayed to two photons that both pass the
// threshold, smeared, and fitted when the scenario enables the fit.
struct SinglePi0Outcome {
  double true_energy = 0.0;
  double raw_energy = 0.0;
  double fit_energy = 0.0;
  bool fit_converged = false;
  FitResult fit;
};

SinglePi0Outcome simulate_single_pi0(double energy, double cos_theta_max, const DetectorScenario& scenario,
                                     Rng& rng);

}  // namespace hfcal
