#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfcal/evtgen.hpp"
#include "hfcal/kinematics.hpp"
#include "hfcal/random.hpp"

namespace hfcal {

class ConfigSection;

// Parametric detector response. Energies in GeV, lengths in mm.
struct DetectorScenario {
  std::string name;
  double ecal_stochastic = 0.0;      // a, relative resolution a/sqrt(E)
  double ecal_constant = 0.0;        // b
  double pos_res_stochastic = 0.0;   // c, mm GeV^1/2
  double pos_res_constant = 0.0;     // d, mm
  double ecal_radius = 1800.0;       // R
  double photon_threshold = 0.0;     // E_min
  double fake_rate = 0.0;            // mean fake clusters per hemisphere
  double merge_distance = 0.0;       // at the ECAL face
  bool pi0_mass_fit_enabled = false;
  double gamma_pi0_sep_max_energy = 0.0;
  double gamma_id_efficiency = 1.0;  // genuine photons tagged single_photon
  double track_pt_res = 0.0;         // k, sigma(1/pT) in 1/GeV
  double vertex_res = 0.0;           // per coordinate

  static DetectorScenario from_section(const ConfigSection& section);
  void validate() const;

  double relative_energy_resolution(double e) const {
    return std::hypot(ecal_stochastic / std::sqrt(e), ecal_constant);
  }
  double position_resolution(double e) const {
    return std::hypot(pos_res_stochastic / std::sqrt(e), pos_res_constant);
  }
};

// All sections of a scenario file, keyed by section name.
std::map<std::string, DetectorScenario> load_scenarios(const std::filesystem::path& path);
DetectorScenario load_scenario(const std::filesystem::path& path, const std::string& name);

// S1 crystal-ref, S2 cepc-like, S3 ultra-granular, and `perfect`.
DetectorScenario builtin_scenario(const std::string& name);

enum class PhotonOrigin { genuine, fake, merged_pi0 };
enum class PhotonTag { single_photon, pi0_like };
enum class Pid { pion, kaon };

std::string_view to_string(PhotonOrigin o);

struct ReconstructedPhoton {
  double e = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  Eigen::Vector3d cov_diag = Eigen::Vector3d::Zero();  // sigma_E^2, sigma_theta^2, sigma_phi^2
  PhotonOrigin origin = PhotonOrigin::genuine;
  int truth_index = -1;  // -1 for fakes

  FourVector p4() const { return massless(e, theta, phi); }
};

struct ReconstructedTrack {
  FourVector p = FourVector::Zero();
  int charge = 0;
  Pid pid = Pid::pion;
  ThreeVector impact_vertex = ThreeVector::Zero();
  int truth_index = -1;
  ThreeVector truth_vertex = ThreeVector::Zero();  // used for vertex association
};

ReconstructedPhoton smear_photon(const FourVector& truth, const DetectorScenario& scenario, Rng& rng);

// Threshold at truth level, merging of close pairs, fake injection in both
// hemispheres of the primary quark axis, then smearing.
std::vector<ReconstructedPhoton> reconstruct_photons(const Event& event, const DetectorScenario& scenario,
                                                     Rng& rng);

// Linear fall of the pi0_like probability for merged clusters between
// max_energy and twice that energy.
double merged_pi0_tag_probability(double e, const DetectorScenario& scenario);
PhotonTag gamma_pi0_separation(const ReconstructedPhoton& cluster, const DetectorScenario& scenario, Rng& rng);

// Charged pions and kaons only; throws std::invalid_argument otherwise.
ReconstructedTrack smear_track(const ParticleRecord& truth, int truth_index, const DetectorScenario& scenario,
                               Rng& rng);
bool is_tracked(int pdg_code);
std::vector<ReconstructedTrack> reconstruct_tracks(const Event& event, const DetectorScenario& scenario, Rng& rng);

class InsufficientTracks : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SecondaryVertex {
  ThreeVector position = ThreeVector::Zero();
  double distance = 0.0;
};

SecondaryVertex reconstruct_secondary_vertex(std::span<const ReconstructedTrack> tracks);

// Groups of track indices sharing a truth production vertex, in order of
// first appearance; groups smaller than `min_size` are dropped.
std::vector<std::vector<int>> vertex_groups(std::span<const ReconstructedTrack> tracks, std::size_t min_size = 2);

// ECAL-face distance between two directions on the sphere of radius R.
double face_distance(const ThreeVector& a, const ThreeVector& b, double radius);

}  // namespace hfcal
