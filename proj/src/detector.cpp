#include "hfcal/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "hfcal/config.hpp"
#include "hfcal/particle_data.hpp"

namespace hfcal {

namespace {

constexpr double kEnergyFloor = 0.001;      // GeV
constexpr double kFakeEnergyMean = 0.300;   // GeV above threshold
constexpr double kVarianceFloor = 1e-300;   // keeps a perfect detector's covariance positive

const std::vector<std::string> kScenarioKeys = {
    "ecal_stochastic", "ecal_constant", "pos_res_stochastic", "pos_res_constant", "ecal_radius",
    "photon_threshold", "fake_rate", "merge_distance", "pi0_mass_fit_enabled", "gamma_pi0_sep_max_energy",
    "gamma_id_efficiency", "track_pt_res", "vertex_res"};

ThreeVector unit(const FourVector& p) { return p.tail<3>().normalized(); }

double wrap_phi(double phi) {
  while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
  while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  return phi;
}

ThreeVector primary_axis(const Event& event) {
  for (const auto& r : event.records) {
    if (r.status == Status::initial && r.mother < 0 && r.p.tail<3>().squaredNorm() > 0.0) return unit(r.p);
  }
  return ThreeVector::UnitZ();
}

}  // namespace

std::string_view to_string(PhotonOrigin o) {
  switch (o) {
    case PhotonOrigin::genuine: return "genuine";
    case PhotonOrigin::fake: return "fake";
    case PhotonOrigin::merged_pi0: return "merged_pi0";
  }
  return "genuine";
}

DetectorScenario DetectorScenario::from_section(const ConfigSection& s) {
  s.require_only(kScenarioKeys);
  DetectorScenario d;
  d.name = s.name();
  d.ecal_stochastic = s.number("ecal_stochastic");
  d.ecal_constant = s.number("ecal_constant");
  d.pos_res_stochastic = s.number("pos_res_stochastic");
  d.pos_res_constant = s.number("pos_res_constant");
  d.ecal_radius = s.number("ecal_radius");
  d.photon_threshold = s.number("photon_threshold");
  d.fake_rate = s.number("fake_rate");
  d.merge_distance = s.number("merge_distance");
  d.pi0_mass_fit_enabled = s.flag("pi0_mass_fit_enabled");
  d.gamma_pi0_sep_max_energy = s.number("gamma_pi0_sep_max_energy");
  d.gamma_id_efficiency = s.number("gamma_id_efficiency");
  d.track_pt_res = s.number("track_pt_res");
  d.vertex_res = s.number("vertex_res");
  d.validate();
  return d;
}

void DetectorScenario::validate() const {
  auto non_negative = [&](double v, const char* key) {
    if (!(v >= 0.0)) throw ConfigError("scenario [" + name + "] key '" + key + "': must be non-negative");
  };
  non_negative(ecal_stochastic, "ecal_stochastic");
  non_negative(ecal_constant, "ecal_constant");
  non_negative(pos_res_stochastic, "pos_res_stochastic");
  non_negative(pos_res_constant, "pos_res_constant");
  non_negative(photon_threshold, "photon_threshold");
  non_negative(fake_rate, "fake_rate");
  non_negative(merge_distance, "merge_distance");
  non_negative(gamma_pi0_sep_max_energy, "gamma_pi0_sep_max_energy");
  non_negative(track_pt_res, "track_pt_res");
  non_negative(vertex_res, "vertex_res");
  if (!(ecal_radius > 0.0)) throw ConfigError("scenario [" + name + "] key 'ecal_radius': must be positive");
  if (!(gamma_id_efficiency >= 0.0 && gamma_id_efficiency <= 1.0)) {
    throw ConfigError("scenario [" + name + "] key 'gamma_id_efficiency': must lie in [0, 1]");
  }
}

std::map<std::string, DetectorScenario> load_scenarios(const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::load(path);
  std::map<std::string, DetectorScenario> out;
  for (const auto& name : file.section_names()) out.emplace(name, DetectorScenario::from_section(file.section(name)));
  return out;
}

DetectorScenario load_scenario(const std::filesystem::path& path, const std::string& name) {
  const ConfigFile file = ConfigFile::load(path);
  return DetectorScenario::from_section(file.section(name));
}

DetectorScenario builtin_scenario(const std::string& name) {
  DetectorScenario d;
  d.name = name;
  d.ecal_radius = 1800.0;
  d.track_pt_res = 2e-5;
  d.vertex_res = 0.005;
  if (name == "S1" || name == "S2") {
    d.ecal_stochastic = name == "S1" ? 0.05 : 0.03;
    d.pos_res_stochastic = 6.0;
    d.pos_res_constant = 1.0;
    d.photon_threshold = 0.2;
    d.fake_rate = 0.5;
    d.merge_distance = 20.0;
    d.pi0_mass_fit_enabled = false;
    d.gamma_pi0_sep_max_energy = 10.0;
    d.gamma_id_efficiency = 0.98;
  } else if (name == "S3") {
    d.ecal_stochastic = 0.16;
    d.pos_res_stochastic = 1.5;
    d.pos_res_constant = 0.5;
    d.photon_threshold = 0.05;
    d.fake_rate = 0.0;
    d.merge_distance = 10.0;
    d.pi0_mass_fit_enabled = true;
    d.gamma_pi0_sep_max_energy = 35.0;
    d.gamma_id_efficiency = 0.98;
  } else if (name == "perfect") {
    d.track_pt_res = 0.0;
    d.vertex_res = 0.0;
    d.gamma_pi0_sep_max_energy = 35.0;
    d.gamma_id_efficiency = 1.0;
  } else {
    throw ConfigError("unknown built-in scenario '" + name + "'");
  }
  return d;
}

double face_distance(const ThreeVector& a, const ThreeVector& b, double radius) {
  return radius * std::atan2(a.cross(b).norm(), a.dot(b));
}

ReconstructedPhoton smear_photon(const FourVector& truth, const DetectorScenario& scenario, Rng& rng) {
  const double e = truth(0);
  const double theta = polar_angle(truth);
  const double phi = azimuth(truth);
  const double sigma_rel = scenario.relative_energy_resolution(e);
  const double sigma_pos = scenario.position_resolution(e);
  const double sin_theta = std::max(std::sin(theta), 1e-9);
  const double sigma_theta = sigma_pos / scenario.ecal_radius;
  const double sigma_phi = sigma_pos / (scenario.ecal_radius * sin_theta);

  ReconstructedPhoton out;
  out.e = std::max(e * (1.0 + sigma_rel * gaussian(rng)), kEnergyFloor);
  double t = theta + sigma_theta * gaussian(rng);
  double f = phi + sigma_phi * gaussian(rng);
  if (t < 0.0) {
    t = -t;
    f += std::numbers::pi;
  } else if (t > std::numbers::pi) {
    t = 2.0 * std::numbers::pi - t;
    f += std::numbers::pi;
  }
  out.theta = t;
  out.phi = wrap_phi(f);
  const double sigma_e = sigma_rel * e;
  out.cov_diag = Eigen::Vector3d(std::max(sigma_e * sigma_e, kVarianceFloor),
                                 std::max(sigma_theta * sigma_theta, kVarianceFloor),
                                 std::max(sigma_phi * sigma_phi, kVarianceFloor));
  return out;
}

std::vector<ReconstructedPhoton> reconstruct_photons(const Event& event, const DetectorScenario& scenario,
                                                     Rng& rng) {
  struct Cluster {
    FourVector p;
    PhotonOrigin origin;
    int truth_index;
  };
  std::vector<int> seen;
  for (int i = 0; i < static_cast<int>(event.records.size()); ++i) {
    const ParticleRecord& r = event.records[static_cast<std::size_t>(i)];
    if (r.status == Status::final_state && r.pdg == pdg::kPhoton && r.p(0) >= scenario.photon_threshold &&
        r.p(0) > 0.0) {
      seen.push_back(i);
    }
  }

  // Greedy merging of the closest pairs at the ECAL face.
  struct Pair {
    double distance;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  if (scenario.merge_distance > 0.0) {
    for (std::size_t a = 0; a < seen.size(); ++a) {
      for (std::size_t b = a + 1; b < seen.size(); ++b) {
        const double d = face_distance(unit(event.records[static_cast<std::size_t>(seen[a])].p),
                                       unit(event.records[static_cast<std::size_t>(seen[b])].p),
                                       scenario.ecal_radius);
        if (d < scenario.merge_distance) pairs.push_back({d, a, b});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
      return x.distance != y.distance ? x.distance < y.distance : std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
  }
  std::vector<char> used(seen.size(), 0);
  std::vector<Cluster> clusters;
  for (const Pair& pr : pairs) {
    if (used[pr.a] || used[pr.b]) continue;
    used[pr.a] = used[pr.b] = 1;
    const ParticleRecord& ra = event.records[static_cast<std::size_t>(seen[pr.a])];
    const ParticleRecord& rb = event.records[static_cast<std::size_t>(seen[pr.b])];
    const FourVector sum = ra.p + rb.p;
    int truth = ra.p(0) >= rb.p(0) ? seen[pr.a] : seen[pr.b];
    if (ra.mother >= 0 && ra.mother == rb.mother) truth = ra.mother;
    FourVector p;
    p(0) = sum(0);
    p.tail<3>() = sum(0) * sum.tail<3>().normalized();
    clusters.push_back({p, PhotonOrigin::merged_pi0, truth});
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!used[k]) {
      clusters.push_back({event.records[static_cast<std::size_t>(seen[k])].p, PhotonOrigin::genuine, seen[k]});
    }
  }
  std::stable_sort(clusters.begin(), clusters.end(), [](const Cluster& x, const Cluster& y) {
    return x.truth_index < y.truth_index;
  });

  if (scenario.fake_rate > 0.0) {
    const ThreeVector axis = primary_axis(event);
    for (int side : {1, -1}) {
      const int n = poisson(rng, scenario.fake_rate);
      for (int i = 0; i < n; ++i) {
        const double e = scenario.photon_threshold + exponential(rng, kFakeEnergyMean);
        ThreeVector dir = isotropic_direction(rng);
        if (side * dir.dot(axis) < 0.0) dir = -dir;
        FourVector p;
        p(0) = e;
        p.tail<3>() = e * dir;
        clusters.push_back({p, PhotonOrigin::fake, -1});
      }
    }
  }

  std::vector<ReconstructedPhoton> out;
  out.reserve(clusters.size());
  for (const Cluster& c : clusters) {
    ReconstructedPhoton g = smear_photon(c.p, scenario, rng);
    g.origin = c.origin;
    g.truth_index = c.truth_index;
    out.push_back(g);
  }
  return out;
}

double merged_pi0_tag_probability(double e, const DetectorScenario& scenario) {
  const double emax = scenario.gamma_pi0_sep_max_energy;
  if (e <= emax) return 1.0;
  if (e >= 2.0 * emax) return 0.5;
  return 1.0 - 0.5 * (e - emax) / emax;
}

PhotonTag gamma_pi0_separation(const ReconstructedPhoton& cluster, const DetectorScenario& scenario, Rng& rng) {
  switch (cluster.origin) {
    case PhotonOrigin::fake: return PhotonTag::pi0_like;
    case PhotonOrigin::merged_pi0:
      return bernoulli(rng, merged_pi0_tag_probability(cluster.e, scenario)) ? PhotonTag::pi0_like
                                                                             : PhotonTag::single_photon;
    case PhotonOrigin::genuine:
      return bernoulli(rng, scenario.gamma_id_efficiency) ? PhotonTag::single_photon : PhotonTag::pi0_like;
  }
  return PhotonTag::pi0_like;
}

bool is_tracked(int pdg_code) {
  const int a = std::abs(pdg_code);
  return a == pdg::kPiPlus || a == pdg::kKPlus;
}

ReconstructedTrack smear_track(const ParticleRecord& truth, int truth_index, const DetectorScenario& scenario,
                               Rng& rng) {
  if (!is_tracked(truth.pdg)) {
    throw std::invalid_argument("smear_track: " + particle_name(truth.pdg) + " is not a tracked hadron");
  }
  ReconstructedTrack t;
  t.charge = charge(truth.pdg);
  t.pid = std::abs(truth.pdg) == pdg::kKPlus ? Pid::kaon : Pid::pion;
  t.truth_index = truth_index;
  t.truth_vertex = truth.vertex;
  const ThreeVector p = truth.p.tail<3>();
  const double pt = std::hypot(p.x(), p.y());
  double scale = 1.0;
  if (scenario.track_pt_res > 0.0 && pt > 0.0) {
    double inv = 0.0;
    do {
      inv = 1.0 / pt + scenario.track_pt_res * gaussian(rng);
    } while (!(inv > 0.0));
    scale = 1.0 / (inv * pt);
  }
  t.p = scale == 1.0 ? FourVector(truth.p) : from_momentum(scale * p, nominal_mass(truth.pdg));
  t.impact_vertex = truth.vertex;
  if (scenario.vertex_res > 0.0) {
    for (int k = 0; k < 3; ++k) t.impact_vertex(k) += scenario.vertex_res * gaussian(rng);
  }
  return t;
}

std::vector<ReconstructedTrack> reconstruct_tracks(const Event& event, const DetectorScenario& scenario, Rng& rng) {
  std::vector<ReconstructedTrack> out;
  for (int i = 0; i < static_cast<int>(event.records.size()); ++i) {
    const ParticleRecord& r = event.records[static_cast<std::size_t>(i)];
    if (r.status == Status::final_state && is_tracked(r.pdg)) out.push_back(smear_track(r, i, scenario, rng));
  }
  return out;
}

SecondaryVertex reconstruct_secondary_vertex(std::span<const ReconstructedTrack> tracks) {
  if (tracks.size() < 2) throw InsufficientTracks("secondary vertex needs at least 2 tracks");
  SecondaryVertex v;
  for (const auto& t : tracks) v.position += t.impact_vertex;
  v.position /= static_cast<double>(tracks.size());
  v.distance = v.position.norm();
  return v;
}

std::vector<std::vector<int>> vertex_groups(std::span<const ReconstructedTrack> tracks, std::size_t min_size) {
  std::vector<std::vector<int>> groups;
  std::vector<ThreeVector> keys;
  for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
    const ThreeVector& v = tracks[static_cast<std::size_t>(i)].truth_vertex;
    const auto it = std::find(keys.begin(), keys.end(), v);
    if (it == keys.end()) {
      keys.push_back(v);
      groups.push_back({i});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(i);
    }
  }
  std::erase_if(groups, [&](const std::vector<int>& g) { return g.size() < min_size; });
  return groups;
}

}  // namespace hfcal
