#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hfcal/config.hpp"
#include "hfcal/evtgen.hpp"
#include "hfcal/particle_data.hpp"

namespace hfcal {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::initial: return "initial";
    case Status::decayed: return "decayed";
    case Status::final_state: return "final";
  }
  return "final";
}

std::string_view to_string(Flavour f) {
  switch (f) {
    case Flavour::b: return "b";
    case Flavour::c: return "c";
    case Flavour::uds: return "uds";
  }
  return "uds";
}

std::optional<Status> parse_status(std::string_view s) {
  if (s == "initial") return Status::initial;
  if (s == "decayed") return Status::decayed;
  if (s == "final") return Status::final_state;
  return std::nullopt;
}

std::optional<Flavour> parse_flavour(std::string_view s) {
  if (s == "b") return Flavour::b;
  if (s == "c") return Flavour::c;
  if (s == "uds") return Flavour::uds;
  return std::nullopt;
}

std::vector<int> Event::daughters(int index) const {
  std::vector<int> out;
  for (int i = index + 1; i < static_cast<int>(records.size()); ++i) {
    if (records[static_cast<std::size_t>(i)].mother == index) out.push_back(i);
  }
  return out;
}

bool Event::descends_from(int index, int ancestor) const {
  while (index >= 0) {
    if (index == ancestor) return true;
    index = records[static_cast<std::size_t>(index)].mother;
  }
  return false;
}

FourVector Event::final_state_sum() const {
  FourVector sum = FourVector::Zero();
  for (const auto& r : records) {
    if (r.status == Status::final_state) sum += r.p;
  }
  return sum;
}

std::vector<int> Event::final_state_descendants(int ancestor) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    if (records[static_cast<std::size_t>(i)].status == Status::final_state && descends_from(i, ancestor)) {
      out.push_back(i);
    }
  }
  return out;
}

namespace {

// +1 when the positive code carries the heavy quark, -1 when it carries the antiquark.
int heavy_quark_sign(int pdg_code) {
  const int a = std::abs(pdg_code);
  if (a >= 1000) return 1;
  const int heaviest = (a / 100) % 10;
  return heaviest % 2 == 0 ? 1 : -1;
}

std::optional<Flavour> hadron_flavour(int pdg_code) {
  const int a = std::abs(pdg_code);
  const int heaviest = a >= 1000 ? (a / 1000) % 10 : (a / 100) % 10;
  if (heaviest == 5) return Flavour::b;
  if (heaviest == 4) return Flavour::c;
  return std::nullopt;
}

// Orients a species code for the quark (+1) or antiquark (-1) hemisphere.
int orient(int pdg_code, int hemisphere_sign) {
  const int p = std::abs(pdg_code);
  if (particle(p).self_conjugate) return p;
  return heavy_quark_sign(p) * hemisphere_sign > 0 ? p : -p;
}

int natural_hemisphere(int pdg_code) {
  const int sign = pdg_code < 0 ? -1 : 1;
  return sign * heavy_quark_sign(pdg_code);
}

int sample_species(const std::vector<SpeciesFraction>& species, Rng& rng) {
  double u = uniform01(rng);
  for (const auto& s : species) {
    if (u < s.fraction) return s.pdg;
    u -= s.fraction;
  }
  return species.back().pdg;
}

std::vector<SpeciesFraction> parse_species(const ConfigSection& s, const std::string& key) {
  std::vector<SpeciesFraction> out;
  std::string text = s.text(key);
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("[" + s.name() + "] key '" + key + "': expected pdg:fraction pairs");
    }
    try {
      out.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("[" + s.name() + "] key '" + key + "': bad entry '" + item + "'");
    }
    start = comma + 1;
  }
  return out;
}

void check_species(const std::vector<SpeciesFraction>& species, const std::string& what,
                   std::optional<Flavour> flavour) {
  if (species.empty()) throw ConfigError("generator: " + what + " species list is empty");
  double sum = 0.0;
  for (const auto& s : species) {
    if (!is_known(s.pdg) || s.pdg <= 0) {
      throw ConfigError("generator: " + what + " species has unknown code " + std::to_string(s.pdg));
    }
    if (hadron_flavour(s.pdg) != flavour) {
      throw ConfigError("generator: " + what + " species " + std::to_string(s.pdg) +
                        " has the wrong heavy flavour");
    }
    if (s.fraction < 0.0) throw ConfigError("generator: negative species fraction");
    sum += s.fraction;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("generator: " + what + " species fractions sum to " + std::to_string(sum));
  }
}

double truncated_gaussian(Rng& rng, double mean, double width, double lo, double hi) {
  for (int i = 0; i < 10000; ++i) {
    const double x = gaussian(rng, mean, width);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mean, lo, hi);
}

double sample_breit_wigner(const ParticleData& p, Rng& rng) {
  const double limit = std::atan(2.0 * constants::kBreitWignerCut);
  return p.mass + 0.5 * p.width * std::tan(uniform(rng, -limit, limit));
}

double sample_mass(int pdg_code, Rng& rng) {
  const ParticleData& p = particle(pdg_code);
  return p.breit_wigner ? sample_breit_wigner(p, rng) : p.mass;
}

// Orthonormal pair spanning the plane transverse to n.
std::pair<ThreeVector, ThreeVector> transverse_basis(const ThreeVector& n) {
  ThreeVector ref = std::abs(n.z()) < 0.9 ? ThreeVector::UnitZ() : ThreeVector::UnitX();
  ThreeVector u = n.cross(ref).normalized();
  return {u, n.cross(u)};
}

// Rescales fragmentation momenta so that their sum equals `target`: boost to
// their rest frame, scale 3-momenta to the target mass, boost to the target frame.
bool balance(std::vector<FourVector>& momenta, const std::vector<double>& masses,
             const FourVector& target) {
  const double target_m2 = mass_squared(target);
  const double mass_sum = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (!(target(0) > 0.0) || !(target_m2 > mass_sum * mass_sum)) return false;
  const double target_mass = std::sqrt(target_m2);

  FourVector total = FourVector::Zero();
  for (const auto& p : momenta) total += p;
  if (!(mass_squared(total) > 0.0)) return false;
  const ThreeVector to_rest = -beta_of(total);
  std::vector<double> p2(momenta.size());
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    p2[i] = boost(momenta[i], to_rest).tail<3>().squaredNorm();
    momenta[i] = boost(momenta[i], to_rest);
  }
  auto energy_at = [&](double k) {
    double e = 0.0;
    for (std::size_t i = 0; i < p2.size(); ++i) e += std::sqrt(masses[i] * masses[i] + k * k * p2[i]);
    return e;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (energy_at(hi) < target_mass) {
    hi *= 2.0;
    if (hi > 1e12) return false;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (energy_at(mid) < target_mass ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  const ThreeVector to_target = beta_of(target);
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    momenta[i] = boost(from_momentum(k * momenta[i].tail<3>(), masses[i]), to_target);
  }
  // Absorb the residual rounding into the most energetic particle's momentum.
  FourVector sum = FourVector::Zero();
  for (const auto& p : momenta) sum += p;
  const auto hardest = std::max_element(momenta.begin(), momenta.end(),
                                        [](const FourVector& a, const FourVector& b) { return a(0) < b(0); });
  hardest->tail<3>() += (target - sum).tail<3>();
  (*hardest)(0) = std::sqrt(hardest->tail<3>().squaredNorm() +
                            masses[static_cast<std::size_t>(hardest - momenta.begin())] *
                                masses[static_cast<std::size_t>(hardest - momenta.begin())]);
  return true;
}

void assign_pion_charges(std::vector<int>& codes, int target_charge, double neutral_fraction, Rng& rng) {
  std::vector<bool> neutral(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) neutral[i] = bernoulli(rng, neutral_fraction);
  auto n_charged = [&] { return static_cast<int>(std::count(neutral.begin(), neutral.end(), false)); };
  const int need = std::abs(target_charge);
  if ((n_charged() + need) % 2 == 1) {
    const auto first_neutral = std::find(neutral.begin(), neutral.end(), true);
    if (first_neutral != neutral.end()) {
      *first_neutral = false;
    } else {
      neutral.front() = true;
    }
  }
  int assigned = 0;
  int sign = 1;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (neutral[i]) {
      codes[i] = pdg::kPi0;
    } else if (assigned < need) {
      codes[i] = target_charge > 0 ? pdg::kPiPlus : -pdg::kPiPlus;
      ++assigned;
    } else {
      codes[i] = sign * pdg::kPiPlus;
      sign = -sign;
    }
  }
}

struct Hemisphere {
  int leading_pdg = 0;
  FourVector leading = FourVector::Zero();
  std::vector<int> frag_codes;
  std::vector<FourVector> frag;
};

}  // namespace

double GeneratorConfig::flavour_fraction(Flavour f) const {
  switch (f) {
    case Flavour::b: return rb;
    case Flavour::c: return rc;
    case Flavour::uds: return 1.0 - rb - rc;
  }
  return 0.0;
}

void GeneratorConfig::validate() const {
  if (!(sqrt_s > 20.0)) throw ConfigError("generator: sqrt_s must exceed 20 GeV");
  if (rb < 0.0 || rc < 0.0 || rb + rc > 1.0) throw ConfigError("generator: flavour fractions outside [0, 1]");
  if (!include_uds && !forced_flavour && !(rb + rc > 0.0)) {
    throw ConfigError("generator: no flavour enabled");
  }
  check_species(b_species, "b", Flavour::b);
  check_species(c_species, "c", Flavour::c);
  check_species(uds_species, "uds", std::nullopt);
  if (!(frag_x_min > 0.0 && frag_x_min < frag_x_max && frag_x_max < 1.0)) {
    throw ConfigError("generator: need 0 < frag_x_min < frag_x_max < 1");
  }
  if (!(frag_x_width > 0.0)) throw ConfigError("generator: frag_x_width must be positive");
  if (!(frag_multiplicity > 0.0)) throw ConfigError("generator: frag_multiplicity must be positive");
  if (frag_pt_sigma < 0.0) throw ConfigError("generator: frag_pt_sigma must be non-negative");
  if (frag_neutral_fraction < 0.0 || frag_neutral_fraction > 1.0) {
    throw ConfigError("generator: frag_neutral_fraction outside [0, 1]");
  }
  decays.validate();
  if (!signal_chain.empty()) {
    validate_chain(signal_chain);
    if (!hadron_flavour(signal_chain.front().parent)) {
      throw ConfigError("generator: signal chain must start from a heavy hadron");
    }
  }
}

GeneratorConfig GeneratorConfig::load(const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::load(path);
  const ConfigSection& s = file.section("generator");
  s.require_only({"sqrt_s", "rb", "rc", "include_uds", "b_species", "c_species", "uds_species",
                  "frag_x_mean", "frag_x_width", "frag_x_min", "frag_x_max", "frag_multiplicity",
                  "frag_pt_sigma", "frag_neutral_fraction", "decay_table"});
  GeneratorConfig c;
  c.sqrt_s = s.number("sqrt_s");
  c.rb = s.number("rb");
  c.rc = s.number("rc");
  c.include_uds = s.flag("include_uds");
  c.b_species = parse_species(s, "b_species");
  c.c_species = parse_species(s, "c_species");
  c.uds_species = parse_species(s, "uds_species");
  c.frag_x_mean = s.number("frag_x_mean");
  c.frag_x_width = s.number("frag_x_width");
  c.frag_x_min = s.number("frag_x_min");
  c.frag_x_max = s.number("frag_x_max");
  c.frag_multiplicity = s.number("frag_multiplicity");
  c.frag_pt_sigma = s.number("frag_pt_sigma");
  c.frag_neutral_fraction = s.number("frag_neutral_fraction");
  std::filesystem::path table = s.text("decay_table");
  if (table.is_relative()) table = path.parent_path() / table;
  c.decays = DecayTable::load(table);
  c.validate();
  return c;
}

Event make_primary_event(const GeneratorConfig& config, Rng& rng) {
  Event ev;
  const bool forced = !config.signal_chain.empty();
  if (forced) {
    ev.flavour = *hadron_flavour(config.signal_chain.front().parent);
  } else if (config.forced_flavour) {
    ev.flavour = *config.forced_flavour;
  } else {
    const double total = config.rb + config.rc + (config.include_uds ? 1.0 - config.rb - config.rc : 0.0);
    const double u = uniform01(rng) * total;
    ev.flavour = u < config.rb ? Flavour::b : (u < config.rb + config.rc ? Flavour::c : Flavour::uds);
  }

  const double beam = 0.5 * config.sqrt_s;
  // Quark direction from 1 + cos^2(theta).
  double cos_theta = 0.0;
  do {
    cos_theta = uniform(rng, -1.0, 1.0);
  } while (uniform(rng, 0.0, 2.0) > 1.0 + cos_theta * cos_theta);
  const double phi = uniform(rng, -std::numbers::pi, std::numbers::pi);
  const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
  const ThreeVector axis(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta);
  const auto [tu, tv] = transverse_basis(axis);

  int quark = 1;
  const std::vector<SpeciesFraction>* species = &config.uds_species;
  if (ev.flavour == Flavour::b) {
    quark = pdg::kBottom;
    species = &config.b_species;
  } else if (ev.flavour == Flavour::c) {
    quark = pdg::kCharm;
    species = &config.c_species;
  } else {
    quark = 1 + static_cast<int>(uniform01(rng) * 3.0) % 3;
  }
  const int signal_side = forced ? (bernoulli(rng, 0.5) ? 0 : 1) : -1;

  std::array<Hemisphere, 2> hemis;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1000) throw std::runtime_error("make_primary_event: cannot balance event");
    std::vector<FourVector> frag_all;
    std::vector<double> frag_masses;
    FourVector leading_sum = FourVector::Zero();
    bool ok = true;
    for (int side = 0; side < 2 && ok; ++side) {
      Hemisphere& h = hemis[static_cast<std::size_t>(side)];
      const int hemi_sign = side == 0 ? 1 : -1;
      const ThreeVector dir = hemi_sign * axis;
      if (side == signal_side) {
        const int parent = config.signal_chain.front().parent;
        h.leading_pdg = natural_hemisphere(parent) == hemi_sign ? parent : conjugate(parent);
      } else {
        h.leading_pdg = orient(sample_species(*species, rng), hemi_sign);
      }
      const double m = nominal_mass(h.leading_pdg);
      const double x = truncated_gaussian(rng, config.frag_x_mean, config.frag_x_width, config.frag_x_min,
                                          config.frag_x_max);
      const double e = x * beam;
      const ThreeVector kick = gaussian(rng, 0.0, config.frag_pt_sigma) * tu +
                               gaussian(rng, 0.0, config.frag_pt_sigma) * tv;
      const double pl2 = e * e - m * m - kick.squaredNorm();
      if (!(pl2 > 0.0)) {
        ok = false;
        break;
      }
      h.leading = from_momentum(std::sqrt(pl2) * dir + kick, m);
      leading_sum += h.leading;

      int n = 0;
      for (int tries = 0; n < 1 && tries < 1000; ++tries) n = poisson(rng, config.frag_multiplicity);
      n = std::max(n, 1);
      h.frag_codes.assign(static_cast<std::size_t>(n), pdg::kPi0);
      assign_pion_charges(h.frag_codes, -charge(h.leading_pdg), config.frag_neutral_fraction, rng);
      h.frag.clear();
      double remaining = (1.0 - x) * beam;
      for (int i = 0; i < n; ++i) {
        const double share = i + 1 < n ? uniform01(rng) * remaining : remaining;
        remaining -= share;
        const ThreeVector pt = gaussian(rng, 0.0, config.frag_pt_sigma) * tu +
                               gaussian(rng, 0.0, config.frag_pt_sigma) * tv;
        const double mi = nominal_mass(h.frag_codes[static_cast<std::size_t>(i)]);
        h.frag.push_back(from_momentum(share * dir + pt, mi));
        frag_all.push_back(h.frag.back());
        frag_masses.push_back(mi);
      }
    }
    if (!ok) continue;
    const FourVector target = FourVector(config.sqrt_s, 0.0, 0.0, 0.0) - leading_sum;
    if (!balance(frag_all, frag_masses, target)) continue;
    std::size_t k = 0;
    for (auto& h : hemis) {
      for (auto& p : h.frag) p = frag_all[k++];
    }
    break;
  }

  ev.records.push_back({quark, Status::initial, -1, FourVector(beam, beam * axis.x(), beam * axis.y(), beam * axis.z()),
                        ThreeVector::Zero()});
  ev.records.push_back({-quark, Status::initial, -1,
                        FourVector(beam, -beam * axis.x(), -beam * axis.y(), -beam * axis.z()), ThreeVector::Zero()});
  for (int side = 0; side < 2; ++side) {
    const Hemisphere& h = hemis[static_cast<std::size_t>(side)];
    ev.records.push_back({h.leading_pdg, Status::final_state, side, h.leading, ThreeVector::Zero()});
    for (std::size_t i = 0; i < h.frag.size(); ++i) {
      ev.records.push_back({h.frag_codes[i], Status::final_state, side, h.frag[i], ThreeVector::Zero()});
    }
  }
  return ev;
}

namespace {

const DecayChannel* chain_channel(std::span<const DecayChannel> chain, int pdg_code, bool& conjugated) {
  for (const auto& c : chain) {
    if (c.parent == pdg_code) {
      conjugated = false;
      return &c;
    }
    if (conjugate(c.parent) == pdg_code) {
      conjugated = true;
      return &c;
    }
  }
  return nullptr;
}

// Daughter masses for a decay of a parent of mass `parent_mass`; resonances
// are resampled until the channel is open.
std::optional<std::vector<double>> sample_masses(const std::vector<int>& daughters, double parent_mass,
                                                 Rng& rng) {
  std::vector<double> masses(daughters.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double sum = 0.0;
    for (std::size_t i = 0; i < daughters.size(); ++i) {
      masses[i] = sample_mass(daughters[i], rng);
      sum += masses[i];
    }
    if (sum < parent_mass) return masses;
  }
  return std::nullopt;
}

void decay_all(Event& ev, const DecayTable& table, std::span<const DecayChannel> chain, Rng& rng) {
  std::vector<char> signal(ev.records.size(), 0);
  if (ev.signal_root >= 0) signal[static_cast<std::size_t>(ev.signal_root)] = 1;
  for (std::size_t i = 0; i < ev.records.size(); ++i) {
    if (ev.records[i].status != Status::final_state) continue;
    if (std::abs(ev.records[i].pdg) == pdg::kK0) {
      ev.records[i].pdg = bernoulli(rng, 0.5) ? pdg::kKShort : pdg::kKLong;
    }
    if (particle(ev.records[i].pdg).stable) continue;

    const ParticleRecord parent = ev.records[i];
    const double parent_mass = mass(parent.p);
    std::vector<int> daughters;
    std::optional<std::vector<double>> masses;
    bool conjugated = false;
    const DecayChannel* forced = signal[i] ? chain_channel(chain, parent.pdg, conjugated) : nullptr;
    if (forced != nullptr) {
      daughters = conjugated ? conjugate(*forced).daughters : forced->daughters;
      masses = sample_masses(daughters, parent_mass, rng);
    } else {
      for (int attempt = 0; attempt < 50 && !masses; ++attempt) {
        daughters = table.sample(parent.pdg, rng);
        masses = sample_masses(daughters, parent_mass, rng);
      }
      if (!masses) {
        daughters = filler_daughters(parent.pdg);
        masses = sample_masses(daughters, parent_mass, rng);
      }
    }
    if (!masses) {
      throw std::runtime_error("decay of " + particle_name(parent.pdg) + " is kinematically closed");
    }
    const std::vector<FourVector> products = n_body_phase_space(parent.p, *masses, rng);
    ev.records[i].status = Status::decayed;
    for (std::size_t k = 0; k < products.size(); ++k) {
      ev.records.push_back({daughters[k], Status::final_state, static_cast<int>(i), products[k], ThreeVector::Zero()});
      signal.push_back(signal[i]);
    }
  }
}

}  // namespace

void decay_generic(Event& event, const DecayTable& table, Rng& rng) { decay_all(event, table, {}, rng); }

Event force_signal_chain(Event event_template, std::span<const DecayChannel> chain, const DecayTable& table,
                         Rng& rng) {
  validate_chain(chain);
  const int parent = chain.front().parent;
  int root = -1;
  for (int i = 0; i < static_cast<int>(event_template.records.size()); ++i) {
    const ParticleRecord& r = event_template.records[static_cast<std::size_t>(i)];
    if (r.status == Status::final_state && (r.pdg == parent || r.pdg == conjugate(parent))) {
      root = i;
      break;
    }
  }
  if (root < 0) {
    throw ConfigError("signal chain parent " + particle_name(parent) + " is not present in the event");
  }
  event_template.signal_root = root;
  decay_all(event_template, table, chain, rng);
  return event_template;
}

void decay_vertex_placement(Event& event, Rng& rng) {
  const std::size_t n = event.records.size();
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int m = event.records[i].mother;
    if (m >= 0) children[static_cast<std::size_t>(m)].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const ParticleRecord& r = event.records[i];
    if (children[i].empty()) continue;
    ThreeVector decay_vertex = r.vertex;
    if (r.status == Status::decayed) {
      const double ctau = particle(r.pdg).ctau;
      const double p = r.p.tail<3>().norm();
      if (ctau > 0.0 && p > 0.0) {
        const double gamma_beta = p / mass(r.p);
        decay_vertex += gamma_beta * ctau * exponential(rng, 1.0) * (r.p.tail<3>() / p);
      }
    }
    for (std::size_t c : children[i]) event.records[c].vertex = decay_vertex;
  }
}

Event generate_event(const GeneratorConfig& config, std::uint64_t master_seed, std::int64_t event_id) {
  const std::uint64_t seed = stream_seed(master_seed, static_cast<std::uint64_t>(event_id));
  Rng rng(seed);
  Event ev = make_primary_event(config, rng);
  if (config.signal_chain.empty()) {
    decay_generic(ev, config.decays, rng);
  } else {
    ev = force_signal_chain(std::move(ev), config.signal_chain, config.decays, rng);
  }
  decay_vertex_placement(ev, rng);
  ev.id = event_id;
  ev.seed = seed;
  return ev;
}

namespace {

bool matches_chain(const Event& ev, int index, std::span<const DecayChannel> chain) {
  const ParticleRecord& r = ev.records[static_cast<std::size_t>(index)];
  bool conjugated = false;
  const DecayChannel* c = chain_channel(chain, r.pdg, conjugated);
  if (c == nullptr) return true;
  if (r.status != Status::decayed) return false;
  std::vector<int> expected = conjugated ? conjugate(*c).daughters : c->daughters;
  const std::vector<int> kids = ev.daughters(index);
  std::vector<int> actual;
  for (int k : kids) actual.push_back(ev.records[static_cast<std::size_t>(k)].pdg);
  std::sort(expected.begin(), expected.end());
  std::sort(actual.begin(), actual.end());
  if (expected != actual) return false;
  return std::all_of(kids.begin(), kids.end(), [&](int k) { return matches_chain(ev, k, chain); });
}

}  // namespace

int find_chain_root(const Event& event, std::span<const DecayChannel> chain) {
  if (chain.empty()) return -1;
  const int parent = chain.front().parent;
  for (int i = 0; i < static_cast<int>(event.records.size()); ++i) {
    const int code = event.records[static_cast<std::size_t>(i)].pdg;
    if ((code == parent || code == conjugate(parent)) && matches_chain(event, i, chain)) return i;
  }
  return -1;
}

}  // namespace hfcal
