#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hfcal/config.hpp"
#include "hfcal/evtgen.hpp"
#include "hfcal/particle_data.hpp"

namespace hfcal {

namespace {

double minimum_mass(int pdg_code) {
  const ParticleData& p = particle(pdg_code);
  return p.breit_wigner ? p.mass - constants::kBreitWignerCut * p.width : p.mass;
}

std::string describe(const DecayChannel& c) {
  std::string s = std::to_string(c.parent) + " ->";
  for (int d : c.daughters) s += " " + std::to_string(d);
  return s;
}

void check_channel(const DecayChannel& c, const std::string& where) {
  if (!is_known(c.parent)) {
    throw ConfigError(where + ": undefined parent " + std::to_string(c.parent));
  }
  if (particle(c.parent).stable) {
    throw ConfigError(where + ": parent " + std::to_string(c.parent) + " is stable");
  }
  if (c.daughters.size() < 2 || c.daughters.size() > kMaxPhaseSpaceDaughters) {
    throw ConfigError(where + ": channel " + describe(c) + " needs 2..8 daughters");
  }
  int q = 0;
  double m = 0.0;
  for (int d : c.daughters) {
    if (!is_known(d)) throw ConfigError(where + ": undefined daughter " + std::to_string(d));
    q += charge(d);
    m += minimum_mass(d);
  }
  if (q != charge(c.parent)) throw ConfigError(where + ": channel " + describe(c) + " violates charge");
  if (!(m < nominal_mass(c.parent))) {
    throw ConfigError(where + ": channel " + describe(c) + " is kinematically closed");
  }
  if (!(c.branching_fraction >= 0.0 && c.branching_fraction <= 1.0)) {
    throw ConfigError(where + ": channel " + describe(c) + " has fraction outside [0, 1]");
  }
}

}  // namespace

DecayChannel conjugate(const DecayChannel& channel) {
  DecayChannel out = channel;
  out.parent = conjugate(channel.parent);
  for (int& d : out.daughters) d = conjugate(d);
  return out;
}

DecayTable DecayTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open decay table " + path.string());
  return parse(in, path.string());
}

DecayTable DecayTable::parse(std::istream& in, const std::string& source) {
  DecayTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    DecayChannel c;
    if (!(ss >> c.parent)) continue;
    if (!(ss >> c.branching_fraction)) {
      throw ConfigError(source + ": line " + std::to_string(line_no) + ": missing branching fraction");
    }
    int d = 0;
    while (ss >> d) c.daughters.push_back(d);
    if (!ss.eof()) {
      throw ConfigError(source + ": line " + std::to_string(line_no) + ": malformed daughter list");
    }
    if (c.parent < 0) {
      throw ConfigError(source + ": line " + std::to_string(line_no) +
                        ": list particles, antiparticles are conjugated automatically");
    }
    table.add(std::move(c));
  }
  table.validate();
  return table;
}

void DecayTable::add(DecayChannel channel) { by_parent_[channel.parent].push_back(std::move(channel)); }

void DecayTable::validate() const {
  for (const auto& [parent, list] : by_parent_) {
    for (const auto& c : list) check_channel(c, "decay table");
    if (total_fraction(parent) > 1.0 + 1e-9) {
      throw ConfigError("decay table: fractions of " + std::to_string(parent) + " sum above 1");
    }
  }
}

std::span<const DecayChannel> DecayTable::channels(int parent) const {
  const auto it = by_parent_.find(parent);
  if (it == by_parent_.end()) return {};
  return it->second;
}

double DecayTable::total_fraction(int parent) const {
  double sum = 0.0;
  for (const auto& c : channels(parent)) sum += c.branching_fraction;
  return sum;
}

std::size_t DecayTable::size() const {
  std::size_t n = 0;
  for (const auto& [p, list] : by_parent_) n += list.size();
  return n;
}

std::vector<int> DecayTable::sample(int pdg_code, Rng& rng) const {
  const bool anti = pdg_code < 0;
  const int key = std::abs(pdg_code);
  double u = uniform01(rng);
  for (const auto& c : channels(key)) {
    if (u < c.branching_fraction) {
      std::vector<int> out = c.daughters;
      if (anti) {
        for (int& d : out) d = conjugate(d);
      }
      return out;
    }
    u -= c.branching_fraction;
  }
  return filler_daughters(pdg_code);
}

std::vector<int> filler_daughters(int pdg_code) {
  const double m = nominal_mass(pdg_code);
  const int q = charge(pdg_code);
  const int abs_q = std::abs(q);
  int n = m > 4.0 ? 5 : (m > 1.5 ? 3 : 2);
  n = std::max(n, abs_q);
  while (n > 2 && n * particle(pdg::kPiPlus).mass >= m) --n;
  std::vector<int> out;
  for (int i = 0; i < abs_q; ++i) out.push_back(q > 0 ? pdg::kPiPlus : -pdg::kPiPlus);
  while (static_cast<int>(out.size()) + 2 <= n) {
    out.push_back(pdg::kPiPlus);
    out.push_back(-pdg::kPiPlus);
  }
  while (static_cast<int>(out.size()) < n) out.push_back(pdg::kPi0);
  double sum = 0.0;
  for (int d : out) sum += nominal_mass(d);
  if (!(sum < m)) {
    throw ConfigError("no open filler decay for " + std::to_string(pdg_code));
  }
  return out;
}

void validate_chain(std::span<const DecayChannel> chain) {
  if (chain.empty()) throw ConfigError("signal chain is empty");
  for (const auto& c : chain) check_channel(c, "signal chain");
  // Every channel after the first must decay a particle produced earlier in the chain.
  for (std::size_t i = 1; i < chain.size(); ++i) {
    bool produced = false;
    for (std::size_t j = 0; j < i && !produced; ++j) {
      for (int d : chain[j].daughters) {
        if (d == chain[i].parent || conjugate(d) == chain[i].parent) produced = true;
      }
    }
    if (!produced) {
      throw ConfigError("signal chain: parent " + std::to_string(chain[i].parent) +
                        " is not produced by an earlier channel");
    }
  }
}

std::vector<DecayChannel> named_chain(std::string_view name) {
  using namespace pdg;
  const DecayChannel pi0_gg{kPi0, {kPhoton, kPhoton}, 1.0};
  const std::vector<DecayChannel> ds_tail = {
      {-kDsPlus, {kPhi, -kRhoPlus}, 1.0},
      {kPhi, {kKPlus, -kKPlus}, 1.0},
      {-kRhoPlus, {-kPiPlus, kPi0}, 1.0},
      pi0_gg,
  };
  std::vector<DecayChannel> out;
  if (name == "bs_ds_pi" || name == "b0_ds_pi") {
    out.push_back({name == "bs_ds_pi" ? kBs : kB0, {-kDsPlus, kPiPlus}, 1.0});
    out.insert(out.end(), ds_tail.begin(), ds_tail.end());
  } else if (name == "b0_pi0pi0") {
    out = {{kB0, {kPi0, kPi0}, 1.0}, pi0_gg};
  } else if (name == "b0_kstar_gamma") {
    out = {{kB0, {kKStar0, kPhoton}, 1.0}, {kKStar0, {kKPlus, -kPiPlus}, 1.0}};
  } else {
    throw ConfigError("unknown signal chain '" + std::string(name) + "'");
  }
  return out;
}

}  // namespace hfcal
