#include "hfcal/particle_data.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <stdexcept>

namespace hfcal {

namespace {

// Masses and lifetimes at PDG-average level.
constexpr std::array kTable = {
    //           pdg   name        mass       width     ctau[mm]  q  self  stable  bw
    ParticleData{22, "gamma", 0.0, 0.0, 0.0, 0, true, true, false},
    ParticleData{11, "e-", 0.000510999, 0.0, 0.0, -1, false, true, false},
    ParticleData{13, "mu-", 0.1056584, 0.0, 0.0, -1, false, true, false},
    ParticleData{111, "pi0", 0.1349768, 0.0, 0.0, 0, true, false, false},
    ParticleData{211, "pi+", 0.13957039, 0.0, 0.0, 1, false, true, false},
    ParticleData{321, "K+", 0.493677, 0.0, 0.0, 1, false, true, false},
    ParticleData{311, "K0", 0.497611, 0.0, 0.0, 0, false, false, false},
    ParticleData{310, "K_S0", 0.497611, 0.0, 26.844, 0, true, false, false},
    ParticleData{130, "K_L0", 0.497611, 0.0, 0.0, 0, true, true, false},
    ParticleData{221, "eta", 0.547862, 0.0, 0.0, 0, true, false, false},
    ParticleData{113, "rho0", 0.77526, 0.1491, 0.0, 0, true, false, true},
    ParticleData{213, "rho+", 0.77511, 0.1491, 0.0, 1, false, false, true},
    ParticleData{223, "omega", 0.78266, 0.0, 0.0, 0, true, false, false},
    ParticleData{333, "phi", 1.019461, 0.004249, 0.0, 0, true, false, true},
    ParticleData{313, "K*0", 0.89555, 0.0473, 0.0, 0, false, false, true},
    ParticleData{323, "K*+", 0.89167, 0.0514, 0.0, 1, false, false, true},
    ParticleData{2212, "p+", 0.938272, 0.0, 0.0, 1, false, true, false},
    ParticleData{2112, "n0", 0.939565, 0.0, 0.0, 0, false, true, false},
    ParticleData{3122, "Lambda0", 1.115683, 0.0, 78.9, 0, false, false, false},
    ParticleData{421, "D0", 1.86484, 0.0, 0.1229, 0, false, false, false},
    ParticleData{411, "D+", 1.86966, 0.0, 0.3118, 1, false, false, false},
    ParticleData{431, "D_s+", 1.96835, 0.0, 0.1510, 1, false, false, false},
    ParticleData{4122, "Lambda_c+", 2.28646, 0.0, 0.0602, 1, false, false, false},
    ParticleData{511, "B0", 5.27966, 0.0, 0.4554, 0, false, false, false},
    ParticleData{521, "B+", 5.27934, 0.0, 0.4911, 1, false, false, false},
    ParticleData{531, "B_s0", 5.36692, 0.0, 0.4527, 0, false, false, false},
    ParticleData{5122, "Lambda_b0", 5.61960, 0.0, 0.4404, 0, false, false, false},
};

const ParticleData* find(int pdg_code) {
  const int key = std::abs(pdg_code);
  const auto it = std::find_if(kTable.begin(), kTable.end(),
                               [key](const ParticleData& p) { return p.pdg == key; });
  if (it == kTable.end()) return nullptr;
  if (pdg_code < 0 && it->self_conjugate) return nullptr;
  return &*it;
}

}  // namespace

const ParticleData& particle(int pdg_code) {
  const ParticleData* p = find(pdg_code);
  if (p == nullptr) throw std::out_of_range("unknown particle code " + std::to_string(pdg_code));
  return *p;
}

bool is_known(int pdg_code) { return find(pdg_code) != nullptr; }

int charge(int pdg_code) {
  const int q = particle(pdg_code).charge;
  return pdg_code < 0 ? -q : q;
}

double nominal_mass(int pdg_code) { return particle(pdg_code).mass; }

int conjugate(int pdg_code) { return particle(pdg_code).self_conjugate ? pdg_code : -pdg_code; }

std::string particle_name(int pdg_code) {
  const ParticleData& p = particle(pdg_code);
  std::string name(p.name);
  if (pdg_code < 0) {
    if (!name.empty() && (name.back() == '+' || name.back() == '-')) {
      name.back() = name.back() == '+' ? '-' : '+';
    } else {
      name = "anti-" + name;
    }
  }
  return name;
}

}  // namespace hfcal
