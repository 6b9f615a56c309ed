#pragma once

#include <string>
#include <string_view>

namespace hfcal {

namespace pdg {
inline constexpr int kPhoton = 22;
inline constexpr int kPi0 = 111;
inline constexpr int kPiPlus = 211;
inline constexpr int kKPlus = 321;
inline constexpr int kK0 = 311;
inline constexpr int kKShort = 310;
inline constexpr int kKLong = 130;
inline constexpr int kEta = 221;
inline constexpr int kRho0 = 113;
inline constexpr int kRhoPlus = 213;
inline constexpr int kOmega = 223;
inline constexpr int kPhi = 333;
inline constexpr int kKStar0 = 313;
inline constexpr int kKStarPlus = 323;
inline constexpr int kD0 = 421;
inline constexpr int kDPlus = 411;
inline constexpr int kDsPlus = 431;
inline constexpr int kLambdaC = 4122;
inline constexpr int kLambda = 3122;
inline constexpr int kProton = 2212;
inline constexpr int kNeutron = 2112;
inline constexpr int kB0 = 511;
inline constexpr int kBPlus = 521;
inline constexpr int kBs = 531;
inline constexpr int kLambdaB = 5122;
inline constexpr int kBottom = 5;
inline constexpr int kCharm = 4;
}  // namespace pdg

struct ParticleData {
  int pdg;               // particle (not antiparticle) code
  std::string_view name;
  double mass;           // GeV
  double width;          // GeV, used only for Breit-Wigner sampled resonances
  double ctau;           // mm; 0 for strong/electromagnetic decays
  int charge;            // of the particle, in units of e
  bool self_conjugate;
  bool stable;
  bool breit_wigner;     // mass sampled from a truncated Breit-Wigner at production
};

// Lookup by code; antiparticle codes resolve to the particle entry.
// Throws std::out_of_range for unknown codes.
const ParticleData& particle(int pdg_code);
bool is_known(int pdg_code);

int charge(int pdg_code);
double nominal_mass(int pdg_code);
int conjugate(int pdg_code);
std::string particle_name(int pdg_code);

namespace constants {
inline constexpr double kSqrtS = 91.19;            // GeV
inline constexpr double kPi0Mass = 0.1349768;      // GeV
inline constexpr double kEtaMass = 0.547862;       // GeV
inline constexpr double kRb = 0.2158;
inline constexpr double kRc = 0.1722;
inline constexpr double kBreitWignerCut = 3.0;     // half-range in widths
// Branching fractions used to scale signal yields.
inline constexpr double kBrB0ToPi0Pi0 = 1.55e-6;
inline constexpr double kBrB0ToKStarGamma = 4.18e-5;
inline constexpr double kBrKStar0ToKPi = 2.0 / 3.0;
inline constexpr double kBrBsToDsPi = 2.98e-3;
inline constexpr double kBrB0ToDsPi = 2.16e-5;
inline constexpr double kBrDsToPhiRho = 0.084;
inline constexpr double kBrPhiToKK = 0.491;
inline constexpr double kBrPi0ToGammaGamma = 0.98823;
}  // namespace constants

}  // namespace hfcal
