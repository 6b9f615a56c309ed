#include "hfcal/kinfit.hpp"

#include <cmath>
#include <stdexcept>

namespace hfcal {

PhotonParameters photon_parameters(const ReconstructedPhoton& a, const ReconstructedPhoton& b) {
  PhotonParameters p;
  p.alpha << a.e, a.theta, a.phi, b.e, b.theta, b.phi;
  p.variance << a.cov_diag(0), a.cov_diag(1), a.cov_diag(2), b.cov_diag(0), b.cov_diag(1), b.cov_diag(2);
  return p;
}

FitResult fit_pi0_mass(const PhotonParameters& p, double m_target) { return fit_pair_mass(p, m_target); }

double chi2_probability(double chi2) {
  if (!(chi2 >= 0.0)) throw std::domain_error("chi2_probability: chi2 must be non-negative");
  return std::erfc(std::sqrt(0.5 * chi2));
}

}  // namespace hfcal
