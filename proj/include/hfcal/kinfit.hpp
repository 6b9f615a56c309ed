#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "hfcal/detector.hpp"
#include "hfcal/kinematics.hpp"
#include "hfcal/particle_data.hpp"

namespace hfcal {

template <typename Scalar>
using Vector6T = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Matrix6T = Eigen::Matrix<Scalar, 6, 6>;
using Vector6 = Vector6T<double>;
using Matrix6 = Matrix6T<double>;

class DegenerateCovariance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// alpha = (E1, theta1, phi1, E2, theta2, phi2) with diagonal covariance.
template <typename Scalar>
struct PhotonParametersT {
  Vector6T<Scalar> alpha = Vector6T<Scalar>::Zero();
  Vector6T<Scalar> variance = Vector6T<Scalar>::Ones();

  Matrix6T<Scalar> covariance() const { return variance.asDiagonal(); }
};
using PhotonParameters = PhotonParametersT<double>;

PhotonParameters photon_parameters(const ReconstructedPhoton& a, const ReconstructedPhoton& b);

template <typename Scalar>
struct FitResultT {
  Vector6T<Scalar> alpha_fit = Vector6T<Scalar>::Zero();
  Scalar chi2 = 0;
  int n_iter = 0;
  bool converged = false;
  Vector6T<Scalar> pulls = Vector6T<Scalar>::Zero();
  FourVectorT<Scalar> fitted_pi0 = FourVectorT<Scalar>::Zero();
};
using FitResult = FitResultT<double>;

inline constexpr int kFitMaxIterations = 20;
inline constexpr double kFitConstraintTolerance = 1e-6;  // GeV^2
inline constexpr double kFitChi2Tolerance = 1e-6;

template <typename Scalar>
FourVectorT<Scalar> photon_pair_momentum(const Vector6T<Scalar>& a) {
  auto photon = [&](int k) {
    const Scalar e = a(k);
    const Scalar st = std::sin(a(k + 1));
    return FourVectorT<Scalar>(e, e * st * std::cos(a(k + 2)), e * st * std::sin(a(k + 2)), e * std::cos(a(k + 1)));
  };
  return photon(0) + photon(3);
}

// m^2 of two massless photons, 2 E1 E2 (1 - cos psi).
template <typename Scalar>
Scalar pair_mass_squared(const Vector6T<Scalar>& a) {
  const Scalar cos_psi = std::sin(a(1)) * std::sin(a(4)) * std::cos(a(2) - a(5)) + std::cos(a(1)) * std::cos(a(4));
  return Scalar(2) * a(0) * a(3) * (Scalar(1) - cos_psi);
}

template <typename Scalar>
Eigen::Matrix<Scalar, 1, 6> pair_mass_squared_gradient(const Vector6T<Scalar>& a) {
  const Scalar s1 = std::sin(a(1)), c1 = std::cos(a(1));
  const Scalar s2 = std::sin(a(4)), c2 = std::cos(a(4));
  const Scalar cd = std::cos(a(2) - a(5)), sd = std::sin(a(2) - a(5));
  const Scalar cos_psi = s1 * s2 * cd + c1 * c2;
  const Scalar ee = Scalar(2) * a(0) * a(3);
  Eigen::Matrix<Scalar, 1, 6> d;
  d(0) = Scalar(2) * a(3) * (Scalar(1) - cos_psi);
  d(3) = Scalar(2) * a(0) * (Scalar(1) - cos_psi);
  d(1) = -ee * (c1 * s2 * cd - s1 * c2);
  d(4) = -ee * (s1 * c2 * cd - c1 * s2);
  d(2) = ee * s1 * s2 * sd;
  d(5) = -ee * s1 * s2 * sd;
  return d;
}

// Iterated linearized Lagrange-multiplier solution of
//   min (alpha - alpha0)^T V^-1 (alpha - alpha0)  s.t.  m^2(alpha) = m_target^2.
template <typename Scalar>
FitResultT<Scalar> fit_pair_mass(const PhotonParametersT<Scalar>& p, Scalar m_target) {
  if (!(p.variance.minCoeff() > Scalar(0))) throw DegenerateCovariance("fit: variances must be positive");
  if (!(p.alpha(0) > Scalar(0) && p.alpha(3) > Scalar(0))) {
    throw std::invalid_argument("fit: photon energies must be positive");
  }
  if (!(pair_mass_squared(p.alpha) > Scalar(0))) throw std::invalid_argument("fit: measured mass must be positive");

  const Vector6T<Scalar>& alpha0 = p.alpha;
  const Vector6T<Scalar>& v = p.variance;
  const Scalar target2 = m_target * m_target;
  FitResultT<Scalar> r;
  Vector6T<Scalar> alpha = alpha0;
  Scalar chi2_prev = 0;
  for (int iter = 1; iter <= kFitMaxIterations; ++iter) {
    r.n_iter = iter;
    const Scalar h = pair_mass_squared(alpha) - target2;
    const Eigen::Matrix<Scalar, 1, 6> d = pair_mass_squared_gradient(alpha);
    const Scalar dvd = (d.array().square() * v.transpose().array()).sum();
    if (!(dvd > Scalar(0))) throw DegenerateCovariance("fit: D V D^T is not positive");
    const Scalar lambda = (h + d.dot(alpha0 - alpha)) / dvd;
    Vector6T<Scalar> next = alpha0 - lambda * v.cwiseProduct(d.transpose());
    int halvings = 0;
    while (!(next(0) > Scalar(0) && next(3) > Scalar(0)) && halvings < 30) {
      next = alpha + Scalar(0.5) * (next - alpha);
      ++halvings;
    }
    if (!(next(0) > Scalar(0) && next(3) > Scalar(0))) {
      r.alpha_fit = alpha;
      r.converged = false;
      break;
    }
    alpha = next;
    const Vector6T<Scalar> diff = alpha - alpha0;
    r.chi2 = (diff.array().square() / v.array()).sum();
    const Scalar h_new = pair_mass_squared(alpha) - target2;
    if (std::abs(h_new) < Scalar(kFitConstraintTolerance) && std::abs(r.chi2 - chi2_prev) < Scalar(kFitChi2Tolerance)) {
      r.converged = true;
      break;
    }
    chi2_prev = r.chi2;
  }
  r.alpha_fit = alpha;

  // cov(alpha0 - alpha_fit) = V D^T (D V D^T)^-1 D V, diagonal part.
  const Eigen::Matrix<Scalar, 1, 6> d = pair_mass_squared_gradient(alpha);
  const Scalar dvd = (d.array().square() * v.transpose().array()).sum();
  for (int i = 0; i < 6; ++i) {
    const Scalar var_residual = v(i) * d(i) * d(i) * v(i) / dvd;
    r.pulls(i) = var_residual > Scalar(0) ? (alpha0(i) - alpha(i)) / std::sqrt(var_residual) : Scalar(0);
  }
  r.fitted_pi0 = photon_pair_momentum(alpha);
  return r;
}

FitResult fit_pi0_mass(const PhotonParameters& p, double m_target = constants::kPi0Mass);

// Upper-tail probability of chi^2 with one degree of freedom.
double chi2_probability(double chi2);

}  // namespace hfcal
