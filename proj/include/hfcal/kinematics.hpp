#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "hfcal/random.hpp"

namespace hfcal {

// Four-momenta are stored as (E, px, py, pz) in GeV. Lengths are in mm.
template <typename Scalar>
using FourVectorT = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using ThreeVectorT = Eigen::Matrix<Scalar, 3, 1>;

using FourVector = FourVectorT<double>;
using ThreeVector = ThreeVectorT<double>;

class KinematicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnphysicalInput : public KinematicsError {
 public:
  using KinematicsError::KinematicsError;
};
class SuperluminalBoost : public KinematicsError {
 public:
  using KinematicsError::KinematicsError;
};
class BelowThreshold : public KinematicsError {
 public:
  using KinematicsError::KinematicsError;
};
class DegenerateEvent : public KinematicsError {
 public:
  using KinematicsError::KinematicsError;
};

inline constexpr double kMassSquaredTolerance = 1e-6;  // GeV^2

inline FourVector make_four_vector(double e, double px, double py, double pz) {
  return FourVector(e, px, py, pz);
}

template <typename Derived>
typename Derived::Scalar energy(const Eigen::MatrixBase<Derived>& v) {
  return v(0);
}

template <typename Derived>
auto momentum(const Eigen::MatrixBase<Derived>& v) {
  return v.template tail<3>();
}

template <typename Derived>
typename Derived::Scalar mass_squared(const Eigen::MatrixBase<Derived>& v) {
  return v(0) * v(0) - v.template tail<3>().squaredNorm();
}

// Mass of a single four-vector, with the tiny-negative clamp applied.
template <typename Derived>
typename Derived::Scalar mass(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar m2 = mass_squared(v);
  if (m2 < Scalar(-kMassSquaredTolerance)) {
    throw UnphysicalInput("negative invariant mass squared: " + std::to_string(double(m2)));
  }
  return m2 > Scalar(0) ? std::sqrt(m2) : Scalar(0);
}

template <typename Scalar>
Scalar invariant_mass(std::span<const FourVectorT<Scalar>> vs) {
  if (vs.empty()) throw std::invalid_argument("invariant_mass: empty list");
  FourVectorT<Scalar> total = FourVectorT<Scalar>::Zero();
  for (const auto& v : vs) total += v;
  return mass(total);
}

inline double invariant_mass(std::initializer_list<FourVector> vs) {
  return invariant_mass<double>(std::span<const FourVector>(vs.begin(), vs.size()));
}

inline double invariant_mass(const std::vector<FourVector>& vs) {
  return invariant_mass<double>(std::span<const FourVector>(vs));
}

template <typename Scalar>
FourVectorT<Scalar> boost(const FourVectorT<Scalar>& v, const ThreeVectorT<Scalar>& beta) {
  const Scalar b2 = beta.squaredNorm();
  if (!(b2 < Scalar(1))) throw SuperluminalBoost("boost requires |beta| < 1");
  if (b2 == Scalar(0)) return v;
  const Scalar gamma = Scalar(1) / std::sqrt(Scalar(1) - b2);
  const Scalar bp = beta.dot(v.template tail<3>());
  const Scalar g2 = (gamma - Scalar(1)) / b2;
  FourVectorT<Scalar> out;
  out(0) = gamma * (v(0) + bp);
  out.template tail<3>() = v.template tail<3>() + (g2 * bp + gamma * v(0)) * beta;
  return out;
}

// Velocity of the frame in which `v` is at rest.
template <typename Derived>
ThreeVectorT<typename Derived::Scalar> beta_of(const Eigen::MatrixBase<Derived>& v) {
  return v.template tail<3>() / v(0);
}

// Massless four-vector from energy and polar/azimuthal angles.
inline FourVector massless(double e, double theta, double phi) {
  const double st = std::sin(theta);
  return FourVector(e, e * st * std::cos(phi), e * st * std::sin(phi), e * std::cos(theta));
}

inline FourVector from_momentum(const ThreeVector& p, double m) {
  FourVector out;
  out(0) = std::sqrt(p.squaredNorm() + m * m);
  out.tail<3>() = p;
  return out;
}

inline double polar_angle(const FourVector& v) {
  return std::atan2(std::hypot(v(1), v(2)), v(3));
}

inline double azimuth(const FourVector& v) { return std::atan2(v(2), v(1)); }

// Breakup momentum of M -> m1 m2 in the parent rest frame.
template <typename Scalar>
Scalar two_body_momentum(Scalar parent_mass, Scalar m1, Scalar m2) {
  if (parent_mass < m1 + m2) throw BelowThreshold("two-body decay below threshold");
  const Scalar s = parent_mass * parent_mass;
  const Scalar a = s - (m1 + m2) * (m1 + m2);
  const Scalar b = s - (m1 - m2) * (m1 - m2);
  const Scalar prod = a * b;
  return prod > Scalar(0) ? std::sqrt(prod) / (Scalar(2) * parent_mass) : Scalar(0);
}

ThreeVector isotropic_direction(Rng& rng);

std::pair<FourVector, FourVector> two_body_decay(double parent_mass, double m1, double m2, Rng& rng);

inline constexpr std::size_t kMaxPhaseSpaceDaughters = 8;

// Unweighted flat N-body phase space in the lab frame of `parent`.
std::vector<FourVector> n_body_phase_space(const FourVector& parent,
                                           std::span<const double> daughter_masses, Rng& rng);

class UnitAxis {
 public:
  // Throws DegenerateEvent for a zero vector.
  static UnitAxis from(const ThreeVector& v);
  static UnitAxis from(double x, double y, double z) { return from(ThreeVector(x, y, z)); }

  const ThreeVector& vector() const { return n_; }
  double x() const { return n_.x(); }
  double y() const { return n_.y(); }
  double z() const { return n_.z(); }

  // Flips the axis so that z > 0, then x > 0, then y > 0 on ties.
  UnitAxis canonical() const;

 private:
  explicit UnitAxis(const ThreeVector& n) : n_(n) {}
  ThreeVector n_;
};

struct Thrust {
  double value;
  UnitAxis axis;
};

inline constexpr std::size_t kExhaustiveThrustLimit = 12;

// T = max_n sum|p.n| / sum|p|. Exact sign-combination search for N <= 12,
// seeded iterative maximization above.
Thrust thrust(std::span<const FourVector> momenta);
Thrust thrust_exhaustive(std::span<const FourVector> momenta);
Thrust thrust_iterative(std::span<const FourVector> momenta);

}  // namespace hfcal
