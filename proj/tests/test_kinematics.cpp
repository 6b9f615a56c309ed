#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "hfcal/kinematics.hpp"
#include "hfcal/random.hpp"

using namespace hfcal;

namespace {

// Two-body momentum from the daughter energy in the parent frame, written
// independently of the library's Kallen-function form.
double pstar_oracle(double m, double m1, double m2) {
  const double e1 = (m * m + m1 * m1 - m2 * m2) / (2.0 * m);
  return std::sqrt(e1 * e1 - m1 * m1);
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  const ThreeVector axis = isotropic_direction(rng);
  const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

}  // namespace

TEST_CASE("invariant mass of simple systems") {
  CHECK(invariant_mass({FourVector(0.0675, 0, 0, 0.0675), FourVector(0.0675, 0, 0, -0.0675)}) ==
        doctest::Approx(0.135).epsilon(1e-12));
  CHECK(invariant_mass({FourVector(3.0, 0, 0, 3.0)}) == 0.0);
  CHECK_THROWS_AS(invariant_mass(std::vector<FourVector>{}), std::invalid_argument);
  CHECK_THROWS_AS(mass(FourVector(1.0, 0, 0, 2.0)), UnphysicalInput);
}

TEST_CASE("boost identities") {
  const double m = 1.9683;
  const ThreeVector beta(0, 0, 0.6);
  const FourVector b = hfcal::boost(FourVector(m, 0, 0, 0), beta);
  const double gamma = 1.0 / std::sqrt(1.0 - 0.36);
  CHECK(b(0) == doctest::Approx(gamma * m).epsilon(1e-14));
  CHECK(b(3) == doctest::Approx(gamma * 0.6 * m).epsilon(1e-14));
  CHECK_THROWS_AS(hfcal::boost(FourVector(1, 0, 0, 0), ThreeVector(0, 0, 1.0)), SuperluminalBoost);

  Rng rng(11);
  double worst_mass = 0.0;
  double worst_inverse = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double mv = uniform(rng, 0.0, 6.0);
    const FourVector v = from_momentum(isotropic_direction(rng) * uniform(rng, 0.0, 20.0), mv);
    const ThreeVector bv = isotropic_direction(rng) * uniform(rng, 0.0, 0.999);
    const FourVector w = hfcal::boost(v, bv);
    worst_mass = std::max(worst_mass, std::abs(mass(w) - mass(v)));
    worst_inverse = std::max(worst_inverse, (hfcal::boost(w, ThreeVector(-bv)) - v).cwiseAbs().maxCoeff());
  }
  CHECK(worst_mass < 1e-9);
  CHECK(worst_inverse < 1e-9);
}

TEST_CASE("two-body momentum") {
  const double p = two_body_momentum(5.3669, 1.9683, 0.13957);
  CHECK(std::abs(p - pstar_oracle(5.3669, 1.9683, 0.13957)) < 1e-6);
  CHECK(std::abs(p - 2.3201) < 5e-5);
  CHECK(two_body_momentum(2.0, 1.0, 1.0) == 0.0);
  CHECK(two_body_momentum(2.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(two_body_momentum(1.0, 0.6, 0.6), BelowThreshold);

  Rng rng(3);
  const auto [a, b] = two_body_decay(5.3669, 1.9683, 0.13957, rng);
  CHECK(a.tail<3>().norm() == doctest::Approx(p).epsilon(1e-12));
  CHECK((a + b - FourVector(5.3669, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("n-body phase space with two daughters matches the two-body momentum") {
  Rng rng(5);
  const std::vector<double> masses{1.9683, 0.13957};
  const auto d = n_body_phase_space(FourVector(5.3669, 0, 0, 0), masses, rng);
  REQUIRE(d.size() == 2);
  CHECK(d[0].tail<3>().norm() == doctest::Approx(pstar_oracle(5.3669, 1.9683, 0.13957)).epsilon(1e-12));
}

TEST_CASE("n-body phase space closes four-momentum") {
  Rng rng(17);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 3 + i % 4;
    std::vector<double> masses(static_cast<std::size_t>(n));
    for (auto& m : masses) m = uniform(rng, 0.0, 0.6);
    const FourVector parent = from_momentum(isotropic_direction(rng) * uniform(rng, 0.0, 30.0), 5.2797);
    const auto d = n_body_phase_space(parent, masses, rng);
    FourVector sum = FourVector::Zero();
    for (std::size_t k = 0; k < d.size(); ++k) {
      sum += d[k];
      CHECK(mass(d[k]) == doctest::Approx(masses[k]).epsilon(1e-6));
    }
    worst = std::max(worst, (sum - parent).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("three massless daughters populate the Dalitz plot uniformly") {
  // Grid of 10x10 cells over (s12, s23) in [0, M^2]^2. For massless daughters
  // the allowed region is the triangle s12 + s23 <= M^2: cells below the
  // diagonal are fully inside, diagonal cells are half inside.
  const double m = 1.0;
  const int n_cells = 10;
  const int n_events = 100000;
  std::vector<double> counts(n_cells * n_cells, 0.0);
  Rng rng(2024);
  const std::vector<double> masses{0.0, 0.0, 0.0};
  for (int i = 0; i < n_events; ++i) {
    const auto d = n_body_phase_space(FourVector(m, 0, 0, 0), masses, rng);
    const double s12 = mass_squared(FourVector(d[0] + d[1]));
    const double s23 = mass_squared(FourVector(d[1] + d[2]));
    const int a = std::min(n_cells - 1, static_cast<int>(s12 / (m * m) * n_cells));
    const int b = std::min(n_cells - 1, static_cast<int>(s23 / (m * m) * n_cells));
    counts[static_cast<std::size_t>(a * n_cells + b)] += 1.0;
  }
  double chi2 = 0.0;
  int n_bins = 0;
  const double full_cells = n_cells * n_cells / 2.0;
  for (int a = 0; a < n_cells; ++a) {
    for (int b = 0; b < n_cells; ++b) {
      const double o = counts[static_cast<std::size_t>(a * n_cells + b)];
      if (a + b > n_cells - 1) {
        CHECK(o == 0.0);
        continue;
      }
      const double area = a + b == n_cells - 1 ? 0.5 : 1.0;
      const double e = n_events * area / full_cells;
      chi2 += (o - e) * (o - e) / e;
      ++n_bins;
    }
  }
  const double p = boost::math::gamma_q(0.5 * (n_bins - 1), 0.5 * chi2);
  INFO("chi2 = " << chi2 << " over " << n_bins << " cells, p = " << p);
  CHECK(p > 0.01);
}

TEST_CASE("thrust of standard configurations") {
  SUBCASE("pencil") {
    const std::vector<FourVector> ps{FourVector(5, 0, 0, 5), FourVector(5, 0, 0, -5)};
    const Thrust t = thrust(ps);
    CHECK(t.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(t.axis.z()) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single particle") {
    const std::vector<FourVector> ps{FourVector(3, 1, 2, 2)};
    CHECK(thrust(ps).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("mercedes") {
    std::vector<FourVector> ps;
    for (int k = 0; k < 3; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 3.0;
      ps.emplace_back(1.0, std::cos(a), std::sin(a), 0.0);
    }
    CHECK(std::abs(thrust(ps).value - 2.0 / 3.0) < 1e-6);
    CHECK(std::abs(thrust_exhaustive(ps).value - 2.0 / 3.0) < 1e-6);
  }
  SUBCASE("empty event") {
    CHECK_THROWS_AS(thrust(std::vector<FourVector>{}), DegenerateEvent);
  }
}

TEST_CASE("thrust is rotation invariant and the iterative maximizer agrees with the exhaustive one") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 11;
    std::vector<FourVector> ps;
    for (int k = 0; k < n; ++k) ps.push_back(from_momentum(isotropic_direction(rng) * uniform(rng, 0.1, 10.0), 0.0));
    const Thrust exhaustive = thrust_exhaustive(ps);
    CHECK(std::abs(thrust_iterative(ps).value - exhaustive.value) < 1e-6);

    const Eigen::Matrix3d r = random_rotation(rng);
    std::vector<FourVector> rotated;
    for (const auto& p : ps) {
      FourVector q = p;
      q.tail<3>() = r * p.tail<3>();
      rotated.push_back(q);
    }
    const Thrust t_rot = thrust(rotated);
    CHECK(std::abs(t_rot.value - exhaustive.value) < 1e-6);
    CHECK(std::abs(std::abs(t_rot.axis.vector().dot(r * exhaustive.axis.vector())) - 1.0) < 1e-6);
  }
}
