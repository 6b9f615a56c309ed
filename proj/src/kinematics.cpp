#include "hfcal/kinematics.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <numeric>

namespace hfcal {

ThreeVector isotropic_direction(Rng& rng) {
  const double cos_theta = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, -std::numbers::pi, std::numbers::pi);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

std::pair<FourVector, FourVector> two_body_decay(double parent_mass, double m1, double m2, Rng& rng) {
  const double p = two_body_momentum(parent_mass, m1, m2);
  const ThreeVector dir = isotropic_direction(rng);
  return {from_momentum(p * dir, m1), from_momentum(-p * dir, m2)};
}

std::vector<FourVector> n_body_phase_space(const FourVector& parent,
                                           std::span<const double> daughter_masses, Rng& rng) {
  const std::size_t n = daughter_masses.size();
  if (n < 2 || n > kMaxPhaseSpaceDaughters) {
    throw std::invalid_argument("n_body_phase_space: daughter count must be in [2, 8], got " +
                                std::to_string(n));
  }
  const double parent_mass = mass(parent);
  const double mass_sum = std::accumulate(daughter_masses.begin(), daughter_masses.end(), 0.0);
  if (parent_mass < mass_sum) throw BelowThreshold("n-body decay below threshold");
  const double kinetic = parent_mass - mass_sum;

  // Upper bound of the product of breakup momenta (GENBOD construction).
  double max_weight = 1.0;
  {
    double lo = 0.0;
    double hi = kinetic + daughter_masses[0];
    for (std::size_t k = 1; k < n; ++k) {
      lo += daughter_masses[k - 1];
      hi += daughter_masses[k];
      max_weight *= two_body_momentum(hi, lo, daughter_masses[k]);
    }
  }

  std::array<double, kMaxPhaseSpaceDaughters> cumulative{};
  std::array<double, kMaxPhaseSpaceDaughters> breakup{};
  std::array<double, kMaxPhaseSpaceDaughters> r{};
  while (true) {
    r[0] = 0.0;
    r[n - 1] = 1.0;
    for (std::size_t k = 1; k + 1 < n; ++k) r[k] = uniform01(rng);
    std::sort(r.begin() + 1, r.begin() + static_cast<std::ptrdiff_t>(n - 1));
    double running = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      running += daughter_masses[k];
      cumulative[k] = running + r[k] * kinetic;
    }
    double weight = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
      breakup[k] = two_body_momentum(cumulative[k], cumulative[k - 1], daughter_masses[k]);
      weight *= breakup[k];
    }
    if (max_weight <= 0.0 || uniform01(rng) * max_weight <= weight) break;
  }

  std::vector<FourVector> out(n);
  {
    const ThreeVector dir = isotropic_direction(rng);
    out[0] = from_momentum(breakup[1] * dir, daughter_masses[0]);
    out[1] = from_momentum(-breakup[1] * dir, daughter_masses[1]);
  }
  for (std::size_t k = 2; k < n; ++k) {
    // Frame of the first k+1 daughters: the composite of the first k recoils against daughter k.
    const ThreeVector dir = isotropic_direction(rng);
    const double composite_energy = std::hypot(breakup[k], cumulative[k - 1]);
    const ThreeVector beta = (breakup[k] / composite_energy) * dir;
    for (std::size_t j = 0; j < k; ++j) out[j] = boost(out[j], beta);
    out[k] = from_momentum(-breakup[k] * dir, daughter_masses[k]);
  }
  const ThreeVector parent_beta = beta_of(parent);
  for (auto& v : out) v = boost(v, parent_beta);
  return out;
}

UnitAxis UnitAxis::from(const ThreeVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateEvent("axis from zero vector");
  return UnitAxis(v / norm);
}

UnitAxis UnitAxis::canonical() const {
  const ThreeVector& n = n_;
  bool flip = false;
  if (n.z() != 0.0) {
    flip = n.z() < 0.0;
  } else if (n.x() != 0.0) {
    flip = n.x() < 0.0;
  } else {
    flip = n.y() < 0.0;
  }
  return flip ? UnitAxis(-n) : *this;
}

namespace {

struct MomentumSet {
  std::vector<ThreeVector> p;
  double norm_sum = 0.0;
};

MomentumSet collect(std::span<const FourVector> momenta) {
  MomentumSet set;
  for (const auto& v : momenta) {
    ThreeVector p = v.tail<3>();
    const double n = p.norm();
    if (n > 0.0) {
      set.p.push_back(p);
      set.norm_sum += n;
    }
  }
  if (set.p.empty()) throw DegenerateEvent("thrust of an empty or all-zero event");
  return set;
}

double projected_sum(const MomentumSet& set, const ThreeVector& axis) {
  double s = 0.0;
  for (const auto& p : set.p) s += std::abs(p.dot(axis));
  return s;
}

Thrust exhaustive(const MomentumSet& set) {
  const std::size_t n = set.p.size();
  const std::uint32_t combos = 1u << (n - 1);
  ThreeVector best = set.p[0];
  double best_norm = -1.0;
  for (std::uint32_t mask = 0; mask < combos; ++mask) {
    ThreeVector sum = set.p[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (mask & (1u << (i - 1))) {
        sum -= set.p[i];
      } else {
        sum += set.p[i];
      }
    }
    const double norm = sum.norm();
    if (norm > best_norm) {
      best_norm = norm;
      best = sum;
    }
  }
  const UnitAxis axis = UnitAxis::from(best).canonical();
  return {projected_sum(set, axis.vector()) / set.norm_sum, axis};
}

constexpr std::size_t kPairSeedLimit = 40;

Thrust iterative(const MomentumSet& set) {
  const std::size_t n = set.p.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return set.p[a].norm() > set.p[b].norm(); });

  std::vector<ThreeVector> seeds;
  const std::size_t lead = std::min<std::size_t>(n, 4);
  for (std::uint32_t mask = 0; mask < (1u << (lead - 1)); ++mask) {
    ThreeVector s = set.p[order[0]];
    for (std::size_t i = 1; i < lead; ++i) {
      s += (mask & (1u << (i - 1))) ? ThreeVector(-set.p[order[i]]) : set.p[order[i]];
    }
    seeds.push_back(s);
  }
  for (const auto& p : set.p) seeds.push_back(p);
  // The optimal split is bounded by a plane through two momenta; seeding from
  // every such plane makes the maximizer exact for modest multiplicities.
  if (n <= kPairSeedLimit) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const ThreeVector normal = set.p[i].cross(set.p[j]);
        if (!(normal.norm() > 0.0)) continue;
        ThreeVector base = ThreeVector::Zero();
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i && k != j) base += set.p[k].dot(normal) >= 0.0 ? set.p[k] : ThreeVector(-set.p[k]);
        }
        for (int signs = 0; signs < 4; ++signs) {
          const ThreeVector a = (signs & 1) ? ThreeVector(-set.p[i]) : set.p[i];
          const ThreeVector b = (signs & 2) ? ThreeVector(-set.p[j]) : set.p[j];
          seeds.push_back(base + a + b);
        }
      }
    }
  }

  double best_value = -1.0;
  ThreeVector best_axis = set.p[order[0]];
  for (const auto& seed : seeds) {
    if (!(seed.norm() > 0.0)) continue;
    ThreeVector axis = seed.normalized();
    for (int iter = 0; iter < 100; ++iter) {
      ThreeVector next = ThreeVector::Zero();
      for (const auto& p : set.p) next += p.dot(axis) >= 0.0 ? p : ThreeVector(-p);
      if (!(next.norm() > 0.0)) break;
      next.normalize();
      const bool stable = (next - axis).norm() < 1e-15;
      axis = next;
      if (stable) break;
    }
    const double value = projected_sum(set, axis);
    if (value > best_value) {
      best_value = value;
      best_axis = axis;
    }
  }
  const UnitAxis axis = UnitAxis::from(best_axis).canonical();
  return {projected_sum(set, axis.vector()) / set.norm_sum, axis};
}

}  // namespace

Thrust thrust_exhaustive(std::span<const FourVector> momenta) {
  const MomentumSet set = collect(momenta);
  if (set.p.size() > 24) throw std::invalid_argument("exhaustive thrust limited to 24 particles");
  return exhaustive(set);
}

Thrust thrust_iterative(std::span<const FourVector> momenta) { return iterative(collect(momenta)); }

Thrust thrust(std::span<const FourVector> momenta) {
  const MomentumSet set = collect(momenta);
  return set.p.size() <= kExhaustiveThrustLimit ? exhaustive(set) : iterative(set);
}

}  // namespace hfcal
