#pragma once

#include "lorentz/potentials.hpp"
#include "lorentz/vec.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lorentz {

enum class DerivativeScheme { spectral, central2 };

const char* to_string(DerivativeScheme scheme);

/// A closed T-periodic curve sampled at t_i = i T / N, i = 0..N-1.
/// Invariants: N >= 8 and even, every sample finite, period > 0.
class PeriodicTrajectory {
 public:
  PeriodicTrajectory(std::vector<Vec3> samples, double period,
                     DerivativeScheme scheme = DerivativeScheme::spectral);

  static PeriodicTrajectory constant(const Vec3& point, std::size_t n, double period,
                                     DerivativeScheme scheme = DerivativeScheme::spectral);
  static PeriodicTrajectory from_function(const std::function<Vec3(double)>& curve, std::size_t n,
                                          double period,
                                          DerivativeScheme scheme = DerivativeScheme::spectral);

  std::size_t size() const { return samples_.size(); }
  double period() const { return period_; }
  double step() const { return period_ / static_cast<double>(samples_.size()); }
  double time(std::size_t i) const { return period_ * static_cast<double>(i) / static_cast<double>(samples_.size()); }
  DerivativeScheme scheme() const { return scheme_; }

  const Vec3& operator[](std::size_t i) const { return samples_[i]; }
  std::span<const Vec3> samples() const { return samples_; }

  PeriodicTrajectory with_samples(std::vector<Vec3> samples) const {
    return PeriodicTrajectory(std::move(samples), period_, scheme_);
  }

 private:
  std::vector<Vec3> samples_;
  double period_;
  DerivativeScheme scheme_;
};

/// d/dt of periodic vector samples under the given scheme.
std::vector<Vec3> differentiate(std::span<const Vec3> values, double period, DerivativeScheme scheme);

/// q-dot at the nodes.
std::vector<Vec3> derivative(const PeriodicTrajectory& q);

struct TrajectoryDecomposition {
  Vec3 mean;
  PeriodicTrajectory oscillation;
};

/// q = mean + oscillation with mean = (1/N) sum q_i.
TrajectoryDecomposition decompose(const PeriodicTrajectory& q);

struct TrajectoryNorms {
  double sup_norm = 0.0;
  double L2_norm = 0.0;
  double sup_speed = 0.0;
  double W_norm = 0.0;
};

TrajectoryNorms norms(const PeriodicTrajectory& q);

double sup_speed(const PeriodicTrajectory& q);

inline constexpr double kDefaultTolSpeed = 1e-9;

bool in_K(const PeriodicTrajectory& q, double tol_speed = kDefaultTolSpeed);

/// Default Lambda margin: 1e-6 T.
inline double default_lambda_margin(double period) { return 1e-6 * period; }

/// Smallest distance from the samples and the segment midpoints to the singular set.
double lambda_distance(const PeriodicTrajectory& q, const PotentialPair& pair);

/// True when lambda_distance exceeds dist_min (default 1e-6 T).
bool in_Lambda(const PeriodicTrajectory& q, const PotentialPair& pair, double dist_min = -1.0);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// lhs = (pi^2 / T^2) ||q~||_2^2, rhs = ||q-dot||_2^2.
InequalityCheck poincare_wirtinger_check(const PeriodicTrajectory& q, double tol_rel = 1e-12);

/// ||q~||_inf <= T for q in K. Throws PreconditionViolated outside K.
InequalityCheck tilde_sup_check(const PeriodicTrajectory& q, double tol_rel = 1e-12,
                                double tol_speed = kDefaultTolSpeed);

}  // namespace lorentz
