#pragma once

#include "lorentz/trajectory.hpp"

#include <cstdint>
#include <random>

namespace lorentz {

/// SplitMix64 finalizer; derives independent per-index seeds from one base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

struct RandomTrajectoryOptions {
  int modes = 6;             // Fourier modes 1..modes with coefficients decaying as 1/k^2
  double max_speed = 0.95;   // spectral sup speed is drawn uniformly from (0, max_speed]
  Vec3 center = Vec3::Zero();
  double center_spread = 0.0;  // mean drawn uniformly from center + [-spread, spread]^3
  DerivativeScheme scheme = DerivativeScheme::spectral;
};

/// Band-limited random closed curve in the interior of K.
PeriodicTrajectory random_k_trajectory(std::uint64_t seed, std::size_t n, double period,
                                       const RandomTrajectoryOptions& options = {});

/// Uniform point in the axis-aligned box [lo, hi].
Vec3 random_point(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi);

}  // namespace lorentz
