#include "lorentz/sampling.hpp"

#include <cmath>
#include <numbers>

namespace lorentz {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec3 random_point(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec3 p;
  for (int c = 0; c < 3; ++c) p[c] = lo[c] + (hi[c] - lo[c]) * u(rng);
  return p;
}

PeriodicTrajectory random_k_trajectory(std::uint64_t seed, std::size_t n, double period,
                                       const RandomTrajectoryOptions& options) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vec3> cos_c(options.modes), sin_c(options.modes);
  for (int k = 0; k < options.modes; ++k) {
    const double w = 1.0 / ((k + 1.0) * (k + 1.0));
    for (int c = 0; c < 3; ++c) {
      cos_c[k][c] = w * normal(rng);
      sin_c[k][c] = w * normal(rng);
    }
  }
  const Vec3 mean = random_point(rng, options.center - Vec3::Constant(options.center_spread),
                                 options.center + Vec3::Constant(options.center_spread));
  const double target_speed = options.max_speed * (1.0 - unit(rng));

  const double omega = 2.0 * std::numbers::pi / period;
  std::vector<Vec3> osc(n, Vec3::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    const double t = period * static_cast<double>(i) / static_cast<double>(n);
    for (int k = 0; k < options.modes; ++k) {
      const double arg = omega * (k + 1) * t;
      osc[i] += cos_c[k] * std::cos(arg) + sin_c[k] * std::sin(arg);
    }
  }
  const auto shape = PeriodicTrajectory(osc, period, options.scheme);
  const double speed = sup_speed(shape);
  const double scale = speed > 0.0 ? target_speed / speed : 0.0;
  for (auto& x : osc) x = mean + scale * x;
  return PeriodicTrajectory(std::move(osc), period, options.scheme);
}

}  // namespace lorentz
