#include "lorentz/trajectory.hpp"

#include "lorentz/error.hpp"
#include "lorentz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lorentz {

const char* to_string(DerivativeScheme scheme) {
  return scheme == DerivativeScheme::spectral ? "spectral" : "central2";
}

PeriodicTrajectory::PeriodicTrajectory(std::vector<Vec3> samples, double period, DerivativeScheme scheme)
    : samples_(std::move(samples)), period_(period), scheme_(scheme) {
  if (samples_.size() < 8 || samples_.size() % 2 != 0)
    throw Error(ErrorKind::PreconditionViolated,
                "trajectory needs an even number of samples >= 8, got " + std::to_string(samples_.size()));
  if (!(period_ > 0.0) || !std::isfinite(period_))
    throw Error(ErrorKind::PreconditionViolated, "trajectory period must be positive and finite");
  for (const auto& s : samples_)
    if (!s.allFinite()) throw Error(ErrorKind::NonFinite, "trajectory sample is not finite");
}

PeriodicTrajectory PeriodicTrajectory::constant(const Vec3& point, std::size_t n, double period,
                                                DerivativeScheme scheme) {
  return PeriodicTrajectory(std::vector<Vec3>(n, point), period, scheme);
}

PeriodicTrajectory PeriodicTrajectory::from_function(const std::function<Vec3(double)>& curve, std::size_t n,
                                                     double period, DerivativeScheme scheme) {
  std::vector<Vec3> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = curve(period * static_cast<double>(i) / static_cast<double>(n));
  return PeriodicTrajectory(std::move(s), period, scheme);
}

std::vector<Vec3> differentiate(std::span<const Vec3> values, double period, DerivativeScheme scheme) {
  const std::size_t n = values.size();
  std::vector<Vec3> out(n);
  if (scheme == DerivativeScheme::central2) {
    const double inv = static_cast<double>(n) / (2.0 * period);
    for (std::size_t i = 0; i < n; ++i) out[i] = (values[(i + 1) % n] - values[(i + n - 1) % n]) * inv;
    return out;
  }
  std::vector<double> coord(n), d(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) coord[i] = values[i][c];
    spectral::derivative(coord, d, period);
    for (std::size_t i = 0; i < n; ++i) out[i][c] = d[i];
  }
  return out;
}

std::vector<Vec3> derivative(const PeriodicTrajectory& q) {
  return differentiate(q.samples(), q.period(), q.scheme());
}

TrajectoryDecomposition decompose(const PeriodicTrajectory& q) {
  Vec3 mean = Vec3::Zero();
  for (const auto& s : q.samples()) mean += s;
  mean /= static_cast<double>(q.size());
  std::vector<Vec3> osc(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) osc[i] = q[i] - mean;
  return {mean, q.with_samples(std::move(osc))};
}

double sup_speed(const PeriodicTrajectory& q) {
  double s = 0.0;
  for (const auto& v : derivative(q)) s = std::max(s, v.norm());
  return s;
}

TrajectoryNorms norms(const PeriodicTrajectory& q) {
  TrajectoryNorms n;
  double sq = 0.0;
  for (const auto& s : q.samples()) {
    n.sup_norm = std::max(n.sup_norm, s.norm());
    sq += s.squaredNorm();
  }
  n.L2_norm = std::sqrt(q.step() * sq);
  n.sup_speed = sup_speed(q);
  n.W_norm = n.sup_norm + n.sup_speed;
  return n;
}

bool in_K(const PeriodicTrajectory& q, double tol_speed) { return sup_speed(q) <= 1.0 + tol_speed; }

double lambda_distance(const PeriodicTrajectory& q, const PotentialPair& pair) {
  if (pair.singular_set.empty()) return std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    d = std::min(d, pair.distance_to_singular_set(q[i]));
    d = std::min(d, pair.distance_to_singular_set(0.5 * (q[i] + q[(i + 1) % n])));
  }
  return d;
}

bool in_Lambda(const PeriodicTrajectory& q, const PotentialPair& pair, double dist_min) {
  if (dist_min < 0.0) dist_min = default_lambda_margin(q.period());
  return lambda_distance(q, pair) > dist_min;
}

InequalityCheck poincare_wirtinger_check(const PeriodicTrajectory& q, double tol_rel) {
  const auto parts = decompose(q);
  const double h = q.step();
  double osc = 0.0;
  for (const auto& s : parts.oscillation.samples()) osc += s.squaredNorm();
  double vel = 0.0;
  for (const auto& v : derivative(q)) vel += v.squaredNorm();
  const double T = q.period();
  InequalityCheck c;
  c.lhs = std::numbers::pi * std::numbers::pi / (T * T) * h * osc;
  c.rhs = h * vel;
  c.ok = c.lhs <= c.rhs * (1.0 + tol_rel);
  return c;
}

InequalityCheck tilde_sup_check(const PeriodicTrajectory& q, double tol_rel, double tol_speed) {
  if (!in_K(q, tol_speed))
    throw Error(ErrorKind::PreconditionViolated, "tilde_sup_check requires a trajectory in K");
  const auto parts = decompose(q);
  InequalityCheck c;
  for (const auto& s : parts.oscillation.samples()) c.lhs = std::max(c.lhs, s.norm());
  c.rhs = q.period();
  c.ok = c.lhs <= c.rhs * (1.0 + tol_rel);
  return c;
}

}  // namespace lorentz
