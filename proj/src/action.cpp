#include "lorentz/action.hpp"

#include "lorentz/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lorentz {

namespace {

double margin_for(const PeriodicTrajectory& q, double lambda_margin) {
  return lambda_margin < 0.0 ? default_lambda_margin(q.period()) : lambda_margin;
}

double sup_norm(const std::vector<Vec3>& v) {
  double s = 0.0;
  for (const auto& x : v) s = std::max(s, x.norm());
  return s;
}

void require_interior(const PeriodicTrajectory& q, const PotentialPair& pair, const std::vector<Vec3>& velocity,
                      const ActionOptions& options) {
  const double speed = sup_norm(velocity);
  if (speed > options.rho_cap)
    throw Error(ErrorKind::BoundaryOfK,
                "sup speed " + fmt(speed) + " exceeds the interior cap " + fmt(options.rho_cap));
  if (!in_Lambda(q, pair, margin_for(q, options.lambda_margin)))
    throw Error(ErrorKind::SingularTrajectory, "trajectory is within the Lambda margin of the singular set");
}

std::vector<Vec3> momenta(const std::vector<Vec3>& velocity) {
  std::vector<Vec3> p(velocity.size());
  for (std::size_t i = 0; i < velocity.size(); ++i)
    p[i] = velocity[i] / std::sqrt(1.0 - velocity[i].squaredNorm());
  return p;
}

double psi_of(const std::vector<Vec3>& velocity, double h) {
  double sum = 0.0;
  for (const auto& v : velocity) sum += 1.0 - std::sqrt(std::max(0.0, 1.0 - v.squaredNorm()));
  return h * sum;
}

double f_of(const PeriodicTrajectory& q, const PotentialPair& pair, const std::vector<Vec3>& velocity) {
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double t = q.time(i);
    sum += velocity[i].dot(pair.A(t, q[i])) - pair.Phi(t, q[i]);
  }
  return q.step() * sum;
}

}  // namespace

ExtendedReal psi(const PeriodicTrajectory& q, double tol_speed) {
  const auto v = derivative(q);
  if (sup_norm(v) > 1.0 + tol_speed) return ExtendedReal::plus_infinity();
  return {psi_of(v, q.step()), false};
}

double f_term(const PeriodicTrajectory& q, const PotentialPair& pair, double lambda_margin) {
  if (!in_Lambda(q, pair, margin_for(q, lambda_margin)))
    throw Error(ErrorKind::SingularTrajectory, "trajectory is within the Lambda margin of the singular set");
  return f_of(q, pair, derivative(q));
}

ActionReport action(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options) {
  ActionReport r;
  const auto v = derivative(q);
  r.sup_speed = sup_norm(v);
  r.in_K = r.sup_speed <= 1.0 + options.tol_speed;
  r.in_Lambda = in_Lambda(q, pair, margin_for(q, options.lambda_margin));
  r.psi = r.in_K ? ExtendedReal{psi_of(v, q.step()), false} : ExtendedReal::plus_infinity();
  if (r.in_Lambda) r.f_term = f_of(q, pair, v);
  if (r.in_K && r.in_Lambda) {
    r.total = {r.psi.value + *r.f_term, false};
  } else {
    r.total = ExtendedReal::plus_infinity();
  }
  return r;
}

ExtendedReal action_value(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options) {
  const auto v = derivative(q);
  if (sup_norm(v) > 1.0 + options.tol_speed) return ExtendedReal::plus_infinity();
  if (!in_Lambda(q, pair, margin_for(q, options.lambda_margin))) return ExtendedReal::plus_infinity();
  return {psi_of(v, q.step()) + f_of(q, pair, v), false};
}

std::vector<Vec3> grad_action(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options) {
  const auto v = derivative(q);
  require_interior(q, pair, v, options);
  const std::size_t n = q.size();

  std::vector<Vec3> a(n), jt_v(n), grad_phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = derivatives(pair, q.time(i), q[i]);
    a[i] = d.A;
    jt_v[i] = d.jacobian_A.transpose() * v[i];
    grad_phi[i] = d.grad_Phi;
  }
  // Both schemes are skew-symmetric, so the adjoint of D is -D.
  const auto dp = differentiate(momenta(v), q.period(), q.scheme());
  const auto da = differentiate(a, q.period(), q.scheme());

  const double h = q.step();
  std::vector<Vec3> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = h * (-dp[i] - da[i] + jt_v[i] - grad_phi[i]);
  return g;
}

double el_residual(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options) {
  const auto v = derivative(q);
  require_interior(q, pair, v, options);
  const auto dp = differentiate(momenta(v), q.period(), q.scheme());
  double worst = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto f = eval_fields(pair, q.time(i), q[i]);
    worst = std::max(worst, (dp[i] - f.electric - v[i].cross(f.magnetic)).norm());
  }
  return worst;
}

ActionReport verify(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options) {
  auto r = action(q, pair, options);
  if (r.in_Lambda && r.sup_speed <= options.rho_cap) r.el_residual_sup = el_residual(q, pair, options);
  return r;
}

double action_lower_bound(const PotentialPair& pair, const GridSpec& grid, Execution exec) {
  const int nodes = std::max(grid.time_nodes, 1);
  const double worst = max_over_indices(
      grid.spatial_count(),
      [&](std::size_t i) {
        const Vec3 x = grid.point(i);
        if (pair.singular_ball_containing(x)) return 0.0;
        double m = 0.0;
        for (int j = 0; j < nodes; ++j) {
          const double t = pair.period * j / nodes;
          m = std::max(m, pair.A(t, x).norm() + std::max(pair.Phi(t, x), 0.0));
        }
        return m;
      },
      exec);
  return -pair.period * std::max(worst, 0.0);
}

}  // namespace lorentz
