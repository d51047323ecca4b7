#include "lorentz/dynamics.hpp"

#include "lorentz/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lorentz {

PhaseRate hamiltonian_rhs(const PotentialPair& pair, const PhaseState& state) {
  const auto d = derivatives(pair, state.time, state.position);
  PhaseRate r;
  r.dq = state.velocity();
  r.dp = -d.grad_Phi - d.dt_A + r.dq.cross(curl_from_jacobian(d.jacobian_A));
  return r;
}

std::vector<PhaseState> integrate(const PotentialPair& pair, const PhaseState& start, double t_end,
                                  std::size_t steps) {
  if (steps == 0) throw Error(ErrorKind::PreconditionViolated, "integrate needs at least one step");
  const double dt = (t_end - start.time) / static_cast<double>(steps);
  std::vector<PhaseState> out;
  out.reserve(steps + 1);
  out.push_back(start);

  double closest = std::numeric_limits<double>::infinity();
  double closest_time = start.time;
  auto track = [&](const PhaseState& s) {
    const double d = pair.distance_to_singular_set(s.position);
    if (d < closest) {
      closest = d;
      closest_time = s.time;
    }
  };
  auto encounter = [&](const std::string& why) {
    std::ostringstream os;
    os << "orbit hit the singular set (" << why << "); closest approach " << closest << " at t = " << closest_time;
    return SingularEncounterError(os.str(), closest_time);
  };
  auto shifted = [](const PhaseState& s, const PhaseRate& k, double a) {
    return PhaseState{s.position + a * k.dq, s.momentum + a * k.dp, s.time + a};
  };

  track(start);
  PhaseState s = start;
  for (std::size_t i = 0; i < steps; ++i) {
    PhaseRate k1, k2, k3, k4;
    try {
      k1 = hamiltonian_rhs(pair, s);
      const auto s2 = shifted(s, k1, 0.5 * dt);
      track(s2);
      k2 = hamiltonian_rhs(pair, s2);
      const auto s3 = shifted(s, k2, 0.5 * dt);
      track(s3);
      k3 = hamiltonian_rhs(pair, s3);
      const auto s4 = shifted(s, k3, dt);
      track(s4);
      k4 = hamiltonian_rhs(pair, s4);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SingularPoint) throw encounter(e.what());
      throw;
    }
    s.position += dt / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    s.momentum += dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
    s.time = start.time + dt * static_cast<double>(i + 1);
    if (!s.position.allFinite() || !s.momentum.allFinite())
      throw Error(ErrorKind::NonFinite, "orbit state became non-finite at t = " + fmt(s.time));
    if (!(s.velocity().norm() < 1.0))
      throw Error(ErrorKind::NonFinite, "recovered speed reached 1 at t = " + fmt(s.time));
    track(s);
    if (closest <= 0.0) throw encounter("state inside a singular ball");
    out.push_back(s);
  }
  return out;
}

double rho_from_C(double C, double period) {
  const double tc = period * C;
  return tc / std::sqrt(1.0 + tc * tc);
}

VelocityBound velocity_bound(const PotentialPair& pair, const GridSpec& grid, Execution exec) {
  VelocityBound out;
  if (!pair.singular_set.empty()) {
    out.note = "no bound claimed: the singular set is non-empty";
    return out;
  }
  out.lipschitz = lipschitz_and_C(pair, grid, exec);
  out.rho = rho_from_C(out.lipschitz.C, pair.period);
  out.rho_det = rho_from_C(out.lipschitz.C_det, pair.period);
  out.claimed = true;
  out.note = "C uses the operator norm of grad A";
  return out;
}

PeriodicityReport periodicity_residual(const PotentialPair& pair, const PeriodicTrajectory& q,
                                       std::size_t steps_per_node) {
  const auto v = derivative(q);
  const double s = v[0].norm();
  if (!(s < 1.0)) throw Error(ErrorKind::BoundaryOfK, "initial speed is not below 1");
  if (!in_Lambda(q, pair)) throw Error(ErrorKind::SingularTrajectory, "trajectory leaves the Lambda margin");
  PeriodicityReport r;
  r.start = PhaseState{q[0], v[0] / std::sqrt(1.0 - s * s), 0.0};
  r.steps = steps_per_node * q.size();
  const auto orbit = integrate(pair, r.start, q.period(), r.steps);
  r.end = orbit.back();
  r.residual = ((r.end.position - r.start.position).norm() + (r.end.momentum - r.start.momentum).norm()) /
               (1.0 + r.start.momentum.norm());
  return r;
}

}  // namespace lorentz
