#pragma once

#include "lorentz/potentials.hpp"
#include "lorentz/trajectory.hpp"

#include <string>
#include <vector>

namespace lorentz {

/// Position and relativistic momentum p = v / sqrt(1 - |v|^2).
struct PhaseState {
  Vec3 position = Vec3::Zero();
  Vec3 momentum = Vec3::Zero();
  double time = 0.0;

  Vec3 velocity() const { return momentum / std::sqrt(1.0 + momentum.squaredNorm()); }
};

struct PhaseRate {
  Vec3 dq = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

/// dq = p / sqrt(1 + |p|^2), dp = -grad Phi - dA/dt + dq x curl A.
PhaseRate hamiltonian_rhs(const PotentialPair& pair, const PhaseState& state);

/// Fixed-step RK4 over [t0, t_end]; returns steps + 1 states including the start.
/// Throws SingularEncounterError carrying the time of closest approach.
std::vector<PhaseState> integrate(const PotentialPair& pair, const PhaseState& start, double t_end,
                                  std::size_t steps);

/// T C / sqrt(1 + T^2 C^2).
double rho_from_C(double C, double period);

struct VelocityBound {
  double rho = 1.0;
  bool claimed = false;  // false when the singular set is non-empty
  std::string note;
  LipschitzReport lipschitz;
  double rho_det = 1.0;  // the same formula with C_det
};

VelocityBound velocity_bound(const PotentialPair& pair, const GridSpec& grid,
                             Execution exec = Execution::parallel);

struct PeriodicityReport {
  double residual = 0.0;
  std::size_t steps = 0;
  PhaseState start;
  PhaseState end;
};

/// Integrates from (q(0), momentum of q'(0)) over one period with steps_per_node * N
/// steps and returns (|q_end - q_0| + |p_end - p_0|) / (1 + |p_0|).
PeriodicityReport periodicity_residual(const PotentialPair& pair, const PeriodicTrajectory& q,
                                       std::size_t steps_per_node = 64);

}  // namespace lorentz
