#pragma once

#include "lorentz/potentials.hpp"
#include "lorentz/trajectory.hpp"

#include <optional>
#include <vector>

namespace lorentz {

/// A real number or +infinity, with the infinity kept as an explicit flag.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal plus_infinity() { return {0.0, true}; }
  bool operator<(const ExtendedReal& o) const {
    if (infinite) return false;
    return o.infinite || value < o.value;
  }
};

struct ActionOptions {
  double tol_speed = kDefaultTolSpeed;
  double lambda_margin = -1.0;  // negative selects 1e-6 T
  double rho_cap = 0.999;       // interior cap for the gradient and the EL residual
};

struct ActionReport {
  ExtendedReal psi;
  std::optional<double> f_term;  // absent outside Lambda
  ExtendedReal total;
  bool in_K = false;
  bool in_Lambda = false;
  double sup_speed = 0.0;
  std::optional<double> el_residual_sup;
};

/// Relativistic kinetic term h * sum (1 - sqrt(1 - |v_i|^2)); +inf outside K.
ExtendedReal psi(const PeriodicTrajectory& q, double tol_speed = kDefaultTolSpeed);

/// h * sum (v_i . A(t_i, q_i) - Phi(t_i, q_i)). Throws SingularTrajectory outside Lambda.
double f_term(const PeriodicTrajectory& q, const PotentialPair& pair, double lambda_margin = -1.0);

/// I = Psi + F, +inf outside K or Lambda. The EL residual is left empty.
ActionReport action(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options = {});

ExtendedReal action_value(const PeriodicTrajectory& q, const PotentialPair& pair,
                          const ActionOptions& options = {});

/// Exact gradient of the discrete action with respect to every sample.
/// Throws BoundaryOfK above rho_cap and SingularTrajectory outside Lambda.
std::vector<Vec3> grad_action(const PeriodicTrajectory& q, const PotentialPair& pair,
                              const ActionOptions& options = {});

/// max_i | D(p)_i - E(t_i, q_i) - v_i x B(t_i, q_i) | with p = v / sqrt(1 - |v|^2).
double el_residual(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options = {});

/// Action report with the EL residual filled in when the trajectory is in the interior.
ActionReport verify(const PeriodicTrajectory& q, const PotentialPair& pair, const ActionOptions& options = {});

/// -T * (max |A| + max(Phi, 0)) over the grid. Since Psi >= 0 and |v| <= 1 this
/// bounds I from below for trajectories in K that stay inside the grid box, up
/// to the grid resolution. Points inside the singular set are skipped.
double action_lower_bound(const PotentialPair& pair, const GridSpec& grid, Execution exec = Execution::parallel);

}  // namespace lorentz
