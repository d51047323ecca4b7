#pragma once

#include "lorentz/action.hpp"
#include "lorentz/dynamics.hpp"
#include "lorentz/potentials.hpp"
#include "lorentz/trajectory.hpp"
#include "lorentz/witness.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lorentz {

enum class StartMode { witness, constant, random, custom };

const char* to_string(StartMode mode);
StartMode start_mode_from_string(const std::string& name);

struct MinimizeConfig {
  std::size_t grid_size = 256;
  DerivativeScheme scheme = DerivativeScheme::spectral;
  int max_iters = 3000;
  double step_init = 1.0;  // in units of the preconditioned direction
  double beta = 0.5;
  double armijo_c1 = 1e-4;
  int max_halvings = 60;
  double grad_tol = 1e-5;  // on the projected, preconditioned stationarity measure
  double speed_cap = 0.999;
  double lambda_margin = -1.0;  // negative selects 1e-6 T
  double tol_zero = 1e-12;
  double residual_tol = 1e-3;
  double speed_tol = 1e-6;
  double preconditioner_mu = -1.0;  // negative selects (2 pi / T)^2
  std::vector<std::uint64_t> multistart_seeds = {0};
  StartMode start_mode = StartMode::witness;
  Vec3 start_point = Vec3::Zero();           // constant mode
  double perturbation = 0.05;                // witness mode, seeds after the first
  std::optional<PeriodicTrajectory> custom_start;
  WitnessOptions witness{};                  // grid_size and scheme are overridden
  GridSpec rho_grid{};                       // box for the velocity bound
  bool check_periodicity = true;
  Execution exec = Execution::parallel;
};

struct IterateRecord {
  int iter = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  double sup_speed = 0.0;
  double step = 0.0;
};

struct Certification {
  bool non_constant = false;
  bool negative_action = false;
  bool el_residual_ok = false;
  bool speed_below_rho = false;
};

struct StartOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string status;  // converged, max_iters, stalled or the failure message
  double value = 0.0;
  double start_value = 0.0;
  int iterations = 0;
};

struct MinimizerResult {
  PeriodicTrajectory trajectory;
  ActionReport action_report;
  std::vector<IterateRecord> iterates;
  Certification certification;
  double rho_bound = 1.0;
  bool rho_claimed = false;
  double tilde_sup = 0.0;
  std::optional<double> periodicity_residual;
  std::vector<StartOutcome> starts;
  std::size_t chosen_start = 0;
  std::string status;
};

/// Increment-space projection onto { |q_{i+1} - q_i| / h <= rho_cap } preserving the mean.
/// Returns q unchanged (bit for bit) when it already satisfies the cap.
PeriodicTrajectory project_K(const PeriodicTrajectory& q, double rho_cap);

/// Sobolev preconditioner S = h (mu I + D^T D), applied in Fourier space. The Nyquist mode is dropped.
std::vector<Vec3> apply_preconditioner_inverse(const std::vector<Vec3>& g, double period, DerivativeScheme scheme,
                                               double mu);
std::vector<Vec3> apply_preconditioner(const std::vector<Vec3>& d, double period, DerivativeScheme scheme,
                                       double mu);

struct LineSearchResult {
  double step = 0.0;
  PeriodicTrajectory trajectory;
  double value = 0.0;
  int halvings = 0;
};

/// Armijo backtracking on I(project_K(q - eta dir)) with sufficient decrease measured by
/// <gradient, q - trial>. Trials above the speed cap or inside the Lambda margin count as +inf.
/// Throws LineSearchFailed after max_halvings.
LineSearchResult line_search(const PeriodicTrajectory& q, double value, const std::vector<Vec3>& gradient,
                             const std::vector<Vec3>& direction, const PotentialPair& pair,
                             const MinimizeConfig& config);

/// Start trajectory for one seed of the multistart.
PeriodicTrajectory make_start(const PotentialPair& pair, const MinimizeConfig& config, std::uint64_t seed);

/// Projected preconditioned descent with multistart; returns the lowest final action.
MinimizerResult minimize(const PotentialPair& pair, const MinimizeConfig& config = {});

}  // namespace lorentz
