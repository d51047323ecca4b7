#pragma once

#include "lorentz/action.hpp"
#include "lorentz/potentials.hpp"
#include "lorentz/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lorentz {

enum class WitnessMode { phi_zero, theorem2, theorem3_flow };

const char* to_string(WitnessMode mode);

struct WitnessOptions {
  std::size_t grid_size = 1024;
  DerivativeScheme scheme = DerivativeScheme::spectral;
  GridSpec candidates{};       // base-point scan, [-4,4]^3 with 21 points per axis
  int scan_time_nodes = 64;    // time nodes for ||A~(., b)||_2 during the scan
  int lipschitz_points = 21;   // per axis, on the box around b used for M
  int lipschitz_time_nodes = 32;
  double tol_zero = 1e-12;
  double tol_quad = 1e-6;
  double epsilon_fraction = 0.5;  // fraction of the threshold actually used
  Execution exec = Execution::parallel;
};

/// ||A~(., b)||_2^2 = h sum_i |A(t_i, b) - mean|^2 on `nodes` uniform nodes.
double tilde_A_L2_sq(const PotentialPair& pair, const Vec3& b, int nodes);

/// Candidate with the largest ||A~(., b)||_2 above tol_zero. Ties go to the
/// smaller |b|, then to lexicographic order. Candidates inside singular balls are skipped.
Vec3 find_base_point(const PotentialPair& pair, const std::vector<Vec3>& candidates, double tol_zero = 1e-12,
                     int time_nodes = 64, Execution exec = Execution::parallel);

struct GCurve {
  PeriodicTrajectory g;          // g(0) = 0
  std::vector<Vec3> g_dot;       // A~(t_i, b), zero mean over the nodes
  double g_dot_L2_sq = 0.0;
  double g_dot_sup = 0.0;
  double g_tilde_sup = 0.0;
};

/// Primitive of A~(., b) on N nodes. Spectral scheme: exact primitive of the
/// interpolant; central2: cumulative trapezoid. Throws DegenerateOscillation when A~ vanishes.
GCurve build_g(const PotentialPair& pair, const Vec3& b, std::size_t n,
               DerivativeScheme scheme = DerivativeScheme::spectral, double tol_zero = 1e-12);

/// Open upper bound for epsilon: pi/(pi + M T) or 1/(3 + M T / pi).
double epsilon_threshold(double M, double period, WitnessMode mode);

/// p_i = b - epsilon * g~(t_i). Throws SpeedCapExceeded when epsilon sup|g'| > 1.
PeriodicTrajectory witness_trajectory(const Vec3& b, const GCurve& g, double epsilon);

struct WitnessCertificate {
  WitnessMode mode = WitnessMode::phi_zero;
  Vec3 base_point = Vec3::Zero();
  double epsilon = 0.0;
  double epsilon_threshold = 0.0;
  std::optional<PeriodicTrajectory> g_curve;
  double g_dot_L2_sq = 0.0;
  double g_dot_sup = 0.0;
  double M_used = 0.0;
  GridSpec M_box;
  double action_value = 0.0;
  double theoretical_bound = 0.0;
  bool negative = false;
  bool bound_ok = false;
  std::optional<PeriodicTrajectory> witness;
  std::vector<std::string> notes;
};

/// Phi = 0 certificate. Throws CertificateFailed when I0(p) >= 0 or exceeds the bound.
WitnessCertificate certify_lemma_negative(const PotentialPair& pair, const WitnessOptions& options = {});

/// Same chain without the final assertion; used by the optimizer and the CLI.
WitnessCertificate build_witness(const PotentialPair& pair, const Vec3& b, WitnessMode mode,
                                 const WitnessOptions& options = {});

struct RatioRow {
  Vec3 base_point = Vec3::Zero();
  double radius = 0.0;
  double varphi = 0.0;
  double tilde_L2 = 0.0;
  double shell_max_grad_phi = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

struct Theorem2Options {
  WitnessOptions witness{};
  int shell_points = 256;
  int shell_time_nodes = 16;
  int varphi_time_nodes = 256;
};

struct Theorem2Result {
  std::vector<RatioRow> rows;
  bool r1_decreasing = false;
  bool r2_decreasing = false;  // true when r2 is identically zero as well
  bool trend_ok = false;
  WitnessCertificate certificate;
};

/// Ratio table along the supplied base points and a witness at the last one.
/// A failing trend is reported through the flags, not thrown.
Theorem2Result certify_theorem2(const PotentialPair& pair, const std::vector<Vec3>& bases,
                                const Theorem2Options& options = {});

struct FlowOptions {
  std::size_t grid_size = 64;
  DerivativeScheme scheme = DerivativeScheme::spectral;
  int max_flow_steps = 200;
  double step_init = -1.0;  // negative selects 1/h
  double beta = 0.5;
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
  double tol_zero = 1e-8;         // target: I < -tol_zero
  double tol_equilibrium = 1e-12; // on the max node norm of the initial gradient
  double tol_phi = 1e-8;
  double rho_cap = 0.999;
};

struct FlowResult {
  WitnessCertificate certificate;
  std::vector<double> values;  // I at the start and after every accepted step
  int accepted_steps = 0;
};

/// Descent with the exact discrete gradient from the constant trajectory b0.
/// Throws EquilibriumStart, PreconditionViolated (phi(b0) < -tol_phi) or FlowStalled.
FlowResult certify_theorem3_flow(const PotentialPair& pair, const Vec3& b0, const FlowOptions& options = {});

struct DivergenceRow {
  Vec3 base_point = Vec3::Zero();
  double radius = 0.0;
  double g_dot_L2_sq = 0.0;
  double g_dot_sup = 0.0;
  double ratio = 0.0;  // ||g'||_2^2 / ||g'||_inf
  double epsilon = 0.0;
  ExtendedReal action;
};

struct DivergenceTable {
  std::vector<DivergenceRow> rows;
  bool strictly_decreasing = false;
};

/// epsilon = 1 / sup|g'| at every approach point; the witness then has speed exactly 1.
DivergenceTable divergence_probe(const PotentialPair& pair, const std::vector<Vec3>& approach,
                                 std::size_t grid_size = 1024);

}  // namespace lorentz
