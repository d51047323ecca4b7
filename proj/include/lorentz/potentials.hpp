#pragma once

#include "lorentz/kernels.hpp"
#include "lorentz/vec.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lorentz {

using VectorField = std::function<Vec3(double t, const Vec3& x)>;
using ScalarField = std::function<double(double t, const Vec3& x)>;
using JacobianField = std::function<Mat3(double t, const Vec3& x)>;

/// Closed ball of the singular set; radius 0 is a point singularity.
struct SingularBall {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

/// An electromagnetic potential (A, Phi) of period T. The optional analytic
/// derivatives are used by field evaluation when all three are present.
struct PotentialPair {
  std::string name;
  VectorField vector_potential;
  ScalarField scalar_potential;
  double period = 1.0;
  std::vector<SingularBall> singular_set;

  JacobianField analytic_jacobian_A;  // (j, c) = d A_j / d x_c
  VectorField analytic_dt_A;
  VectorField analytic_grad_Phi;

  Vec3 A(double t, const Vec3& x) const { return vector_potential(t, x); }
  double Phi(double t, const Vec3& x) const { return scalar_potential(t, x); }

  bool has_analytic_derivatives() const {
    return analytic_jacobian_A && analytic_dt_A && analytic_grad_Phi;
  }

  /// Index of the first ball with |x - c| <= r.
  std::optional<std::size_t> singular_ball_containing(const Vec3& x) const;

  /// Distance to the nearest ball surface (negative inside); +inf when the set is empty.
  double distance_to_singular_set(const Vec3& x) const;

  /// Throws PreconditionViolated on a non-positive period, negative radii or
  /// A(0,x) != A(T,x) at the probe points.
  void validate(const std::vector<Vec3>& probes = {}, double tol = 1e-10) const;
};

/// Everything the dynamics and the action gradient need at one (t, x).
struct PotentialDerivatives {
  Vec3 A = Vec3::Zero();
  Mat3 jacobian_A = Mat3::Zero();
  Vec3 dt_A = Vec3::Zero();
  double Phi = 0.0;
  Vec3 grad_Phi = Vec3::Zero();
};

struct FieldSample {
  Vec3 electric = Vec3::Zero();
  Vec3 magnetic = Vec3::Zero();
  double t = 0.0;
  Vec3 x = Vec3::Zero();
};

/// Spatial finite-difference step: 1e-5 * max(1, |x|).
double fd_step(const Vec3& x);

/// Analytic derivatives when supplied, central differences otherwise.
/// Throws SingularPoint inside a singular ball and NonFinite on non-finite output.
PotentialDerivatives derivatives(const PotentialPair& pair, double t, const Vec3& x);

/// E = -dA/dt - grad Phi, B = curl A.
FieldSample eval_fields(const PotentialPair& pair, double t, const Vec3& x);

/// Time mean (1/T) int_0^T A(s, x) ds by the periodic trapezoid rule on `time_nodes` nodes.
Vec3 mean_A(const PotentialPair& pair, const Vec3& x, int time_nodes = 256);
Vec3 tilde_A(const PotentialPair& pair, double t, const Vec3& x, int time_nodes = 256);

/// phi(x) = int_0^T Phi(t, x) dt; -inf inside a singular ball.
double varphi(const PotentialPair& pair, const Vec3& x, int time_nodes = 256);

/// Uniform tensor grid over an axis-aligned box together with a time grid.
struct GridSpec {
  Vec3 lo = Vec3::Constant(-4.0);
  Vec3 hi = Vec3::Constant(4.0);
  int points_per_axis = 21;
  int time_nodes = 32;

  std::size_t spatial_count() const {
    const auto n = static_cast<std::size_t>(points_per_axis);
    return n * n * n;
  }
  Vec3 point(std::size_t index) const;
  std::vector<Vec3> points() const;
};

struct NormalizationResult {
  PotentialPair pair;
  double sup_varphi = 0.0;  // estimate before the shift
  Vec3 argmax = Vec3::Zero();
};

/// Default far-field probes: radii 1e2, 1e3, 1e4 along the six coordinate rays.
std::vector<std::vector<Vec3>> default_far_field_rays();

/// Shift Phi by -(1/T) sup phi, with the supremum taken over the grid and the
/// far-field rays. Throws UnboundedAbove when phi keeps growing along a ray.
NormalizationResult normalize_phi(const PotentialPair& pair, const GridSpec& box,
                                  const std::vector<std::vector<Vec3>>& far_field_rays =
                                      default_far_field_rays());

/// A gauge function f(t, x). The mixed derivative d/dt grad f and the spatial
/// Hessian are only needed to keep the transformed pair analytic.
struct GaugeFunction {
  ScalarField value;
  ScalarField dt;
  VectorField grad;
  VectorField dt_grad;
  JacobianField hessian;
};

/// (Phi, A) -> (Phi + df/dt, A - grad f).
PotentialPair gauge_transform(const PotentialPair& pair, const GaugeFunction& f);

struct CoulombFit {
  bool ok = false;
  double fitted_r = 0.0;  // min over samples of -Phi * dist
};

struct AdmissibilityOptions {
  std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
  int samples_per_sphere = 128;
  int time_nodes = 32;
  GridSpec probe_grid{Vec3::Constant(-2.0), Vec3::Constant(2.0), 9, 16};
  std::vector<double> coulomb_offsets = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  int coulomb_directions = 64;
  double tol_zero = 1e-12;
};

struct AdmissibilityReport {
  bool nonzero_electric_field = false;
  bool nonautonomous_A = false;
  std::vector<std::pair<double, double>> decay_A_profile;    // (radius, max |dA/dt| + |grad A|)
  std::vector<std::pair<double, double>> decay_Phi_profile;  // (radius, max |grad Phi|)
  std::vector<CoulombFit> coulomb_minorant;                  // one per singular ball
  double phi_sup_estimate = 0.0;
  double max_electric_probe = 0.0;
  bool coulomb_minorant_ok() const;
};

AdmissibilityReport admissibility_report(const PotentialPair& pair,
                                         const AdmissibilityOptions& options = {});

/// Grid estimates of the sup norms used by the witness and the velocity bound.
struct LipschitzReport {
  double M = 0.0;         // max operator norm of grad A
  double C = 0.0;         // max{ |dA/dt|, ||grad A||_op, |grad Phi| }
  double C_det = 0.0;     // same with max |det grad A| in the middle slot
  double max_dt_A = 0.0;
  double max_grad_Phi = 0.0;
  double max_abs_det = 0.0;
  GridSpec grid;
};

LipschitzReport lipschitz_and_C(const PotentialPair& pair, const GridSpec& grid,
                                Execution exec = Execution::parallel);

}  // namespace lorentz
