#pragma once

#include "lorentz/potentials.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace lorentz::catalog {

// Closed-form potential pairs with analytic derivatives. Every time dependence
// is through sin/cos(2 pi t / T), so all entries are T-periodic.

/// A = a sin(2 pi t/T) exp(-|x-c|^2 / w^2) e, Phi = 0.
struct GaussianPulse {
  double amplitude = 1.0;
  double width = 1.0;
  Vec3 polarization = Vec3::UnitX();
  Vec3 center = Vec3::Zero();
};
PotentialPair gaussian_pulse(const GaussianPulse& p, double period);

/// Autonomous well Phi = -d exp(-|x-c|^2 / s^2), A = 0.
struct GaussianWell {
  double depth = 1.0;
  double width = 1.0;
  Vec3 center = Vec3::Zero();
};
PotentialPair gaussian_well(const GaussianWell& p, double period);

/// Phi = -k / |x - c| with a point singularity at c, A = 0.
struct Coulomb {
  double charge = 1.0;
  Vec3 center = Vec3::Zero();
};
PotentialPair coulomb(const Coulomb& p, double period);

/// Nested compact supports: A = a sin(2 pi t/T) beta(|x-c|/R_A) e and
/// Phi = -d beta(|x-c|/R_Phi) with R_Phi < R_A, beta(u) = exp(1 - 1/(1-u^2)).
struct BumpCompact {
  double amplitude = 1.0;
  double support_A = 3.0;
  double support_phi = 1.0;
  double phi_depth = 1.0;
  Vec3 polarization = Vec3::UnitX();
  Vec3 center = Vec3::Zero();
};
PotentialPair bump_compact(const BumpCompact& p, double period);

/// Wire along the x3 axis: A3 = -(1/2) log(1 + rho^2/rho0^2) (I + a sin(2 pi t/T) exp(-|x|^2/w^2)).
/// A grows logarithmically in rho while dA/dt and grad A decay.
struct LogWire {
  double current = 1.0;
  double amplitude = 1.0;
  double core_radius = 1.0;
  double width = 2.0;
};
PotentialPair log_wire(const LogWire& p, double period);

/// Autonomous swirl A = s (-x2, x1, 0) exp(-|x|^2 / (2 w^2)) with s chosen so that
/// ||grad A||_op <= cap everywhere. cap <= 0 selects 0.9 pi / (2T).
struct Magnetostatic {
  double cap = 0.0;
  double width = 1.0;
};
PotentialPair magnetostatic(const Magnetostatic& p, double period);

/// A = a sin(2 pi t/T) e, independent of x (zero Jacobian).
struct SpatiallyConstant {
  double amplitude = 1.0;
  Vec3 polarization = Vec3::UnitX();
};
PotentialPair spatially_constant(const SpatiallyConstant& p, double period);

/// A = a sin(2 pi t/T) e / |x - c|; singular at c.
struct SingularOscillation {
  double amplitude = 1.0;
  Vec3 polarization = Vec3::UnitX();
  Vec3 center = Vec3::Zero();
};
PotentialPair singular_oscillation(const SingularOscillation& p, double period);

/// Uniform magnetic field B through A = (1/2) B x r. Not decaying; for dynamics checks.
PotentialPair uniform_b(const Vec3& field, double period);

PotentialPair zero(double period);

/// Pointwise sum of pairs sharing one period; analytic only if every summand is.
PotentialPair sum(const std::vector<PotentialPair>& pairs);

/// Pair from component-wise expressions; derivatives by finite differences.
PotentialPair from_expressions(const std::vector<std::string>& A, const std::string& Phi,
                               const std::vector<SingularBall>& singular, double period);

/// Gauge function from an expression in t, x1, x2, x3; derivatives by finite differences.
GaugeFunction gauge_from_expression(const std::string& f, double period);

std::vector<std::string> names();

/// Build a pair from its JSON description: {"catalog": name, "params": {...}},
/// {"expression": {"A": [..], "Phi": "..", "singular": [..]}}, {"sum": [..]} or
/// {"gauge": {"base": spec, "f": ".."}}.
/// Throws Error(ConfigError) for unknown names or malformed specs.
PotentialPair from_json(const nlohmann::json& spec, double period);

}  // namespace lorentz::catalog
