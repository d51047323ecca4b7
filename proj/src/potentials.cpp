#include "lorentz/potentials.hpp"

#include "lorentz/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lorentz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(const Vec3& v) { return v.allFinite(); }
bool finite(const Mat3& m) { return m.allFinite(); }

double time_step(double period) { return 1e-5 * std::max(1.0, period); }

std::string describe(const Vec3& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.x() << ", " << x.y() << ", " << x.z() << ")";
  return os.str();
}

void require_regular(const PotentialPair& pair, double t, const Vec3& x) {
  if (auto ball = pair.singular_ball_containing(x)) {
    const auto& b = pair.singular_set[*ball];
    throw Error(ErrorKind::SingularPoint,
                "point " + describe(x) + " at t=" + fmt(t) + " lies in singular ball #" +
                    std::to_string(*ball) + " centered at " + describe(b.center) +
                    " radius " + fmt(b.radius));
  }
}

Mat3 fd_jacobian(const VectorField& field, double t, const Vec3& x) {
  const double h = fd_step(x);
  Mat3 jac;
  for (int c = 0; c < 3; ++c) {
    Vec3 step = Vec3::Zero();
    step[c] = h;
    jac.col(c) = (field(t, x + step) - field(t, x - step)) / (2.0 * h);
  }
  return jac;
}

Vec3 fd_gradient(const ScalarField& field, double t, const Vec3& x) {
  const double h = fd_step(x);
  Vec3 g;
  for (int c = 0; c < 3; ++c) {
    Vec3 step = Vec3::Zero();
    step[c] = h;
    g[c] = (field(t, x + step) - field(t, x - step)) / (2.0 * h);
  }
  return g;
}

Vec3 fd_time_derivative(const VectorField& field, double period, double t, const Vec3& x) {
  const double h = time_step(period);
  return (field(t + h, x) - field(t - h, x)) / (2.0 * h);
}

double fd_time_derivative(const ScalarField& field, double period, double t, const Vec3& x) {
  const double h = time_step(period);
  return (field(t + h, x) - field(t - h, x)) / (2.0 * h);
}

// Largest singular value of a 3x3 matrix through the closed-form symmetric eigensolver.
double fast_operator_norm(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig;
  eig.computeDirect(m.transpose() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double time_node(double period, int nodes, int j) {
  return period * static_cast<double>(j) / static_cast<double>(nodes);
}

}  // namespace

std::optional<std::size_t> PotentialPair::singular_ball_containing(const Vec3& x) const {
  for (std::size_t i = 0; i < singular_set.size(); ++i)
    if ((x - singular_set[i].center).norm() <= singular_set[i].radius) return i;
  return std::nullopt;
}

double PotentialPair::distance_to_singular_set(const Vec3& x) const {
  double d = kInf;
  for (const auto& ball : singular_set) d = std::min(d, (x - ball.center).norm() - ball.radius);
  return d;
}

void PotentialPair::validate(const std::vector<Vec3>& probes, double tol) const {
  if (!(period > 0.0) || !std::isfinite(period))
    throw Error(ErrorKind::PreconditionViolated, "period must be positive and finite");
  if (!vector_potential || !scalar_potential)
    throw Error(ErrorKind::PreconditionViolated, "potential pair is missing A or Phi");
  for (const auto& ball : singular_set)
    if (!(ball.radius >= 0.0))
      throw Error(ErrorKind::PreconditionViolated, "singular ball radius must be >= 0");
  for (const auto& x : probes) {
    if (singular_ball_containing(x)) continue;
    const Vec3 a0 = A(0.0, x);
    const Vec3 aT = A(period, x);
    if ((a0 - aT).norm() > tol * (1.0 + a0.norm()))
      throw Error(ErrorKind::PreconditionViolated,
                  "A(0,x) != A(T,x) at x = " + describe(x) + " (not T-periodic)");
  }
}

double fd_step(const Vec3& x) { return 1e-5 * std::max(1.0, x.norm()); }

PotentialDerivatives derivatives(const PotentialPair& pair, double t, const Vec3& x) {
  require_regular(pair, t, x);
  PotentialDerivatives d;
  d.A = pair.A(t, x);
  d.Phi = pair.Phi(t, x);
  d.jacobian_A = pair.analytic_jacobian_A ? pair.analytic_jacobian_A(t, x)
                                          : fd_jacobian(pair.vector_potential, t, x);
  d.dt_A = pair.analytic_dt_A ? pair.analytic_dt_A(t, x)
                              : fd_time_derivative(pair.vector_potential, pair.period, t, x);
  d.grad_Phi = pair.analytic_grad_Phi ? pair.analytic_grad_Phi(t, x)
                                      : fd_gradient(pair.scalar_potential, t, x);
  if (!finite(d.A) || !std::isfinite(d.Phi) || !finite(d.jacobian_A) || !finite(d.dt_A) ||
      !finite(d.grad_Phi))
    throw Error(ErrorKind::NonFinite,
                "non-finite potential derivative at x = " + describe(x) + ", t = " + fmt(t));
  return d;
}

FieldSample eval_fields(const PotentialPair& pair, double t, const Vec3& x) {
  const auto d = derivatives(pair, t, x);
  FieldSample s;
  s.electric = -d.dt_A - d.grad_Phi;
  s.magnetic = curl_from_jacobian(d.jacobian_A);
  s.t = t;
  s.x = x;
  return s;
}

Vec3 mean_A(const PotentialPair& pair, const Vec3& x, int time_nodes) {
  Vec3 sum = Vec3::Zero();
  for (int j = 0; j < time_nodes; ++j) sum += pair.A(time_node(pair.period, time_nodes, j), x);
  return sum / static_cast<double>(time_nodes);
}

Vec3 tilde_A(const PotentialPair& pair, double t, const Vec3& x, int time_nodes) {
  return pair.A(t, x) - mean_A(pair, x, time_nodes);
}

double varphi(const PotentialPair& pair, const Vec3& x, int time_nodes) {
  if (pair.singular_ball_containing(x)) return -kInf;
  double sum = 0.0;
  for (int j = 0; j < time_nodes; ++j) sum += pair.Phi(time_node(pair.period, time_nodes, j), x);
  return pair.period * sum / static_cast<double>(time_nodes);
}

Vec3 GridSpec::point(std::size_t index) const {
  const auto n = static_cast<std::size_t>(points_per_axis);
  const std::size_t idx[3] = {index % n, (index / n) % n, index / (n * n)};
  Vec3 p;
  for (int c = 0; c < 3; ++c) {
    if (n == 1) {
      p[c] = 0.5 * (lo[c] + hi[c]);
    } else {
      p[c] = lo[c] + (hi[c] - lo[c]) * static_cast<double>(idx[c]) / static_cast<double>(n - 1);
    }
  }
  return p;
}

std::vector<Vec3> GridSpec::points() const {
  std::vector<Vec3> pts(spatial_count());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = point(i);
  return pts;
}

std::vector<std::vector<Vec3>> default_far_field_rays() {
  std::vector<std::vector<Vec3>> rays;
  for (int c = 0; c < 3; ++c) {
    for (double sign : {1.0, -1.0}) {
      std::vector<Vec3> ray;
      for (double r : {1e2, 1e3, 1e4}) {
        Vec3 p = Vec3::Zero();
        p[c] = sign * r;
        ray.push_back(p);
      }
      rays.push_back(std::move(ray));
    }
  }
  return rays;
}

NormalizationResult normalize_phi(const PotentialPair& pair, const GridSpec& box,
                                  const std::vector<std::vector<Vec3>>& far_field_rays) {
  const int nodes = std::max(box.time_nodes, 8);
  const auto grid = box.points();
  const auto values = map_indices<double>(
      grid.size(), [&](std::size_t i) { return varphi(pair, grid[i], nodes); }, Execution::parallel);

  NormalizationResult out;
  double sup = -kInf;
  Vec3 arg = Vec3::Zero();
  auto consider = [&](double v, const Vec3& x) {
    if (std::isnan(v) || v == kInf)
      throw Error(ErrorKind::UnboundedAbove, "phi is not finite at " + describe(x));
    if (v > sup) {
      sup = v;
      arg = x;
    }
  };
  for (std::size_t i = 0; i < grid.size(); ++i) consider(values[i], grid[i]);

  for (const auto& ray : far_field_rays) {
    std::vector<double> along;
    for (const auto& x : ray) {
      const double v = varphi(pair, x, nodes);
      consider(v, x);
      along.push_back(v);
    }
    // Growth that does not slow down along the ray is read as divergence.
    if (along.size() >= 3) {
      bool increasing = true;
      for (std::size_t j = 1; j < along.size(); ++j)
        if (!(along[j] > along[j - 1])) increasing = false;
      const double first_step = along[1] - along[0];
      const double last_step = along.back() - along[along.size() - 2];
      if (increasing && last_step >= 0.5 * first_step)
        throw Error(ErrorKind::UnboundedAbove,
                    "phi grows without bound along the probe ray through " + describe(ray.back()));
    }
  }
  if (!std::isfinite(sup))
    throw Error(ErrorKind::UnboundedAbove, "no regular probe point for the phi supremum");

  out.sup_varphi = sup;
  out.argmax = arg;
  out.pair = pair;
  if (sup != 0.0) {
    const double shift = sup / pair.period;
    auto phi = pair.scalar_potential;
    out.pair.scalar_potential = [phi, shift](double t, const Vec3& x) { return phi(t, x) - shift; };
  }
  return out;
}

PotentialPair gauge_transform(const PotentialPair& pair, const GaugeFunction& f) {
  const double period = pair.period;
  ScalarField dt = f.dt;
  if (!dt) {
    auto value = f.value;
    dt = [value, period](double t, const Vec3& x) { return fd_time_derivative(value, period, t, x); };
  }
  VectorField grad = f.grad;
  if (!grad) {
    auto value = f.value;
    grad = [value](double t, const Vec3& x) { return fd_gradient(value, t, x); };
  }

  PotentialPair out;
  out.name = pair.name + "+gauge";
  out.period = period;
  out.singular_set = pair.singular_set;
  auto A = pair.vector_potential;
  auto Phi = pair.scalar_potential;
  out.vector_potential = [A, grad](double t, const Vec3& x) { return Vec3(A(t, x) - grad(t, x)); };
  out.scalar_potential = [Phi, dt](double t, const Vec3& x) { return Phi(t, x) + dt(t, x); };

  if (pair.has_analytic_derivatives() && f.dt_grad && f.hessian) {
    auto jac = pair.analytic_jacobian_A;
    auto dtA = pair.analytic_dt_A;
    auto gradPhi = pair.analytic_grad_Phi;
    auto mixed = f.dt_grad;
    auto hess = f.hessian;
    out.analytic_jacobian_A = [jac, hess](double t, const Vec3& x) {
      return Mat3(jac(t, x) - hess(t, x));
    };
    out.analytic_dt_A = [dtA, mixed](double t, const Vec3& x) { return Vec3(dtA(t, x) - mixed(t, x)); };
    out.analytic_grad_Phi = [gradPhi, mixed](double t, const Vec3& x) {
      return Vec3(gradPhi(t, x) + mixed(t, x));
    };
  }
  return out;
}

bool AdmissibilityReport::coulomb_minorant_ok() const {
  return std::all_of(coulomb_minorant.begin(), coulomb_minorant.end(),
                     [](const CoulombFit& c) { return c.ok; });
}

AdmissibilityReport admissibility_report(const PotentialPair& pair, const AdmissibilityOptions& options) {
  for (std::size_t i = 1; i < options.radii.size(); ++i)
    if (!(options.radii[i] > options.radii[i - 1]) || !(options.radii[0] > 0.0))
      throw Error(ErrorKind::PreconditionViolated, "admissibility radii must be positive and increasing");

  const int nodes = std::max(options.time_nodes, 1);
  AdmissibilityReport report;

  for (double radius : options.radii) {
    const auto sphere = fibonacci_sphere(options.samples_per_sphere, radius);
    double max_a = 0.0;
    double max_phi = 0.0;
    for (const auto& x : sphere) {
      if (pair.singular_ball_containing(x)) continue;
      for (int j = 0; j < nodes; ++j) {
        const auto d = derivatives(pair, time_node(pair.period, nodes, j), x);
        max_a = std::max(max_a, d.dt_A.norm() + fast_operator_norm(d.jacobian_A));
        max_phi = std::max(max_phi, d.grad_Phi.norm());
      }
    }
    report.decay_A_profile.emplace_back(radius, max_a);
    report.decay_Phi_profile.emplace_back(radius, max_phi);
  }

  const auto probes = options.probe_grid.points();
  const int probe_nodes = std::max(options.probe_grid.time_nodes, 1);
  double max_e = 0.0;
  double max_dt = 0.0;
  double sup_phi = -kInf;
  for (const auto& x : probes) {
    if (pair.singular_ball_containing(x)) continue;
    for (int j = 0; j < probe_nodes; ++j) {
      const auto d = derivatives(pair, time_node(pair.period, probe_nodes, j), x);
      max_e = std::max(max_e, (d.dt_A + d.grad_Phi).norm());
      max_dt = std::max(max_dt, d.dt_A.norm());
    }
    sup_phi = std::max(sup_phi, varphi(pair, x, probe_nodes));
  }
  report.max_electric_probe = max_e;
  report.nonzero_electric_field = max_e > options.tol_zero;
  report.nonautonomous_A = max_dt > options.tol_zero;
  report.phi_sup_estimate = sup_phi;

  const auto directions = fibonacci_sphere(options.coulomb_directions, 1.0);
  for (const auto& ball : pair.singular_set) {
    double fitted = kInf;
    for (const auto& u : directions) {
      for (double delta : options.coulomb_offsets) {
        const Vec3 x = ball.center + (ball.radius + delta) * u;
        if (pair.singular_ball_containing(x)) continue;
        for (int j = 0; j < nodes; ++j) {
          const double phi = pair.Phi(time_node(pair.period, nodes, j), x);
          fitted = std::min(fitted, -phi * delta);
        }
      }
    }
    CoulombFit fit;
    fit.fitted_r = std::isfinite(fitted) ? fitted : 0.0;
    fit.ok = std::isfinite(fitted) && fitted > 0.0;
    report.coulomb_minorant.push_back(fit);
  }
  return report;
}

LipschitzReport lipschitz_and_C(const PotentialPair& pair, const GridSpec& grid, Execution exec) {
  struct PointMax {
    double jac = 0.0, dt = 0.0, grad_phi = 0.0, det = 0.0;
  };
  const int nodes = std::max(grid.time_nodes, 1);
  const auto per_point = map_indices<PointMax>(
      grid.spatial_count(),
      [&](std::size_t i) {
        const Vec3 x = grid.point(i);
        PointMax m;
        for (int j = 0; j < nodes; ++j) {
          PotentialDerivatives d;
          try {
            d = derivatives(pair, time_node(pair.period, nodes, j), x);
          } catch (const Error& e) {
            throw Error(ErrorKind::NonFinite,
                        std::string("supremum grid hits a singular evaluation: ") + e.what());
          }
          m.jac = std::max(m.jac, fast_operator_norm(d.jacobian_A));
          m.dt = std::max(m.dt, d.dt_A.norm());
          m.grad_phi = std::max(m.grad_phi, d.grad_Phi.norm());
          m.det = std::max(m.det, std::abs(d.jacobian_A.determinant()));
        }
        return m;
      },
      exec);

  LipschitzReport r;
  r.grid = grid;
  for (const auto& m : per_point) {
    r.M = std::max(r.M, m.jac);
    r.max_dt_A = std::max(r.max_dt_A, m.dt);
    r.max_grad_Phi = std::max(r.max_grad_Phi, m.grad_phi);
    r.max_abs_det = std::max(r.max_abs_det, m.det);
  }
  r.C = std::max({r.max_dt_A, r.M, r.max_grad_Phi});
  r.C_det = std::max({r.max_dt_A, r.max_abs_det, r.max_grad_Phi});
  return r;
}

std::vector<Vec3> fibonacci_sphere(int count, double radius, const Vec3& center) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(center + radius * Vec3(rho * std::cos(phi), rho * std::sin(phi), z));
  }
  return pts;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::UnboundedAbove: return "UnboundedAbove";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::SingularTrajectory: return "SingularTrajectory";
    case ErrorKind::BoundaryOfK: return "BoundaryOfK";
    case ErrorKind::NoNonautonomousPoint: return "NoNonautonomousPoint";
    case ErrorKind::DegenerateOscillation: return "DegenerateOscillation";
    case ErrorKind::SpeedCapExceeded: return "SpeedCapExceeded";
    case ErrorKind::CertificateFailed: return "CertificateFailed";
    case ErrorKind::EquilibriumStart: return "EquilibriumStart";
    case ErrorKind::FlowStalled: return "FlowStalled";
    case ErrorKind::ProjectionStalled: return "ProjectionStalled";
    case ErrorKind::LineSearchFailed: return "LineSearchFailed";
    case ErrorKind::AllStartsFailed: return "AllStartsFailed";
    case ErrorKind::SingularEncounter: return "SingularEncounter";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
  }
  return "Unknown";
}

}  // namespace lorentz
