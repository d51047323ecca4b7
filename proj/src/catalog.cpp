#include "lorentz/catalog.hpp"

#include "lorentz/error.hpp"
#include "lorentz/expression.hpp"

#include <cmath>
#include <numbers>

namespace lorentz::catalog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 zero_vec(double, const Vec3&) { return Vec3::Zero(); }
double zero_scalar(double, const Vec3&) { return 0.0; }
Mat3 zero_mat(double, const Vec3&) { return Mat3::Zero(); }

void zero_scalar_part(PotentialPair& p) {
  p.scalar_potential = zero_scalar;
  p.analytic_grad_Phi = zero_vec;
}

void zero_vector_part(PotentialPair& p) {
  p.vector_potential = zero_vec;
  p.analytic_jacobian_A = zero_mat;
  p.analytic_dt_A = zero_vec;
}

// Smooth bump exp(1 - 1/(1 - u^2)) on u = |y|/R < 1, with its gradient in y.
struct Bump {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
};

Bump bump(const Vec3& y, double R) {
  const double u2 = y.squaredNorm() / (R * R);
  if (u2 >= 1.0) return {};
  const double s = 1.0 - u2;
  Bump b;
  b.value = std::exp(1.0 - 1.0 / s);
  b.grad = b.value * (-2.0 / (R * R * s * s)) * y;
  return b;
}

}  // namespace

PotentialPair gaussian_pulse(const GaussianPulse& p, double period) {
  PotentialPair pair;
  pair.name = "gaussian_pulse";
  pair.period = period;
  const double w = kTwoPi / period;
  pair.vector_potential = [p, w](double t, const Vec3& x) {
    return Vec3(p.amplitude * std::sin(w * t) * std::exp(-(x - p.center).squaredNorm() / (p.width * p.width)) *
                p.polarization);
  };
  pair.analytic_dt_A = [p, w](double t, const Vec3& x) {
    return Vec3(p.amplitude * w * std::cos(w * t) *
                std::exp(-(x - p.center).squaredNorm() / (p.width * p.width)) * p.polarization);
  };
  pair.analytic_jacobian_A = [p, w](double t, const Vec3& x) {
    const Vec3 y = x - p.center;
    const double env = std::exp(-y.squaredNorm() / (p.width * p.width));
    const Vec3 grad_env = (-2.0 / (p.width * p.width)) * env * y;
    return Mat3(p.amplitude * std::sin(w * t) * p.polarization * grad_env.transpose());
  };
  zero_scalar_part(pair);
  return pair;
}

PotentialPair gaussian_well(const GaussianWell& p, double period) {
  PotentialPair pair;
  pair.name = "gaussian_well";
  pair.period = period;
  zero_vector_part(pair);
  pair.scalar_potential = [p](double, const Vec3& x) {
    return -p.depth * std::exp(-(x - p.center).squaredNorm() / (p.width * p.width));
  };
  pair.analytic_grad_Phi = [p](double, const Vec3& x) {
    const Vec3 y = x - p.center;
    return Vec3((2.0 * p.depth / (p.width * p.width)) * std::exp(-y.squaredNorm() / (p.width * p.width)) * y);
  };
  return pair;
}

PotentialPair coulomb(const Coulomb& p, double period) {
  PotentialPair pair;
  pair.name = "coulomb";
  pair.period = period;
  zero_vector_part(pair);
  pair.scalar_potential = [p](double, const Vec3& x) { return -p.charge / (x - p.center).norm(); };
  pair.analytic_grad_Phi = [p](double, const Vec3& x) {
    const Vec3 y = x - p.center;
    const double r = y.norm();
    return Vec3(p.charge * y / (r * r * r));
  };
  pair.singular_set.push_back({p.center, 0.0});
  return pair;
}

PotentialPair bump_compact(const BumpCompact& p, double period) {
  if (!(p.support_phi < p.support_A))
    throw Error(ErrorKind::ConfigError, "bump_compact needs support_phi < support_A");
  PotentialPair pair;
  pair.name = "bump_compact";
  pair.period = period;
  const double w = kTwoPi / period;
  pair.vector_potential = [p, w](double t, const Vec3& x) {
    return Vec3(p.amplitude * std::sin(w * t) * bump(x - p.center, p.support_A).value * p.polarization);
  };
  pair.analytic_dt_A = [p, w](double t, const Vec3& x) {
    return Vec3(p.amplitude * w * std::cos(w * t) * bump(x - p.center, p.support_A).value * p.polarization);
  };
  pair.analytic_jacobian_A = [p, w](double t, const Vec3& x) {
    const Bump b = bump(x - p.center, p.support_A);
    return Mat3(p.amplitude * std::sin(w * t) * p.polarization * b.grad.transpose());
  };
  pair.scalar_potential = [p](double, const Vec3& x) {
    return -p.phi_depth * bump(x - p.center, p.support_phi).value;
  };
  pair.analytic_grad_Phi = [p](double, const Vec3& x) {
    return Vec3(-p.phi_depth * bump(x - p.center, p.support_phi).grad);
  };
  return pair;
}

PotentialPair log_wire(const LogWire& p, double period) {
  PotentialPair pair;
  pair.name = "log_wire";
  pair.period = period;
  const double w = kTwoPi / period;
  auto log_part = [p](const Vec3& x) {
    return 0.5 * std::log1p((x.x() * x.x() + x.y() * x.y()) / (p.core_radius * p.core_radius));
  };
  auto envelope = [p](const Vec3& x) { return std::exp(-x.squaredNorm() / (p.width * p.width)); };
  pair.vector_potential = [=](double t, const Vec3& x) {
    return Vec3(0.0, 0.0, -log_part(x) * (p.current + p.amplitude * std::sin(w * t) * envelope(x)));
  };
  pair.analytic_dt_A = [=](double t, const Vec3& x) {
    return Vec3(0.0, 0.0, -log_part(x) * p.amplitude * w * std::cos(w * t) * envelope(x));
  };
  pair.analytic_jacobian_A = [=](double t, const Vec3& x) {
    const double rho2 = x.x() * x.x() + x.y() * x.y();
    const Vec3 grad_log = Vec3(x.x(), x.y(), 0.0) / (p.core_radius * p.core_radius + rho2);
    const double env = envelope(x);
    const Vec3 grad_env = (-2.0 / (p.width * p.width)) * env * x;
    const double s = std::sin(w * t);
    const double modulation = p.current + p.amplitude * s * env;
    Mat3 jac = Mat3::Zero();
    jac.row(2) = (-grad_log * modulation - log_part(x) * p.amplitude * s * grad_env).transpose();
    return jac;
  };
  zero_scalar_part(pair);
  return pair;
}

PotentialPair magnetostatic(const Magnetostatic& p, double period) {
  // ||grad A||_op <= s exp(-u/2)(1 + u) <= 2 exp(-1/2) s with u = |x|^2 / w^2.
  const double cap = p.cap > 0.0 ? p.cap : 0.9 * std::numbers::pi / (2.0 * period);
  const double s = cap * std::exp(0.5) / 2.0;
  const double w2 = p.width * p.width;
  PotentialPair pair;
  pair.name = "magnetostatic";
  pair.period = period;
  pair.vector_potential = [s, w2](double, const Vec3& x) {
    return Vec3(s * std::exp(-x.squaredNorm() / (2.0 * w2)) * Vec3(-x.y(), x.x(), 0.0));
  };
  pair.analytic_dt_A = zero_vec;
  pair.analytic_jacobian_A = [s, w2](double, const Vec3& x) {
    const double env = std::exp(-x.squaredNorm() / (2.0 * w2));
    Mat3 rot = Mat3::Zero();
    rot(0, 1) = -1.0;
    rot(1, 0) = 1.0;
    const Vec3 swirl(-x.y(), x.x(), 0.0);
    const Vec3 grad_env = (-env / w2) * x;
    return Mat3(s * (env * rot + swirl * grad_env.transpose()));
  };
  zero_scalar_part(pair);
  return pair;
}

PotentialPair spatially_constant(const SpatiallyConstant& p, double period) {
  PotentialPair pair;
  pair.name = "spatially_constant";
  pair.period = period;
  const double w = kTwoPi / period;
  pair.vector_potential = [p, w](double t, const Vec3&) {
    return Vec3(p.amplitude * std::sin(w * t) * p.polarization);
  };
  pair.analytic_dt_A = [p, w](double t, const Vec3&) {
    return Vec3(p.amplitude * w * std::cos(w * t) * p.polarization);
  };
  pair.analytic_jacobian_A = zero_mat;
  zero_scalar_part(pair);
  return pair;
}

PotentialPair singular_oscillation(const SingularOscillation& p, double period) {
  PotentialPair pair;
  pair.name = "singular_oscillation";
  pair.period = period;
  const double w = kTwoPi / period;
  pair.vector_potential = [p, w](double t, const Vec3& x) {
    return Vec3(p.amplitude * std::sin(w * t) / (x - p.center).norm() * p.polarization);
  };
  pair.analytic_dt_A = [p, w](double t, const Vec3& x) {
    return Vec3(p.amplitude * w * std::cos(w * t) / (x - p.center).norm() * p.polarization);
  };
  pair.analytic_jacobian_A = [p, w](double t, const Vec3& x) {
    const Vec3 y = x - p.center;
    const double r = y.norm();
    return Mat3(p.amplitude * std::sin(w * t) * p.polarization * (-y / (r * r * r)).transpose());
  };
  zero_scalar_part(pair);
  pair.singular_set.push_back({p.center, 0.0});
  return pair;
}

PotentialPair uniform_b(const Vec3& field, double period) {
  Mat3 cross;
  cross << 0.0, -field.z(), field.y(), field.z(), 0.0, -field.x(), -field.y(), field.x(), 0.0;
  PotentialPair pair;
  pair.name = "uniform_b";
  pair.period = period;
  pair.vector_potential = [field](double, const Vec3& x) { return Vec3(0.5 * field.cross(x)); };
  pair.analytic_jacobian_A = [cross](double, const Vec3&) { return Mat3(0.5 * cross); };
  pair.analytic_dt_A = zero_vec;
  zero_scalar_part(pair);
  return pair;
}

PotentialPair zero(double period) {
  PotentialPair pair;
  pair.name = "zero";
  pair.period = period;
  zero_vector_part(pair);
  zero_scalar_part(pair);
  return pair;
}

PotentialPair sum(const std::vector<PotentialPair>& pairs) {
  if (pairs.empty()) throw Error(ErrorKind::ConfigError, "sum of zero potential pairs");
  if (pairs.size() == 1) return pairs.front();
  PotentialPair out;
  out.period = pairs.front().period;
  bool analytic = true;
  for (const auto& p : pairs) {
    if (std::abs(p.period - out.period) > 1e-14 * out.period)
      throw Error(ErrorKind::ConfigError, "summed potentials must share one period");
    out.name += (out.name.empty() ? "" : "+") + p.name;
    out.singular_set.insert(out.singular_set.end(), p.singular_set.begin(), p.singular_set.end());
    analytic = analytic && p.has_analytic_derivatives();
  }
  out.vector_potential = [pairs](double t, const Vec3& x) {
    Vec3 a = Vec3::Zero();
    for (const auto& p : pairs) a += p.A(t, x);
    return a;
  };
  out.scalar_potential = [pairs](double t, const Vec3& x) {
    double phi = 0.0;
    for (const auto& p : pairs) phi += p.Phi(t, x);
    return phi;
  };
  if (analytic) {
    out.analytic_jacobian_A = [pairs](double t, const Vec3& x) {
      Mat3 j = Mat3::Zero();
      for (const auto& p : pairs) j += p.analytic_jacobian_A(t, x);
      return j;
    };
    out.analytic_dt_A = [pairs](double t, const Vec3& x) {
      Vec3 d = Vec3::Zero();
      for (const auto& p : pairs) d += p.analytic_dt_A(t, x);
      return d;
    };
    out.analytic_grad_Phi = [pairs](double t, const Vec3& x) {
      Vec3 g = Vec3::Zero();
      for (const auto& p : pairs) g += p.analytic_grad_Phi(t, x);
      return g;
    };
  }
  return out;
}

PotentialPair from_expressions(const std::vector<std::string>& A, const std::string& Phi,
                               const std::vector<SingularBall>& singular, double period) {
  if (A.size() != 3) throw Error(ErrorKind::ConfigError, "expression A needs exactly 3 components");
  const Expression a1 = Expression::parse(A[0]);
  const Expression a2 = Expression::parse(A[1]);
  const Expression a3 = Expression::parse(A[2]);
  const Expression phi = Expression::parse(Phi);
  PotentialPair pair;
  pair.name = "expression";
  pair.period = period;
  pair.singular_set = singular;
  pair.vector_potential = [a1, a2, a3, period](double t, const Vec3& x) {
    return Vec3(a1.evaluate(t, x, period), a2.evaluate(t, x, period), a3.evaluate(t, x, period));
  };
  pair.scalar_potential = [phi, period](double t, const Vec3& x) { return phi.evaluate(t, x, period); };
  return pair;
}

GaugeFunction gauge_from_expression(const std::string& f, double period) {
  const Expression e = Expression::parse(f);
  GaugeFunction g;
  g.value = [e, period](double t, const Vec3& x) { return e.evaluate(t, x, period); };
  return g;
}

std::vector<std::string> names() {
  return {"gaussian_pulse", "gaussian_well",       "coulomb",   "bump_compact", "log_wire",
          "magnetostatic",  "spatially_constant", "singular_oscillation", "uniform_b", "zero"};
}

namespace {

using nlohmann::json;

double num(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw Error(ErrorKind::ConfigError, std::string("parameter '") + key + "' must be a number");
  return params[key].get<double>();
}

Vec3 vec(const json& params, const char* key, const Vec3& fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params[key];
  if (!v.is_array() || v.size() != 3)
    throw Error(ErrorKind::ConfigError, std::string("parameter '") + key + "' must be a 3-vector");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::vector<SingularBall> balls(const json& spec) {
  std::vector<SingularBall> out;
  if (!spec.contains("singular")) return out;
  for (const auto& b : spec["singular"]) out.push_back({vec(b, "center", Vec3::Zero()), num(b, "radius", 0.0)});
  return out;
}

}  // namespace

PotentialPair from_json(const json& spec, double period) {
  try {
    if (spec.contains("sum")) {
      std::vector<PotentialPair> parts;
      for (const auto& s : spec["sum"]) parts.push_back(from_json(s, period));
      return sum(parts);
    }
    if (spec.contains("gauge")) {
      const auto& g = spec["gauge"];
      if (!g.contains("base") || !g.contains("f"))
        throw Error(ErrorKind::ConfigError, "gauge spec needs 'base' and 'f'");
      return gauge_transform(from_json(g["base"], period), gauge_from_expression(g["f"].get<std::string>(), period));
    }
    if (spec.contains("expression")) {
      const auto& e = spec["expression"];
      std::vector<std::string> A = {"0", "0", "0"};
      if (e.contains("A")) A = e["A"].get<std::vector<std::string>>();
      const std::string Phi = e.value("Phi", std::string("0"));
      return from_expressions(A, Phi, balls(e), period);
    }
    if (!spec.contains("catalog")) throw Error(ErrorKind::ConfigError, "potential needs 'catalog', 'expression' or 'sum'");
    const auto name = spec["catalog"].get<std::string>();
    const json params = spec.value("params", json::object());

    if (name == "gaussian_pulse") {
      GaussianPulse p;
      p.amplitude = num(params, "amplitude", p.amplitude);
      p.width = num(params, "width", p.width);
      p.polarization = vec(params, "polarization", p.polarization);
      p.center = vec(params, "center", p.center);
      return gaussian_pulse(p, period);
    }
    if (name == "gaussian_well") {
      GaussianWell p;
      p.depth = num(params, "depth", p.depth);
      p.width = num(params, "width", p.width);
      p.center = vec(params, "center", p.center);
      return gaussian_well(p, period);
    }
    if (name == "coulomb") {
      Coulomb p;
      p.charge = num(params, "charge", p.charge);
      p.center = vec(params, "center", p.center);
      return coulomb(p, period);
    }
    if (name == "bump_compact") {
      BumpCompact p;
      p.amplitude = num(params, "amplitude", p.amplitude);
      p.support_A = num(params, "support_A", p.support_A);
      p.support_phi = num(params, "support_phi", p.support_phi);
      p.phi_depth = num(params, "phi_depth", p.phi_depth);
      p.polarization = vec(params, "polarization", p.polarization);
      p.center = vec(params, "center", p.center);
      return bump_compact(p, period);
    }
    if (name == "log_wire") {
      LogWire p;
      p.current = num(params, "current", p.current);
      p.amplitude = num(params, "amplitude", p.amplitude);
      p.core_radius = num(params, "core_radius", p.core_radius);
      p.width = num(params, "width", p.width);
      return log_wire(p, period);
    }
    if (name == "magnetostatic") {
      Magnetostatic p;
      p.cap = num(params, "cap", p.cap);
      p.width = num(params, "width", p.width);
      return magnetostatic(p, period);
    }
    if (name == "spatially_constant") {
      SpatiallyConstant p;
      p.amplitude = num(params, "amplitude", p.amplitude);
      p.polarization = vec(params, "polarization", p.polarization);
      return spatially_constant(p, period);
    }
    if (name == "singular_oscillation") {
      SingularOscillation p;
      p.amplitude = num(params, "amplitude", p.amplitude);
      p.polarization = vec(params, "polarization", p.polarization);
      p.center = vec(params, "center", p.center);
      return singular_oscillation(p, period);
    }
    if (name == "uniform_b") return uniform_b(vec(params, "field", Vec3(0.0, 0.0, 1.0)), period);
    if (name == "zero") return zero(period);
    throw Error(ErrorKind::ConfigError, "unknown catalog potential '" + name + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed potential spec: ") + e.what());
  }
}

}  // namespace lorentz::catalog
