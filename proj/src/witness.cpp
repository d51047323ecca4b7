#include "lorentz/witness.hpp"

#include "lorentz/error.hpp"
#include "lorentz/kernels.hpp"
#include "lorentz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lorentz {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const Vec3& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.x() << ", " << x.y() << ", " << x.z() << ")";
  return os.str();
}

bool lex_less(const Vec3& a, const Vec3& b) {
  for (int c = 0; c < 3; ++c) {
    if (a[c] < b[c]) return true;
    if (a[c] > b[c]) return false;
  }
  return false;
}

double max_abs_phi_sample(const PotentialPair& pair, const GridSpec& box) {
  GridSpec coarse = box;
  coarse.points_per_axis = 5;
  double worst = 0.0;
  for (const auto& x : coarse.points()) {
    if (pair.singular_ball_containing(x)) continue;
    for (int j = 0; j < 8; ++j) worst = std::max(worst, std::abs(pair.Phi(pair.period * j / 8.0, x)));
  }
  return worst;
}

}  // namespace

const char* to_string(WitnessMode mode) {
  switch (mode) {
    case WitnessMode::phi_zero: return "phi_zero";
    case WitnessMode::theorem2: return "theorem2";
    case WitnessMode::theorem3_flow: return "theorem3_flow";
  }
  return "unknown";
}

double tilde_A_L2_sq(const PotentialPair& pair, const Vec3& b, int nodes) {
  std::vector<Vec3> a(static_cast<std::size_t>(nodes));
  Vec3 mean = Vec3::Zero();
  for (int i = 0; i < nodes; ++i) {
    a[i] = pair.A(pair.period * i / nodes, b);
    mean += a[i];
  }
  mean /= nodes;
  double sum = 0.0;
  for (const auto& v : a) sum += (v - mean).squaredNorm();
  return pair.period / nodes * sum;
}

Vec3 find_base_point(const PotentialPair& pair, const std::vector<Vec3>& candidates, double tol_zero,
                     int time_nodes, Execution exec) {
  if (candidates.empty()) throw Error(ErrorKind::PreconditionViolated, "empty candidate grid");
  const auto norms = map_indices<double>(
      candidates.size(),
      [&](std::size_t i) {
        if (pair.singular_ball_containing(candidates[i])) return -1.0;
        return std::sqrt(tilde_A_L2_sq(pair, candidates[i], time_nodes));
      },
      exec);

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!(norms[i] > tol_zero)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double nb = norms[*best];
    const double ni = norms[i];
    const double scale = 1e-12 * std::max(nb, ni);
    if (ni > nb + scale) {
      best = i;
    } else if (std::abs(ni - nb) <= scale) {
      const double ri = candidates[i].norm();
      const double rb = candidates[*best].norm();
      if (ri < rb || (ri == rb && lex_less(candidates[i], candidates[*best]))) best = i;
    }
  }
  if (!best)
    throw Error(ErrorKind::NoNonautonomousPoint,
                "||A~(., b)||_2 <= " + fmt(tol_zero) + " at every candidate; A looks autonomous");
  return candidates[*best];
}

GCurve build_g(const PotentialPair& pair, const Vec3& b, std::size_t n, DerivativeScheme scheme, double tol_zero) {
  const double T = pair.period;
  const double h = T / static_cast<double>(n);
  std::vector<Vec3> gdot(n);
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    gdot[i] = pair.A(T * static_cast<double>(i) / static_cast<double>(n), b);
    mean += gdot[i];
  }
  mean /= static_cast<double>(n);
  GCurve out{PeriodicTrajectory::constant(b, n, T, scheme), {}, 0.0, 0.0, 0.0};
  double sq = 0.0;
  for (auto& v : gdot) {
    v -= mean;
    sq += v.squaredNorm();
    out.g_dot_sup = std::max(out.g_dot_sup, v.norm());
  }
  out.g_dot_L2_sq = h * sq;
  if (!(std::sqrt(out.g_dot_L2_sq) > tol_zero))
    throw Error(ErrorKind::DegenerateOscillation, "A~(., b) vanishes at b = " + describe(b));

  std::vector<Vec3> g(n, Vec3::Zero());
  if (scheme == DerivativeScheme::spectral) {
    std::vector<double> in(n), prim(n);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) in[i] = gdot[i][c];
      spectral::primitive(in, prim, T);
      for (std::size_t i = 0; i < n; ++i) g[i][c] = prim[i] - prim[0];
    }
  } else {
    for (std::size_t i = 1; i < n; ++i) g[i] = g[i - 1] + 0.5 * h * (gdot[i - 1] + gdot[i]);
  }
  Vec3 gmean = Vec3::Zero();
  for (const auto& v : g) gmean += v;
  gmean /= static_cast<double>(n);
  for (const auto& v : g) out.g_tilde_sup = std::max(out.g_tilde_sup, (v - gmean).norm());

  out.g = PeriodicTrajectory(std::move(g), T, scheme);
  out.g_dot = std::move(gdot);
  return out;
}

double epsilon_threshold(double M, double period, WitnessMode mode) {
  if (M < 0.0 || !(period > 0.0)) throw Error(ErrorKind::PreconditionViolated, "need M >= 0 and T > 0");
  if (mode == WitnessMode::theorem2) return 1.0 / (3.0 + M * period / kPi);
  return kPi / (kPi + M * period);
}

PeriodicTrajectory witness_trajectory(const Vec3& b, const GCurve& g, double epsilon) {
  if (epsilon < 0.0) throw Error(ErrorKind::PreconditionViolated, "epsilon must be non-negative");
  if (epsilon * g.g_dot_sup > 1.0 + 1e-12)
    throw Error(ErrorKind::SpeedCapExceeded,
                "epsilon * sup|g'| = " + fmt(epsilon * g.g_dot_sup) + " exceeds 1");
  const auto& gs = g.g.samples();
  Vec3 mean = Vec3::Zero();
  for (const auto& v : gs) mean += v;
  mean /= static_cast<double>(gs.size());
  std::vector<Vec3> p(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) p[i] = b - epsilon * (gs[i] - mean);
  return g.g.with_samples(std::move(p));
}

WitnessCertificate build_witness(const PotentialPair& pair, const Vec3& b, WitnessMode mode,
                                 const WitnessOptions& options) {
  WitnessCertificate cert;
  cert.mode = mode;
  cert.base_point = b;
  const auto G = build_g(pair, b, options.grid_size, options.scheme, options.tol_zero);
  cert.g_curve = G.g;
  cert.g_dot_L2_sq = G.g_dot_L2_sq;
  cert.g_dot_sup = G.g_dot_sup;

  const double margin = G.g_tilde_sup + 1.0;
  cert.M_box = GridSpec{b - Vec3::Constant(margin), b + Vec3::Constant(margin), options.lipschitz_points,
                        options.lipschitz_time_nodes};
  cert.M_used = lipschitz_and_C(pair, cert.M_box, options.exec).M;

  const double T = pair.period;
  cert.epsilon_threshold = epsilon_threshold(cert.M_used, T, mode);
  cert.epsilon = options.epsilon_fraction * cert.epsilon_threshold;
  if (cert.epsilon * G.g_dot_sup > 1.0) {
    cert.epsilon = 1.0 / G.g_dot_sup;
    cert.notes.push_back("epsilon clipped to 1/sup|g'| to stay in K");
  }
  cert.witness = witness_trajectory(b, G, cert.epsilon);

  const auto value = action_value(*cert.witness, pair);
  cert.action_value = value.infinite ? std::numeric_limits<double>::infinity() : value.value;

  const double e = cert.epsilon;
  if (mode == WitnessMode::theorem2) {
    cert.theoretical_bound =
        -e * G.g_dot_L2_sq * (1.0 - e * (2.0 * kPi + cert.M_used * T) / kPi) - varphi(pair, b);
  } else {
    cert.theoretical_bound = -e * G.g_dot_L2_sq * (1.0 - e * (kPi + cert.M_used * T) / kPi);
  }
  cert.negative = !value.infinite && value.value < 0.0;
  cert.bound_ok = !value.infinite && value.value <= cert.theoretical_bound + options.tol_quad;
  return cert;
}

WitnessCertificate certify_lemma_negative(const PotentialPair& pair, const WitnessOptions& options) {
  const double phi_max = max_abs_phi_sample(pair, options.candidates);
  if (phi_max > options.tol_zero)
    throw Error(ErrorKind::PreconditionViolated,
                "phi_zero certificate needs Phi = 0, found |Phi| = " + fmt(phi_max));
  const Vec3 b = find_base_point(pair, options.candidates.points(), options.tol_zero, options.scan_time_nodes,
                                 options.exec);
  auto cert = build_witness(pair, b, WitnessMode::phi_zero, options);
  if (!cert.negative || !cert.bound_ok) {
    std::ostringstream os;
    os.precision(17);
    os << "witness at " << describe(b) << " has I0(p) = " << cert.action_value << " against bound "
       << cert.theoretical_bound;
    throw Error(ErrorKind::CertificateFailed, os.str());
  }
  return cert;
}

Theorem2Result certify_theorem2(const PotentialPair& pair, const std::vector<Vec3>& bases,
                                const Theorem2Options& options) {
  if (bases.empty()) throw Error(ErrorKind::PreconditionViolated, "empty base sequence");
  const double T = pair.period;
  const int n_time = options.shell_time_nodes;
  Theorem2Result out;
  for (const auto& b : bases) {
    if (pair.singular_ball_containing(b))
      throw Error(ErrorKind::PreconditionViolated, "base point " + describe(b) + " is inside a singular ball");
    RatioRow row;
    row.base_point = b;
    row.radius = b.norm();
    row.varphi = varphi(pair, b, options.varphi_time_nodes);
    row.tilde_L2 = std::sqrt(tilde_A_L2_sq(pair, b, static_cast<int>(options.witness.grid_size)));

    std::vector<Vec3> shell;
    for (double r : {row.radius - T, row.radius, 2.0 * row.radius}) {
      if (r <= 0.0) continue;
      const auto s = fibonacci_sphere(options.shell_points, r);
      shell.insert(shell.end(), s.begin(), s.end());
    }
    row.shell_max_grad_phi = std::max(0.0, max_over_indices(
                                               shell.size(),
                                               [&](std::size_t i) {
                                                 if (pair.singular_ball_containing(shell[i])) return 0.0;
                                                 double m = 0.0;
                                                 for (int j = 0; j < n_time; ++j)
                                                   m = std::max(m, derivatives(pair, T * j / n_time, shell[i])
                                                                       .grad_Phi.norm());
                                                 return m;
                                               },
                                               options.witness.exec));
    if (row.tilde_L2 > 0.0) {
      row.r1 = std::abs(row.varphi) / (row.tilde_L2 * row.tilde_L2);
      row.r2 = row.shell_max_grad_phi / row.tilde_L2;
    } else {
      row.r1 = row.r2 = std::numeric_limits<double>::infinity();
    }
    out.rows.push_back(row);
  }

  auto decreasing = [&](auto field) {
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
      const double prev = field(out.rows[i - 1]);
      const double cur = field(out.rows[i]);
      if (!(cur < prev || (cur == 0.0 && prev == 0.0))) return false;
    }
    return true;
  };
  out.r1_decreasing = decreasing([](const RatioRow& r) { return r.r1; });
  out.r2_decreasing = decreasing([](const RatioRow& r) { return r.r2; });
  out.trend_ok = out.r1_decreasing && out.r2_decreasing;

  out.certificate = build_witness(pair, bases.back(), WitnessMode::theorem2, options.witness);
  if (!out.trend_ok) out.certificate.notes.push_back("ratio trend not decreasing over the supplied bases");
  out.certificate.notes.push_back("shell maximum sampled on Fibonacci spheres of radii |b|-T, |b|, 2|b| with " +
                                  std::to_string(options.shell_points) + " points");
  return out;
}

FlowResult certify_theorem3_flow(const PotentialPair& pair, const Vec3& b0, const FlowOptions& options) {
  const double T = pair.period;
  const double phi_b = varphi(pair, b0);
  if (phi_b < -options.tol_phi)
    throw Error(ErrorKind::PreconditionViolated,
                "phi(b0) = " + fmt(phi_b) + " is below the maximum; b0 is not in the argmax set");

  ActionOptions aopt;
  aopt.rho_cap = options.rho_cap;
  auto x = PeriodicTrajectory::constant(b0, options.grid_size, T, options.scheme);
  auto grad = grad_action(x, pair, aopt);
  double gmax = 0.0;
  for (const auto& g : grad) gmax = std::max(gmax, g.norm());
  if (!(gmax > options.tol_equilibrium))
    throw Error(ErrorKind::EquilibriumStart, "discrete gradient vanishes at the constant trajectory " + describe(b0));

  const double step_init = options.step_init > 0.0 ? options.step_init : 1.0 / x.step();
  FlowResult out;
  double value = action_value(x, pair, aopt).value;
  out.values.push_back(value);
  double eta = step_init;

  for (int step = 0; step < options.max_flow_steps; ++step) {
    if (step > 0) grad = grad_action(x, pair, aopt);
    double gsq = 0.0;
    for (const auto& g : grad) gsq += g.squaredNorm();

    bool accepted = false;
    for (int k = 0; k <= options.max_backtracks; ++k, eta *= options.beta) {
      std::vector<Vec3> trial(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - eta * grad[i];
      auto candidate = x.with_samples(std::move(trial));
      if (sup_speed(candidate) > options.rho_cap) continue;
      const auto v = action_value(candidate, pair, aopt);
      if (v.infinite || !(v.value <= value - options.armijo_c1 * eta * gsq)) continue;
      x = std::move(candidate);
      value = v.value;
      accepted = true;
      break;
    }
    if (!accepted)
      throw Error(ErrorKind::FlowStalled, "line search failed after " + std::to_string(out.accepted_steps) +
                                              " steps at I = " + fmt(value));
    ++out.accepted_steps;
    out.values.push_back(value);
    eta = std::min(step_init, eta / options.beta);
    if (value < -options.tol_zero) break;
  }
  if (!(value < -options.tol_zero))
    throw Error(ErrorKind::FlowStalled, "no negative action within " + std::to_string(options.max_flow_steps) +
                                            " steps, I = " + fmt(value));

  auto& cert = out.certificate;
  cert.mode = WitnessMode::theorem3_flow;
  cert.base_point = b0;
  cert.action_value = value;
  cert.theoretical_bound = -phi_b;
  cert.negative = true;
  cert.bound_ok = value <= cert.theoretical_bound;
  cert.witness = x;
  cert.notes.push_back("descent uses the exact gradient of the discrete action");
  return out;
}

DivergenceTable divergence_probe(const PotentialPair& pair, const std::vector<Vec3>& approach,
                                 std::size_t grid_size) {
  DivergenceTable table;
  for (const auto& b : approach) {
    const auto G = build_g(pair, b, grid_size);
    DivergenceRow row;
    row.base_point = b;
    row.radius = b.norm();
    row.g_dot_L2_sq = G.g_dot_L2_sq;
    row.g_dot_sup = G.g_dot_sup;
    row.ratio = G.g_dot_L2_sq / G.g_dot_sup;
    row.epsilon = 1.0 / G.g_dot_sup;
    row.action = action_value(witness_trajectory(b, G, row.epsilon), pair);
    table.rows.push_back(row);
  }
  table.strictly_decreasing = true;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].action.infinite) table.strictly_decreasing = false;
    if (i > 0 && !(table.rows[i].action < table.rows[i - 1].action)) table.strictly_decreasing = false;
  }
  return table;
}

}  // namespace lorentz
