#include "lorentz/optimizer.hpp"

#include "lorentz/error.hpp"
#include "lorentz/kernels.hpp"
#include "lorentz/sampling.hpp"
#include "lorentz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lorentz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double symbol(int k, std::size_t n, double period, DerivativeScheme scheme) {
  if (scheme == DerivativeScheme::spectral) return 2.0 * std::numbers::pi * k / period;
  const double h = period / static_cast<double>(n);
  return std::sin(2.0 * std::numbers::pi * k / static_cast<double>(n)) / h;
}

std::vector<Vec3> apply_per_component(const std::vector<Vec3>& in, const spectral::Multiplier& m) {
  const std::size_t n = in.size();
  std::vector<Vec3> out(n);
  std::vector<double> a(n), b(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) a[i] = in[i][c];
    spectral::apply_multiplier(a, b, m);
    for (std::size_t i = 0; i < n; ++i) out[i][c] = b[i];
  }
  return out;
}

double mu_for(const MinimizeConfig& config, double period) {
  if (config.preconditioner_mu > 0.0) return config.preconditioner_mu;
  const double w = 2.0 * std::numbers::pi / period;
  return w * w;
}

ActionOptions action_options(const MinimizeConfig& config) {
  ActionOptions a;
  a.rho_cap = config.speed_cap;
  a.lambda_margin = config.lambda_margin;
  return a;
}

double margin_of(const MinimizeConfig& config, double period) {
  return config.lambda_margin < 0.0 ? default_lambda_margin(period) : config.lambda_margin;
}

WitnessCertificate witness_for_start(const PotentialPair& pair, const MinimizeConfig& config) {
  WitnessOptions w = config.witness;
  w.grid_size = config.grid_size;
  w.scheme = config.scheme;
  w.exec = config.exec;
  const Vec3 b = find_base_point(pair, w.candidates.points(), w.tol_zero, w.scan_time_nodes, w.exec);
  auto cert = build_witness(pair, b, WitnessMode::phi_zero, w);
  if (!cert.negative)
    throw Error(ErrorKind::CertificateFailed,
                "witness start has I(p) = " + fmt(cert.action_value) + ", not negative");
  return cert;
}

PeriodicTrajectory start_from(const PotentialPair& pair, const MinimizeConfig& config, std::uint64_t seed,
                              std::size_t index, const std::optional<PeriodicTrajectory>& witness) {
  const double T = pair.period;
  const std::size_t n = config.grid_size;
  auto perturbed = [&](const PeriodicTrajectory& base) {
    if (index == 0 || config.perturbation <= 0.0) return base;
    RandomTrajectoryOptions ro;
    ro.scheme = config.scheme;
    const auto r = random_k_trajectory(mix_seed(seed, index), base.size(), T, ro);
    const Vec3 rmean = decompose(r).mean;
    std::vector<Vec3> s(base.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = base[i] + config.perturbation * (r[i] - rmean);
    return base.with_samples(std::move(s));
  };
  switch (config.start_mode) {
    case StartMode::witness: {
      if (!witness) throw Error(ErrorKind::PreconditionViolated, "witness start requested without a witness");
      return perturbed(*witness);
    }
    case StartMode::constant:
      return perturbed(PeriodicTrajectory::constant(config.start_point, n, T, config.scheme));
    case StartMode::random: {
      RandomTrajectoryOptions ro;
      ro.center = config.start_point;
      ro.max_speed = std::min(0.9, config.speed_cap);
      ro.scheme = config.scheme;
      return random_k_trajectory(mix_seed(seed, index), n, T, ro);
    }
    case StartMode::custom:
      if (!config.custom_start) throw Error(ErrorKind::ConfigError, "custom start mode without a start trajectory");
      return perturbed(*config.custom_start);
  }
  throw Error(ErrorKind::ConfigError, "unknown start mode");
}

struct RunOutput {
  StartOutcome outcome;
  std::optional<PeriodicTrajectory> trajectory;
  std::vector<IterateRecord> iterates;
};

RunOutput descend(const PotentialPair& pair, const MinimizeConfig& config, PeriodicTrajectory q) {
  RunOutput out;
  const auto aopt = action_options(config);
  const double mu = mu_for(config, pair.period);
  const double margin = margin_of(config, pair.period);

  if (sup_speed(q) > config.speed_cap) q = project_K(q, config.speed_cap);
  if (sup_speed(q) > config.speed_cap) {
    out.outcome.status = "start is above the speed cap after projection";
    return out;
  }
  if (!in_Lambda(q, pair, margin)) {
    out.outcome.status = "start leaves the Lambda margin";
    return out;
  }
  auto v0 = action_value(q, pair, aopt);
  if (v0.infinite) {
    out.outcome.status = "start has infinite action";
    return out;
  }
  double value = v0.value;
  out.outcome.start_value = value;
  const double h = q.step();

  std::string status = "max_iters";
  int iter = 0;
  for (;; ++iter) {
    const auto g = grad_action(q, pair, aopt);
    const auto d = apply_preconditioner_inverse(g, q.period(), q.scheme(), mu);

    std::vector<Vec3> full(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) full[i] = q[i] - d[i];
    double stationarity = kInf;
    try {
      const auto y = project_K(q.with_samples(std::move(full)), config.speed_cap);
      std::vector<Vec3> diff(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) diff[i] = q[i] - y[i];
      stationarity = 0.0;
      for (const auto& r : apply_preconditioner(diff, q.period(), q.scheme(), mu))
        stationarity = std::max(stationarity, r.norm() / h);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ProjectionStalled) throw;
    }

    IterateRecord rec{iter, value, stationarity, sup_speed(q), 0.0};
    if (stationarity <= config.grad_tol) {
      out.iterates.push_back(rec);
      status = "converged";
      break;
    }
    if (iter >= config.max_iters) {
      out.iterates.push_back(rec);
      break;
    }
    try {
      auto ls = line_search(q, value, g, d, pair, config);
      rec.step = ls.step;
      out.iterates.push_back(rec);
      q = std::move(ls.trajectory);
      value = ls.value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::LineSearchFailed) throw;
      out.iterates.push_back(rec);
      status = "stalled";
      break;
    }
  }
  out.outcome.ok = status != "stalled";
  out.outcome.status = status;
  out.outcome.value = value;
  out.outcome.iterations = iter;
  out.trajectory = std::move(q);
  return out;
}

}  // namespace

const char* to_string(StartMode mode) {
  switch (mode) {
    case StartMode::witness: return "witness";
    case StartMode::constant: return "constant";
    case StartMode::random: return "random";
    case StartMode::custom: return "custom";
  }
  return "unknown";
}

StartMode start_mode_from_string(const std::string& name) {
  if (name == "witness") return StartMode::witness;
  if (name == "constant") return StartMode::constant;
  if (name == "random") return StartMode::random;
  if (name == "custom") return StartMode::custom;
  throw Error(ErrorKind::ConfigError, "unknown start mode '" + name + "'");
}

PeriodicTrajectory project_K(const PeriodicTrajectory& q, double rho_cap) {
  const std::size_t n = q.size();
  const double cap = rho_cap * q.step();
  std::vector<Vec3> d(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = q[(i + 1) % n] - q[i];
    worst = std::max(worst, d[i].norm());
  }
  if (worst <= cap) return q;

  if (!std::isfinite(worst)) throw Error(ErrorKind::ProjectionStalled, "non-finite increments");
  const Vec3 mean = decompose(q).mean;
  const double tol = 1e-12 * cap;
  // Clip and re-zero alternately; if that has not met the cap after the last
  // sweep, a uniform rescale of the zero-sum increments does.
  constexpr int kSweeps = 16;
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    for (auto& inc : d) {
      const double len = inc.norm();
      if (len > cap) inc *= cap / len;
    }
    Vec3 avg = Vec3::Zero();
    for (const auto& inc : d) avg += inc;
    avg /= static_cast<double>(n);
    worst = 0.0;
    for (auto& inc : d) {
      inc -= avg;
      worst = std::max(worst, inc.norm());
    }
    if (worst <= cap + tol) break;
  }
  if (worst > cap + tol)
    for (auto& inc : d) inc *= cap / worst;

  std::vector<Vec3> s(n);
  s[0] = Vec3::Zero();
  for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + d[i - 1];
  Vec3 c = Vec3::Zero();
  for (const auto& x : s) c += x;
  c /= static_cast<double>(n);
  for (auto& x : s) x += mean - c;
  return q.with_samples(std::move(s));
}

std::vector<Vec3> apply_preconditioner_inverse(const std::vector<Vec3>& g, double period, DerivativeScheme scheme,
                                               double mu) {
  const std::size_t n = g.size();
  const double h = period / static_cast<double>(n);
  return apply_per_component(g, [=](int k) {
    if (2 * static_cast<std::size_t>(k) == n) return std::complex<double>(0.0, 0.0);
    const double s = symbol(k, n, period, scheme);
    return std::complex<double>(1.0 / (h * (mu + s * s)), 0.0);
  });
}

std::vector<Vec3> apply_preconditioner(const std::vector<Vec3>& d, double period, DerivativeScheme scheme,
                                       double mu) {
  const std::size_t n = d.size();
  const double h = period / static_cast<double>(n);
  return apply_per_component(d, [=](int k) {
    const double s = 2 * static_cast<std::size_t>(k) == n ? 0.0 : symbol(k, n, period, scheme);
    return std::complex<double>(h * (mu + s * s), 0.0);
  });
}

LineSearchResult line_search(const PeriodicTrajectory& q, double value, const std::vector<Vec3>& gradient,
                             const std::vector<Vec3>& direction, const PotentialPair& pair,
                             const MinimizeConfig& config) {
  for (const auto& v : direction)
    if (!v.allFinite()) throw Error(ErrorKind::PreconditionViolated, "search direction is not finite");
  const auto aopt = action_options(config);
  const double margin = margin_of(config, pair.period);
  double eta = config.step_init;
  for (int k = 0; k <= config.max_halvings; ++k, eta *= config.beta) {
    std::vector<Vec3> s(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) s[i] = q[i] - eta * direction[i];
    std::optional<PeriodicTrajectory> trial;
    try {
      trial = project_K(q.with_samples(std::move(s)), config.speed_cap);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ProjectionStalled) throw;
      continue;
    }
    if (sup_speed(*trial) > config.speed_cap || !in_Lambda(*trial, pair, margin)) continue;
    const auto v = action_value(*trial, pair, aopt);
    if (v.infinite) continue;
    double decrease = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) decrease += gradient[i].dot(q[i] - (*trial)[i]);
    if (v.value <= value - config.armijo_c1 * decrease) return {eta, std::move(*trial), v.value, k};
  }
  throw Error(ErrorKind::LineSearchFailed,
              "no acceptable step after " + std::to_string(config.max_halvings) + " halvings");
}

PeriodicTrajectory make_start(const PotentialPair& pair, const MinimizeConfig& config, std::uint64_t seed) {
  std::optional<PeriodicTrajectory> witness;
  if (config.start_mode == StartMode::witness) witness = witness_for_start(pair, config).witness;
  return start_from(pair, config, seed, 0, witness);
}

MinimizerResult minimize(const PotentialPair& pair, const MinimizeConfig& config) {
  if (!(config.speed_cap > 0.0 && config.speed_cap < 1.0))
    throw Error(ErrorKind::ConfigError, "speed_cap must lie in (0, 1)");
  if (!(config.beta > 0.0 && config.beta < 1.0) || !(config.armijo_c1 > 0.0 && config.armijo_c1 < 1.0))
    throw Error(ErrorKind::ConfigError, "beta and armijo_c1 must lie in (0, 1)");
  if (!(config.grad_tol > 0.0) || !(config.step_init > 0.0))
    throw Error(ErrorKind::ConfigError, "grad_tol and step_init must be positive");
  if (config.multistart_seeds.empty()) throw Error(ErrorKind::ConfigError, "empty multistart seed list");
  if (config.start_mode == StartMode::custom && !config.custom_start)
    throw Error(ErrorKind::ConfigError, "custom start mode without a start trajectory");

  std::optional<PeriodicTrajectory> witness;
  if (config.start_mode == StartMode::witness) witness = witness_for_start(pair, config).witness;

  const std::size_t starts = config.multistart_seeds.size();
  std::vector<RunOutput> runs(starts);
  for_each_index(
      starts,
      [&](std::size_t i) {
        const auto seed = config.multistart_seeds[i];
        try {
          runs[i] = descend(pair, config, start_from(pair, config, seed, i, witness));
        } catch (const Error& e) {
          runs[i].outcome.status = std::string(to_string(e.kind())) + ": " + e.what();
        }
        runs[i].outcome.seed = seed;
      },
      config.exec);

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < starts; ++i) {
    if (!runs[i].outcome.ok) continue;
    if (!best || runs[i].outcome.value < runs[*best].outcome.value) best = i;
  }
  if (!best) {
    std::string msg = "every start failed:";
    for (const auto& r : runs) msg += " [seed " + std::to_string(r.outcome.seed) + ": " + r.outcome.status + "]";
    throw Error(ErrorKind::AllStartsFailed, msg);
  }

  MinimizerResult result{*runs[*best].trajectory, {}, std::move(runs[*best].iterates), {}, 1.0, false, 0.0, {},
                         {}, *best, runs[*best].outcome.status};
  for (const auto& r : runs) result.starts.push_back(r.outcome);

  const auto& q = result.trajectory;
  result.action_report = verify(q, pair, action_options(config));
  const auto parts = decompose(q);
  for (const auto& x : parts.oscillation.samples()) result.tilde_sup = std::max(result.tilde_sup, x.norm());

  const auto bound = velocity_bound(pair, config.rho_grid, config.exec);
  result.rho_bound = bound.rho;
  result.rho_claimed = bound.claimed;

  auto& c = result.certification;
  c.non_constant = result.tilde_sup > 10.0 * config.grad_tol;
  c.negative_action = !result.action_report.total.infinite && result.action_report.total.value < -config.tol_zero;
  c.el_residual_ok =
      result.action_report.el_residual_sup && *result.action_report.el_residual_sup <= config.residual_tol;
  c.speed_below_rho = result.action_report.sup_speed <= result.rho_bound + config.speed_tol;

  if (config.check_periodicity) {
    try {
      result.periodicity_residual = periodicity_residual(pair, q).residual;
    } catch (const Error&) {
      result.periodicity_residual.reset();
    }
  }
  return result;
}

}  // namespace lorentz
