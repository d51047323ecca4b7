// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "lorentz/action.hpp"
#include "lorentz/catalog.hpp"
#include "lorentz/cli.hpp"
#include "lorentz/dynamics.hpp"
#include "lorentz/optimizer.hpp"
#include "lorentz/report.hpp"
#include "lorentz/sampling.hpp"
#include "lorentz/trajectory.hpp"
#include "lorentz/witness.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace lorentz;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome witness_negativity() {
  const auto pulse = catalog::gaussian_pulse({}, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = certify_lemma_negative(pulse);
  const double elapsed = seconds_since(t0);
  const double M = c.M_used, T = 1.0;
  const double eps = 0.5 * kPi / (kPi + M * T);
  const double bound = -eps * c.g_dot_L2_sq * (1.0 - eps * (kPi + M * T) / kPi);
  // At the pulse centre A~(t, 0) = sin(2 pi t) e1, so ||g'||_2^2 = 1/2.
  const bool ok = c.negative && c.base_point.norm() == 0.0 && std::abs(c.epsilon - eps) <= 1e-15 &&
                  std::abs(c.g_dot_L2_sq - 0.5) <= 1e-12 && c.action_value <= bound + 1e-6 && elapsed < 1.0;
  return {ok, format("I0=%.9f bound=%.9f eps=%.6f M=%.6f time=%.3fs", c.action_value, bound, c.epsilon, M, elapsed)};
}

Outcome degenerate_bound() {
  const double T = 1.0;
  const auto pair = catalog::spatially_constant({1.0, Vec3::UnitX()}, T);
  WitnessOptions opt;
  const auto c = build_witness(pair, Vec3::Zero(), WitnessMode::phi_zero, opt);
  // p' = -(1/2) sin(2 pi t) e1, so Psi = int (1 - sqrt(1 - sin^2/4)) and eps^2 ||g'||^2 = 1/8.
  const int n = 4096;
  double psi_quad = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(2.0 * kPi * i / n);
    psi_quad += (1.0 - std::sqrt(1.0 - 0.25 * s * s)) / n;
  }
  const double psi_closed = 1.0 - (2.0 / kPi) * std::comp_ellint_2(0.5);
  const double expected = -0.125 + (psi_quad - 0.125);
  const double rel = std::abs(c.action_value - expected) / std::abs(expected);
  const bool ok = c.M_used == 0.0 && c.epsilon == 0.5 && std::abs(psi_quad - psi_closed) <= 1e-14 && rel <= 1e-8;
  return {ok, format("I0=%.15f expected=%.15f rel=%.2e", c.action_value, expected, rel)};
}

Outcome theorem2_trend() {
  const double T = 1.0;
  catalog::GaussianPulse a;
  a.width = std::sqrt(8.0);
  const auto pair = catalog::sum({catalog::gaussian_pulse(a, T), catalog::gaussian_well({1.0, 1.0, Vec3::Zero()}, T)});
  std::vector<Vec3> bases;
  for (int n = 2; n <= 6; ++n) bases.push_back(Vec3(n, 0, 0));
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = certify_theorem2(pair, bases);
  const double elapsed = seconds_since(t0);
  bool strict = true, oracle = true;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double n = static_cast<double>(i + 2);
    const double expected = 2.0 * std::exp(-0.75 * n * n);
    if (std::abs(r.rows[i].r1 - expected) > 1e-6 * expected) oracle = false;
    if (i > 0 && !(r.rows[i].r1 < r.rows[i - 1].r1)) strict = false;
  }
  const auto& c = r.certificate;
  const double eps = 0.5 / (3.0 + c.M_used * T / kPi);
  const bool ok = r.rows.size() == 5 && strict && oracle && r.r1_decreasing && c.action_value < 0.0 &&
                  std::abs(c.epsilon - eps) <= 1e-15 && elapsed < 5.0;
  return {ok, format("r1[2..6]=%.3e..%.3e I(p)=%.6e eps=%.6f time=%.3fs", r.rows.front().r1, r.rows.back().r1,
                     c.action_value, c.epsilon, elapsed)};
}

Outcome theorem3_flow() {
  const auto pulse = catalog::gaussian_pulse({}, 1.0);
  FlowOptions opt;
  opt.grid_size = 64;
  const auto r = certify_theorem3_flow(pulse, Vec3::Zero(), opt);
  bool monotone = true;
  for (std::size_t i = 1; i < r.values.size(); ++i)
    if (r.values[i] > r.values[i - 1]) monotone = false;
  const double last = r.values.back();
  const bool ok = r.accepted_steps <= 200 && last < -1e-8 && monotone && r.certificate.action_value == last;
  return {ok, format("steps=%d I=%.6e monotone=%d", r.accepted_steps, last, monotone ? 1 : 0)};
}

Outcome gauge_invariance() {
  const double T = 1.0, w = 2.0 * kPi / T;
  const auto pulse = catalog::gaussian_pulse({}, T);
  GaugeFunction f;
  f.value = [w](double t, const Vec3& x) { return x.x() * std::sin(w * t); };
  f.dt = [w](double t, const Vec3& x) { return x.x() * w * std::cos(w * t); };
  f.grad = [w](double t, const Vec3&) { return Vec3(std::sin(w * t), 0, 0); };
  f.dt_grad = [w](double t, const Vec3&) { return Vec3(w * std::cos(w * t), 0, 0); };
  f.hessian = [](double, const Vec3&) { return Mat3::Zero().eval(); };
  const auto gauged = gauge_transform(pulse, f);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.0, T);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = ut(rng);
    const Vec3 x = random_point(rng, Vec3::Constant(-3.0), Vec3::Constant(3.0));
    const auto a = eval_fields(pulse, t, x);
    const auto b = eval_fields(gauged, t, x);
    worst = std::max({worst, (a.electric - b.electric).norm(), (a.magnetic - b.magnetic).norm()});
  }
  const bool ok = gauged.has_analytic_derivatives() && worst <= 1e-8;
  return {ok, format("max |dE|,|dB| = %.3e over 100 probes", worst)};
}

Outcome minimizer_certification() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / format("lorentz_acceptance_%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);
  const json config = {{"potential", {{"catalog", "gaussian_pulse"}}}, {"period", 1.0}, {"grid_size", 256}};
  {
    std::ofstream(dir / "config.json") << config.dump(2);
  }
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  const int code = cli::run({"lorentz_orbits", "--config", (dir / "config.json").string(), "--out", dir.string(),
                             "minimize"},
                            out, err);
  const double elapsed = seconds_since(t0);
  if (code != 0) {
    fs::remove_all(dir);
    return {false, format("exit code %d: %s", code, err.str().c_str())};
  }
  json report;
  std::ifstream(dir / "minimize.json") >> report;
  const auto q = report::trajectory_from_json(report["result"]["trajectory"]);
  fs::remove_all(dir);

  const auto pulse = catalog::gaussian_pulse({}, 1.0);
  const auto v = verify(q, pulse);
  const double I = v.total.value;
  const double tilde = norms(decompose(q).oscillation).sup_norm;
  const double el = v.el_residual_sup.value_or(INFINITY);
  const auto bound = velocity_bound(pulse, GridSpec{});
  const double C = bound.lipschitz.C, T = 1.0;
  const double rho = T * C / std::sqrt(1.0 + T * T * C * C);
  const double per = periodicity_residual(pulse, q).residual;
  const bool ok = q.size() == 256 && !v.total.infinite && I < 0.0 && tilde > 1e-4 && el <= 1e-3 &&
                  v.sup_speed <= rho + 1e-6 && per <= 1e-2 && elapsed < 60.0;
  return {ok, format("I=%.9f tilde=%.4f EL=%.2e speed=%.5f rho=%.5f periodicity=%.2e time=%.2fs", I, tilde, el,
                     v.sup_speed, rho, per, elapsed)};
}

Outcome magnetostatic_nonnegativity() {
  const double T = 1.0;
  const auto pair = catalog::magnetostatic({}, T);
  const auto lip = lipschitz_and_C(pair, GridSpec{});
  RandomTrajectoryOptions opt;
  opt.center_spread = 2.0;
  opt.max_speed = 0.999;
  const std::size_t count = 10000;
  const auto values = map_indices<double>(
      count,
      [&](std::size_t i) {
        const auto q = random_k_trajectory(mix_seed(11, i), 64, T, opt);
        return action_value(q, pair).value;
      },
      Execution::parallel);
  const double min_I = *std::min_element(values.begin(), values.end());
  std::mt19937_64 rng(12);
  bool zero = true;
  for (int k = 0; k < 100; ++k) {
    const auto q = PeriodicTrajectory::constant(random_point(rng, Vec3::Constant(-3), Vec3::Constant(3)), 64, T);
    const auto r = action_value(q, pair);
    if (r.infinite || r.value != 0.0) zero = false;
  }
  const bool ok = lip.M < kPi / (2.0 * T) && min_I >= -1e-9 && zero;
  return {ok, format("M=%.4f < %.4f, min I over 1e4 = %.3e, constants exact zero=%d", lip.M, kPi / (2 * T), min_I,
                     zero ? 1 : 0)};
}

Outcome gradient_check() {
  const double T = 1.0;
  const auto pair = catalog::sum({catalog::gaussian_pulse({}, T), catalog::gaussian_well({1.0, 1.0, Vec3::Zero()}, T)});
  RandomTrajectoryOptions opt;
  opt.center_spread = 1.0;
  opt.max_speed = 0.9;
  const double step = 1e-6;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto q = random_k_trajectory(mix_seed(21, s), 64, T, opt);
    const auto g = grad_action(q, pair);
    double gmax = 0.0, err = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (int c = 0; c < 3; ++c) {
        std::vector<Vec3> plus(q.samples().begin(), q.samples().end()), minus = plus;
        plus[i][c] += step;
        minus[i][c] -= step;
        const double fd =
            (action_value(q.with_samples(plus), pair).value - action_value(q.with_samples(minus), pair).value) /
            (2.0 * step);
        gmax = std::max(gmax, std::abs(g[i][c]));
        err = std::max(err, std::abs(fd - g[i][c]));
      }
    worst = std::max(worst, err / gmax);
  }
  return {worst <= 1e-5, format("max relative error %.3e over 20 trajectories", worst)};
}

Outcome inequality_suite() {
  const double T = 1.0;
  const auto pulse = catalog::gaussian_pulse({}, T);
  RandomTrajectoryOptions opt;
  opt.max_speed = 1.0;
  opt.center_spread = 3.0;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  int pw = 0, tilde = 0, psi_ok = 0;
  double worst_translation = 0.0;
  const int count = 1000;
  for (int k = 0; k < count; ++k) {
    const auto q = random_k_trajectory(mix_seed(32, k), 128, T, opt);
    if (poincare_wirtinger_check(q).ok) ++pw;
    if (tilde_sup_check(q).ok) ++tilde;
    const auto v = derivative(q);
    double kinetic = 0.0;
    for (const auto& x : v) kinetic += q.step() * x.squaredNorm();
    if (psi(q).value <= kinetic) ++psi_ok;
    Vec3 u(normal(rng), normal(rng), normal(rng));
    u.normalize();
    double integral = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) integral += q.step() * v[i].dot(pulse.A(q.time(i), q[i] + 1e3 * u));
    worst_translation = std::max(worst_translation, std::abs(integral));
  }
  const bool ok = pw == count && tilde == count && psi_ok == count && worst_translation <= 1e-3;
  return {ok, format("PW %d/%d, tilde<=T %d/%d, Psi<=int|q'|^2 %d/%d, translation %.2e", pw, count, tilde, count,
                     psi_ok, count, worst_translation)};
}

// Closed-form gyration in B = B0 e3 from the origin with momentum p0 e1.
struct Gyration {
  double B0, p0;
  double gamma() const { return std::sqrt(1.0 + p0 * p0); }
  double omega() const { return B0 / gamma(); }
  double period() const { return 2.0 * kPi / omega(); }
  PhaseState at(double t) const {
    const double w = omega(), r = p0 / B0;
    PhaseState s;
    s.time = t;
    s.position = Vec3(r * std::sin(w * t), r * (std::cos(w * t) - 1.0), 0.0);
    s.momentum = Vec3(p0 * std::cos(w * t), -p0 * std::sin(w * t), 0.0);
    return s;
  }
};

double phase_error(const PhaseState& a, const PhaseState& b) {
  return (a.position - b.position).norm() + (a.momentum - b.momentum).norm();
}

Outcome dynamics_oracle() {
  const Gyration gy{1.0, 1.0};
  const auto pair = catalog::uniform_b(Vec3(0, 0, gy.B0), 1.0);
  const auto start = gy.at(0.0);
  const double Tg = gy.period();
  const double closure = phase_error(integrate(pair, start, Tg, 10000).back(), start);
  const double e1 = phase_error(integrate(pair, start, Tg, 1000).back(), gy.at(Tg));
  const double e2 = phase_error(integrate(pair, start, Tg, 2000).back(), gy.at(Tg));
  const double order = std::log2(e1 / e2);

  // |p(t)| <= t C from rest in a purely electric well, where |dp/dt| = |grad Phi| <= C.
  const auto well = catalog::gaussian_well({1.0, 1.0, Vec3::Zero()}, 1.0);
  const double C = lipschitz_and_C(well, GridSpec{Vec3::Constant(-3), Vec3::Constant(3), 61, 4}).C;
  std::mt19937_64 rng(41);
  double worst = -INFINITY;
  for (int k = 0; k < 20; ++k) {
    PhaseState s;
    s.position = random_point(rng, Vec3::Constant(-2), Vec3::Constant(2));
    for (const auto& st : integrate(well, s, 5.0, 2000))
      worst = std::max(worst, st.momentum.norm() - st.time * C);
  }
  const bool ok = closure <= 1e-8 && order >= 3.7 && order <= 4.3 && worst <= 1e-12;
  return {ok, format("closure=%.2e order=%.3f max(|p|-tC)=%.2e", closure, order, worst)};
}

Outcome divergence_probe_check() {
  const double T = 1.0;
  const auto pair = catalog::singular_oscillation({}, T);
  std::vector<Vec3> approach;
  for (int k = 1; k <= 6; ++k) approach.push_back(std::ldexp(1.0, -k) * Vec3::UnitY());
  const auto table = divergence_probe(pair, approach);
  double worst = 0.0;
  bool strict = true;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    // A~(t, b) = sin(2 pi t/T) e1 / |b|: ||g'||_2^2 = T / (2|b|^2), ||g'||_inf = 1/|b|.
    const double expected = T / (2.0 * r.radius);
    worst = std::max(worst, std::abs(r.ratio - expected) / expected);
    if (r.action.infinite) strict = false;
    if (i > 0 && !(r.action.value < table.rows[i - 1].action.value)) strict = false;
  }
  const bool ok = table.rows.size() == 6 && worst <= 1e-3 && strict && table.strictly_decreasing;
  return {ok, format("ratio rel err %.2e, I(p) %.4f -> %.4f", worst, table.rows.front().action.value,
                     table.rows.back().action.value)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"witness negativity", witness_negativity},
      {"degenerate exact bound", degenerate_bound},
      {"ratio trend and certificate", theorem2_trend},
      {"descent flow from the pulse centre", theorem3_flow},
      {"gauge invariance", gauge_invariance},
      {"minimizer certification", minimizer_certification},
      {"magnetostatic non-negativity", magnetostatic_nonnegativity},
      {"gradient vs finite differences", gradient_check},
      {"inequality suite", inequality_suite},
      {"dynamics oracle", dynamics_oracle},
      {"singular divergence probe", divergence_probe_check},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
