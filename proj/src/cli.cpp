#include "lorentz/cli.hpp"

#include "lorentz/catalog.hpp"
#include "lorentz/dynamics.hpp"
#include "lorentz/error.hpp"
#include "lorentz/report.hpp"
#include "lorentz/sampling.hpp"
#include "lorentz/witness.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

namespace lorentz::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::PreconditionViolated:
      return kConfig;
    case ErrorKind::SingularPoint:
    case ErrorKind::SingularTrajectory:
    case ErrorKind::SingularEncounter:
    case ErrorKind::NonFinite:
      return kSingular;
    case ErrorKind::NotAdmissible:
    case ErrorKind::UnboundedAbove:
    case ErrorKind::NoNonautonomousPoint:
      return kNotAdmissible;
    default:
      return kFailure;
  }
}

Tolerances tolerance_profile(const std::string& name) {
  Tolerances t;
  t.profile = name;
  if (name == "strict") {
    t.grad_tol = 1e-7;
    t.residual_tol = 1e-5;
    t.tol_quad = 1e-8;
  } else if (name != "default") {
    throw Error(ErrorKind::ConfigError, "unknown tolerance profile '" + name + "'");
  }
  return t;
}

std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Vec3 read_vec(const json& a, const char* what) {
  if (!a.is_array() || a.size() != 3) throw Error(ErrorKind::ConfigError, std::string(what) + " must be a 3-vector");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

std::vector<Vec3> read_points(const json& a, const char* what) {
  std::vector<Vec3> pts;
  if (!a.is_array()) throw Error(ErrorKind::ConfigError, std::string(what) + " must be a list of 3-vectors");
  for (const auto& p : a) pts.push_back(read_vec(p, what));
  return pts;
}

DerivativeScheme scheme_from(const std::string& s) {
  if (s == "spectral") return DerivativeScheme::spectral;
  if (s == "central2") return DerivativeScheme::central2;
  throw Error(ErrorKind::ConfigError, "unknown scheme '" + s + "'");
}

json tolerances_json(const Tolerances& t) {
  return {{"profile", t.profile},         {"grad_tol", t.grad_tol},
          {"residual_tol", t.residual_tol}, {"tol_quad", t.tol_quad},
          {"tol_zero", t.tol_zero},         {"gauge_tol_analytic", t.gauge_tol_analytic},
          {"gauge_tol_fd", t.gauge_tol_fd}, {"speed_tol", t.speed_tol}};
}

json minimize_json(const MinimizeConfig& m) {
  json seeds = json::array();
  for (auto s : m.multistart_seeds) seeds.push_back(s);
  return {{"grid_size", m.grid_size},
          {"scheme", to_string(m.scheme)},
          {"max_iters", m.max_iters},
          {"step_init", m.step_init},
          {"beta", m.beta},
          {"armijo_c1", m.armijo_c1},
          {"max_halvings", m.max_halvings},
          {"grad_tol", m.grad_tol},
          {"speed_cap", m.speed_cap},
          {"lambda_margin", m.lambda_margin},
          {"residual_tol", m.residual_tol},
          {"preconditioner_mu", m.preconditioner_mu},
          {"multistart_seeds", seeds},
          {"start_mode", to_string(m.start_mode)},
          {"start_point", report::vec(m.start_point)},
          {"perturbation", m.perturbation}};
}

struct Context {
  std::string command;
  RunConfig rc;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
  std::chrono::steady_clock::time_point started;
  std::string started_utc;
  json extra_meta = json::object();
};

json meta(const Context& ctx) {
  json m = {{"command", ctx.command},
            {"config_hash", config_hash(ctx.rc.effective)},
            {"seed", ctx.rc.seed},
            {"period", ctx.rc.period},
            {"grid_size", ctx.rc.grid_size},
            {"scheme", to_string(ctx.rc.scheme)},
            {"box", report::to_json(ctx.rc.box)},
            {"normalize_phi", ctx.rc.normalize_phi},
            {"tolerances", tolerances_json(ctx.rc.tol)}};
  for (auto it = ctx.extra_meta.begin(); it != ctx.extra_meta.end(); ++it) m[it.key()] = it.value();
  return m;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  f << text;
}

void write_report(const Context& ctx, const std::string& name, const json& result) {
  json doc = {{"meta", meta(ctx)}, {"result", result}};
  write_text(ctx.out_dir / (name + ".json"), doc.dump(2) + "\n");
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.started).count();
  json run = {{"started_utc", ctx.started_utc}, {"elapsed_seconds", elapsed}, {"report", name + ".json"}};
  write_text(ctx.out_dir / (name + ".meta.json"), run.dump(2) + "\n");
}

template <class Writer>
void write_csv(const Context& ctx, const std::string& name, Writer&& writer) {
  std::ofstream f(ctx.out_dir / name, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + (ctx.out_dir / name).string());
  writer(f);
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
}

/// Normalizes Phi when configured and records the shift in the report metadata.
PotentialPair prepared_pair(Context& ctx) {
  if (!ctx.rc.normalize_phi) return ctx.rc.pair;
  auto norm = normalize_phi(ctx.rc.pair, ctx.rc.box);
  ctx.extra_meta["phi_normalization"] = {{"sup_varphi", report::number(norm.sup_varphi)},
                                         {"argmax", report::vec(norm.argmax)}};
  return norm.pair;
}

std::vector<std::string> rejection_reasons(const AdmissibilityReport& r) {
  std::vector<std::string> reasons;
  if (!r.nonzero_electric_field) reasons.push_back("zero electric field");
  if (!r.coulomb_minorant_ok()) reasons.push_back("Coulomb minorant fails at a singular ball");
  return reasons;
}

void require_admissible(const PotentialPair& pair) {
  const auto reasons = rejection_reasons(admissibility_report(pair));
  if (!reasons.empty()) throw Error(ErrorKind::NotAdmissible, "pair not admissible: " + reasons.front());
}

WitnessOptions witness_options(const Context& ctx, std::size_t default_grid) {
  const json w = ctx.rc.effective.value("witness", json::object());
  WitnessOptions o;
  o.grid_size = w.value("grid_size", default_grid);
  if (ctx.rc.effective.contains("grid_override")) o.grid_size = ctx.rc.grid_size;
  o.candidates = ctx.rc.box;
  o.tol_quad = ctx.rc.tol.tol_quad;
  o.tol_zero = ctx.rc.tol.tol_zero;
  o.scheme = ctx.rc.scheme;
  return o;
}

int cmd_fields(Context& ctx, double t, const std::vector<double>& x) {
  const auto f = eval_fields(ctx.rc.pair, t, Vec3(x[0], x[1], x[2]));
  ctx.out << json{{"E", report::vec(f.electric)}, {"B", report::vec(f.magnetic)}}.dump() << "\n";
  return kOk;
}

int cmd_admissible(Context& ctx) {
  const auto rep = admissibility_report(ctx.rc.pair);
  json result = {{"report", report::to_json(rep)}};
  auto reasons = rejection_reasons(rep);
  try {
    const auto norm = normalize_phi(ctx.rc.pair, ctx.rc.box);
    result["phi_sup"] = report::number(norm.sup_varphi);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnboundedAbove) throw;
    reasons.push_back(std::string("phi unbounded above: ") + e.what());
  }
  result["admissible"] = reasons.empty();
  result["reasons"] = reasons;
  write_report(ctx, "admissible", result);
  if (!reasons.empty()) {
    print_error(ctx.err, "NotAdmissible", "pair not admissible: " + reasons.front(), kNotAdmissible);
    return kNotAdmissible;
  }
  return kOk;
}

int cmd_witness(Context& ctx, const std::string& mode) {
  const auto pair = prepared_pair(ctx);
  const json w = ctx.rc.effective.value("witness", json::object());
  ctx.extra_meta["witness_mode"] = mode;
  auto save_trajectory = [&](const std::optional<PeriodicTrajectory>& q) {
    if (q) write_csv(ctx, "witness_trajectory.csv", [&](std::ostream& os) { report::write_trajectory_csv(os, *q); });
  };

  if (mode == "phi_zero") {
    const auto opt = witness_options(ctx, 1024);
    ctx.extra_meta["witness_grid_size"] = opt.grid_size;
    const auto cert = certify_lemma_negative(pair, opt);
    write_report(ctx, "witness", report::to_json(cert));
    save_trajectory(cert.witness);
    return kOk;
  }
  if (mode == "theorem2") {
    std::vector<Vec3> bases;
    if (w.contains("bases")) {
      bases = read_points(w["bases"], "witness.bases");
    } else {
      for (int n = 2; n <= 6; ++n) bases.emplace_back(n, 0.0, 0.0);
    }
    Theorem2Options opt;
    opt.witness = witness_options(ctx, 1024);
    ctx.extra_meta["witness_grid_size"] = opt.witness.grid_size;
    const auto res = certify_theorem2(pair, bases, opt);
    write_report(ctx, "witness", report::to_json(res));
    write_csv(ctx, "ratios.csv", [&](std::ostream& os) { report::write_ratio_csv(os, res.rows); });
    save_trajectory(res.certificate.witness);
    if (!res.certificate.negative) {
      print_error(ctx.err, "CertificateFailed", "theorem2 witness has non-negative action", kFailure);
      return kFailure;
    }
    return kOk;
  }
  if (mode == "theorem3_flow") {
    FlowOptions opt;
    opt.grid_size = witness_options(ctx, 64).grid_size;
    opt.scheme = ctx.rc.scheme;
    const Vec3 b0 = w.contains("b0") ? read_vec(w["b0"], "witness.b0")
                                     : find_base_point(pair, ctx.rc.box.points(), ctx.rc.tol.tol_zero);
    ctx.extra_meta["witness_grid_size"] = opt.grid_size;
    const auto res = certify_theorem3_flow(pair, b0, opt);
    write_report(ctx, "witness", report::to_json(res));
    save_trajectory(res.certificate.witness);
    return kOk;
  }
  if (mode == "divergence") {
    std::vector<Vec3> approach;
    if (w.contains("approach")) {
      approach = read_points(w["approach"], "witness.approach");
    } else {
      const Vec3 c = pair.singular_set.empty() ? Vec3::Zero() : pair.singular_set.front().center;
      for (int k = 1; k <= 6; ++k) approach.push_back(c + std::ldexp(1.0, -k) * Vec3::UnitY());
    }
    const auto n = witness_options(ctx, 1024).grid_size;
    ctx.extra_meta["witness_grid_size"] = n;
    const auto table = divergence_probe(pair, approach, n);
    write_report(ctx, "witness", report::to_json(table));
    write_csv(ctx, "divergence.csv", [&](std::ostream& os) { report::write_divergence_csv(os, table); });
    return kOk;
  }
  throw Error(ErrorKind::ConfigError, "unknown witness mode '" + mode + "'");
}

int cmd_minimize(Context& ctx) {
  const auto pair = prepared_pair(ctx);
  require_admissible(pair);
  ctx.extra_meta["optimizer"] = minimize_json(ctx.rc.minimize);
  const auto res = minimize(pair, ctx.rc.minimize);
  write_report(ctx, "minimize", report::to_json(res));
  write_csv(ctx, "iterates.csv", [&](std::ostream& os) { report::write_iterates_csv(os, res.iterates); });
  write_csv(ctx, "trajectory.csv", [&](std::ostream& os) { report::write_trajectory_csv(os, res.trajectory); });
  const auto& c = res.certification;
  if (!(c.non_constant && c.negative_action && c.el_residual_ok && c.speed_below_rho)) {
    print_error(ctx.err, "CertificateFailed", "minimizer certification incomplete; see minimize.json", kFailure);
    return kFailure;
  }
  return kOk;
}

int cmd_simulate(Context& ctx, const std::string& path) {
  const auto q = report::load_trajectory(path);
  const std::size_t per_node = ctx.rc.effective.value("simulate", json::object()).value("steps_per_node", 64);
  const auto per = periodicity_residual(ctx.rc.pair, q, per_node);
  const auto orbit = integrate(ctx.rc.pair, per.start, q.period(), per.steps);
  double max_p = 0.0;
  for (const auto& s : orbit) max_p = std::max(max_p, s.momentum.norm());
  const auto bound = velocity_bound(ctx.rc.pair, ctx.rc.box);
  ctx.extra_meta["trajectory_file"] = path;
  write_report(ctx, "simulate", {{"periodicity", report::to_json(per)},
                                 {"max_momentum", report::number(max_p)},
                                 {"velocity_bound", report::to_json(bound)}});
  write_csv(ctx, "orbit.csv", [&](std::ostream& os) { report::write_orbit_csv(os, orbit); });
  return kOk;
}

int cmd_verify(Context& ctx, const std::string& path) {
  const auto pair = prepared_pair(ctx);
  const auto q = report::load_trajectory(path);
  ActionOptions opt;
  opt.rho_cap = ctx.rc.minimize.speed_cap;
  opt.lambda_margin = ctx.rc.minimize.lambda_margin;
  const auto rep = verify(q, pair, opt);
  ctx.extra_meta["trajectory_file"] = path;
  ctx.extra_meta["rho_cap"] = opt.rho_cap;
  json result = report::to_json(rep);
  result["grid_size"] = q.size();
  result["trajectory_scheme"] = to_string(q.scheme());
  write_report(ctx, "verify", result);
  return kOk;
}

int cmd_gauge(Context& ctx, const std::string& f) {
  const double T = ctx.rc.period;
  const auto g = catalog::gauge_from_expression(f, T);
  const json gcfg = ctx.rc.effective.value("gauge", json::object());
  const int probes = gcfg.value("probes", 100);

  std::mt19937_64 rng(mix_seed(ctx.rc.seed, 0));
  std::uniform_real_distribution<double> ut(0.0, T);
  const auto& base = ctx.rc.pair;
  const auto transformed = gauge_transform(base, g);

  double max_dE = 0.0, max_dB = 0.0, max_periodicity = 0.0;
  int used = 0;
  for (int i = 0; i < probes; ++i) {
    const double t = ut(rng);
    const Vec3 x = random_point(rng, ctx.rc.box.lo, ctx.rc.box.hi);
    max_periodicity = std::max(max_periodicity, std::abs(g.value(0.0, x) - g.value(T, x)));
    if (base.singular_ball_containing(x)) continue;
    const auto a = eval_fields(base, t, x);
    const auto b = eval_fields(transformed, t, x);
    max_dE = std::max(max_dE, (a.electric - b.electric).norm());
    max_dB = std::max(max_dB, (a.magnetic - b.magnetic).norm());
    ++used;
  }
  if (max_periodicity > 1e-10)
    throw Error(ErrorKind::ConfigError, "gauge function is not T-periodic: |f(0,x) - f(T,x)| = " +
                                            fmt(max_periodicity));
  const double tol = ctx.rc.tol.gauge_tol_fd;
  const bool agree = max_dE <= tol && max_dB <= tol;

  json cfg = ctx.rc.effective;
  cfg["potential"] = {{"gauge", {{"base", ctx.rc.effective["potential"]}, {"f", f}}}};
  cfg.erase("grid_override");
  write_text(ctx.out_dir / "gauge_config.json", cfg.dump(2) + "\n");
  ctx.extra_meta["gauge_function"] = f;
  write_report(ctx, "gauge", {{"probes", used},
                              {"max_delta_E", report::number(max_dE)},
                              {"max_delta_B", report::number(max_dB)},
                              {"tolerance", tol},
                              {"derivatives", "finite differences"},
                              {"agree", agree},
                              {"transformed_config", "gauge_config.json"}});
  if (!agree) {
    print_error(ctx.err, "CertificateFailed", "fields differ after the gauge transformation", kFailure);
    return kFailure;
  }
  return kOk;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunConfig load_config(json config, const Overrides& overrides) {
  if (!config.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  if (overrides.seed) config["seed"] = *overrides.seed;
  if (overrides.grid) {
    config["grid_size"] = *overrides.grid;
    config["grid_override"] = true;
  }
  if (overrides.tol_profile) config["tol_profile"] = *overrides.tol_profile;

  RunConfig rc;
  try {
    rc.period = config.value("period", 1.0);
    if (!(rc.period > 0.0)) throw Error(ErrorKind::ConfigError, "period must be positive");
    rc.grid_size = config.value("grid_size", std::size_t{256});
    if (rc.grid_size < 8 || rc.grid_size % 2 != 0)
      throw Error(ErrorKind::ConfigError, "grid_size must be even and at least 8");
    rc.scheme = scheme_from(config.value("scheme", std::string("spectral")));
    rc.box = report::grid_from_json(config.value("box", json::object()));
    rc.normalize_phi = config.value("normalize_phi", true);
    rc.seed = config.value("seed", std::uint64_t{0});
    rc.tol = tolerance_profile(config.value("tol_profile", std::string("default")));
    if (!config.contains("potential")) throw Error(ErrorKind::ConfigError, "config needs a 'potential' entry");
    rc.pair = catalog::from_json(config["potential"], rc.period);

    const json o = config.value("optimizer", json::object());
    auto& m = rc.minimize;
    m.grid_size = rc.grid_size;
    m.scheme = rc.scheme;
    m.max_iters = o.value("max_iters", m.max_iters);
    m.step_init = o.value("step_init", m.step_init);
    m.beta = o.value("beta", m.beta);
    m.armijo_c1 = o.value("armijo_c1", m.armijo_c1);
    m.max_halvings = o.value("max_halvings", m.max_halvings);
    m.grad_tol = o.value("grad_tol", rc.tol.grad_tol);
    m.speed_cap = o.value("speed_cap", m.speed_cap);
    m.lambda_margin = o.value("lambda_margin", m.lambda_margin);
    m.tol_zero = rc.tol.tol_zero;
    m.residual_tol = o.value("residual_tol", rc.tol.residual_tol);
    m.speed_tol = rc.tol.speed_tol;
    m.preconditioner_mu = o.value("preconditioner_mu", m.preconditioner_mu);
    m.perturbation = o.value("perturbation", m.perturbation);
    m.start_mode = start_mode_from_string(o.value("start_mode", std::string("witness")));
    if (o.contains("start_point")) m.start_point = read_vec(o["start_point"], "optimizer.start_point");
    if (o.contains("start_trajectory")) m.custom_start = report::load_trajectory(o["start_trajectory"].get<std::string>());
    if (o.contains("multistart_seeds")) {
      m.multistart_seeds = o["multistart_seeds"].get<std::vector<std::uint64_t>>();
    } else {
      const int starts = o.value("starts", 1);
      if (starts < 1) throw Error(ErrorKind::ConfigError, "optimizer.starts must be at least 1");
      m.multistart_seeds.clear();
      for (int i = 0; i < starts; ++i) m.multistart_seeds.push_back(rc.seed + static_cast<std::uint64_t>(i));
    }
    m.witness.candidates = rc.box;
    m.witness.tol_zero = rc.tol.tol_zero;
    m.witness.tol_quad = rc.tol.tol_quad;
    m.rho_grid = rc.box;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("config: ") + e.what());
  }
  rc.effective = std::move(config);
  return rc;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic orbits of a relativistic charge in a periodic electromagnetic potential"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".", tol_profile;
  std::uint64_t seed = 0;
  std::size_t grid = 0;
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "base seed");
  auto* grid_opt = app.add_option("--grid", grid, "number of time nodes N");
  auto* tol_opt = app.add_option("--tol-profile", tol_profile, "strict or default")
                      ->check(CLI::IsMember({"strict", "default"}));

  double t = 0.0;
  std::vector<double> x = {0.0, 0.0, 0.0};
  auto* fields = app.add_subcommand("fields", "print E and B at one point");
  auto* t_opt = fields->add_option("--t", t, "time");
  auto* x_opt = fields->add_option("--x", x, "position x1 x2 x3")->expected(3);
  auto* admissible = app.add_subcommand("admissible", "audit membership in the admissible class");
  std::string mode;
  auto* witness = app.add_subcommand("witness", "build and certify a negative-action trajectory");
  auto* mode_opt = witness->add_option("--mode", mode, "phi_zero, theorem2, theorem3_flow or divergence")
                       ->check(CLI::IsMember({"phi_zero", "theorem2", "theorem3_flow", "divergence"}));
  auto* minimize_cmd = app.add_subcommand("minimize", "projected descent on the discrete action");
  std::string trajectory_path;
  auto* simulate = app.add_subcommand("simulate", "integrate the Hamiltonian flow from a trajectory's start");
  simulate->add_option("--trajectory", trajectory_path, "trajectory CSV or JSON")->required();
  auto* verify_cmd = app.add_subcommand("verify", "action report with Euler-Lagrange residual");
  verify_cmd->add_option("--trajectory", trajectory_path, "trajectory CSV or JSON")->required();
  std::string gauge_f;
  auto* gauge = app.add_subcommand("gauge", "apply a gauge transformation and compare fields");
  auto* f_opt = gauge->add_option("--f", gauge_f, "gauge function expression in t, x1, x2, x3");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    json config;
    {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorKind::ConfigError, "cannot open config " + config_path);
      try {
        in >> config;
      } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
      }
    }
    Overrides ov;
    if (seed_opt->count()) ov.seed = seed;
    if (grid_opt->count()) ov.grid = grid;
    if (tol_opt->count()) ov.tol_profile = tol_profile;

    Context ctx{command, load_config(std::move(config), ov), fs::path(out_dir), out, err,
                std::chrono::steady_clock::now(), utc_now()};
    if (command != "fields") fs::create_directories(ctx.out_dir);

    if (command == "fields") {
      const json fc = ctx.rc.effective.value("fields", json::object());
      if (!t_opt->count()) t = fc.value("t", 0.0);
      if (!x_opt->count() && fc.contains("x")) {
        const Vec3 v = read_vec(fc["x"], "fields.x");
        x = {v.x(), v.y(), v.z()};
      }
      return cmd_fields(ctx, t, x);
    }
    if (command == "admissible") return cmd_admissible(ctx);
    if (command == "witness") {
      if (!mode_opt->count()) mode = ctx.rc.effective.value("witness", json::object()).value("mode", "phi_zero");
      return cmd_witness(ctx, mode);
    }
    if (command == "minimize") return cmd_minimize(ctx);
    if (command == "simulate") return cmd_simulate(ctx, trajectory_path);
    if (command == "verify") return cmd_verify(ctx, trajectory_path);
    if (command == "gauge") {
      if (!f_opt->count()) {
        const json gc = ctx.rc.effective.value("gauge", json::object());
        if (!gc.contains("f")) throw Error(ErrorKind::ConfigError, "gauge needs --f or gauge.f in the config");
        gauge_f = gc["f"].get<std::string>();
      }
      return cmd_gauge(ctx, gauge_f);
    }
    (void)admissible;
    (void)minimize_cmd;
    throw Error(ErrorKind::ConfigError, "unknown command " + command);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    print_error(err, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    print_error(err, "ConfigError", e.what(), kConfig);
    return kConfig;
  } catch (const json::exception& e) {
    print_error(err, "ConfigError", e.what(), kConfig);
    return kConfig;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what(), kFailure);
    return kFailure;
  }
}

}  // namespace lorentz::cli
