#include "lorentz/report.hpp"

#include "lorentz/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lorentz::report {

json number(double v) {
  if (std::isnan(v)) return json{{"flag", "nan"}};
  if (std::isinf(v)) return json{{"flag", v > 0 ? "infinite" : "-infinite"}};
  return v + 0.0;  // no negative zeros in reports
}

json extended(const ExtendedReal& v) {
  if (v.infinite) return json{{"flag", "infinite"}};
  return number(v.value);
}

json vec(const Vec3& v) { return json::array({number(v.x()), number(v.y()), number(v.z())}); }

json to_json(const GridSpec& g) {
  return {{"lo", vec(g.lo)}, {"hi", vec(g.hi)}, {"points_per_axis", g.points_per_axis}, {"time_nodes", g.time_nodes}};
}

json to_json(const LipschitzReport& r) {
  return {{"M", number(r.M)},
          {"C", number(r.C)},
          {"C_det", number(r.C_det)},
          {"max_dt_A", number(r.max_dt_A)},
          {"max_grad_Phi", number(r.max_grad_Phi)},
          {"max_abs_det_grad_A", number(r.max_abs_det)},
          {"C_definition", "max{|dA/dt|, ||grad A||_op, |grad Phi|}; C_det uses max|det grad A| in the middle slot"},
          {"grid", to_json(r.grid)}};
}

json to_json(const AdmissibilityReport& r) {
  json a = json::array(), p = json::array(), c = json::array();
  for (const auto& [radius, value] : r.decay_A_profile) a.push_back({number(radius), number(value)});
  for (const auto& [radius, value] : r.decay_Phi_profile) p.push_back({number(radius), number(value)});
  for (const auto& f : r.coulomb_minorant) c.push_back({{"ok", f.ok}, {"fitted_r", number(f.fitted_r)}});
  return {{"nonzero_electric_field", r.nonzero_electric_field},
          {"nonautonomous_A", r.nonautonomous_A},
          {"decay_A_profile", a},
          {"decay_Phi_profile", p},
          {"coulomb_minorant", c},
          {"coulomb_minorant_ok", r.coulomb_minorant_ok()},
          {"phi_sup_estimate", number(r.phi_sup_estimate)},
          {"max_electric_probe", number(r.max_electric_probe)}};
}

json to_json(const FieldSample& f) {
  return {{"t", number(f.t)}, {"x", vec(f.x)}, {"E", vec(f.electric)}, {"B", vec(f.magnetic)}};
}

json to_json(const ActionReport& r) {
  json j = {{"psi", extended(r.psi)},
            {"f_term", r.f_term ? number(*r.f_term) : json(nullptr)},
            {"total", extended(r.total)},
            {"in_K", r.in_K},
            {"in_Lambda", r.in_Lambda},
            {"sup_speed", number(r.sup_speed)}};
  j["el_residual_sup"] = r.el_residual_sup ? number(*r.el_residual_sup) : json(nullptr);
  return j;
}

json to_json(const PeriodicTrajectory& q) {
  json s = json::array();
  for (const auto& x : q.samples()) s.push_back(vec(x));
  return {{"period", q.period()}, {"scheme", to_string(q.scheme())}, {"samples", s}};
}

json to_json(const WitnessCertificate& c) {
  json j = {{"mode", to_string(c.mode)},
            {"base_point", vec(c.base_point)},
            {"epsilon", number(c.epsilon)},
            {"epsilon_threshold", number(c.epsilon_threshold)},
            {"g_dot_L2_sq", number(c.g_dot_L2_sq)},
            {"g_dot_sup", number(c.g_dot_sup)},
            {"M_used", number(c.M_used)},
            {"M_box", to_json(c.M_box)},
            {"action_value", number(c.action_value)},
            {"theoretical_bound", number(c.theoretical_bound)},
            {"negative", c.negative},
            {"bound_ok", c.bound_ok},
            {"notes", c.notes}};
  j["g_curve"] = c.g_curve ? to_json(*c.g_curve) : json(nullptr);
  j["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  return j;
}

json to_json(const Theorem2Result& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"base_point", vec(row.base_point)},
                    {"radius", number(row.radius)},
                    {"varphi", number(row.varphi)},
                    {"tilde_L2", number(row.tilde_L2)},
                    {"shell_max_grad_phi", number(row.shell_max_grad_phi)},
                    {"r1", number(row.r1)},
                    {"r2", number(row.r2)}});
  return {{"ratios", rows},
          {"r1_decreasing", r.r1_decreasing},
          {"r2_decreasing", r.r2_decreasing},
          {"trend_ok", r.trend_ok},
          {"certificate", to_json(r.certificate)}};
}

json to_json(const FlowResult& r) {
  json values = json::array();
  for (double v : r.values) values.push_back(number(v));
  return {{"certificate", to_json(r.certificate)}, {"values", values}, {"accepted_steps", r.accepted_steps}};
}

json to_json(const DivergenceTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows)
    rows.push_back({{"base_point", vec(row.base_point)},
                    {"radius", number(row.radius)},
                    {"g_dot_L2_sq", number(row.g_dot_L2_sq)},
                    {"g_dot_sup", number(row.g_dot_sup)},
                    {"ratio", number(row.ratio)},
                    {"epsilon", number(row.epsilon)},
                    {"action", extended(row.action)}});
  return {{"rows", rows}, {"strictly_decreasing", t.strictly_decreasing}};
}

json to_json(const VelocityBound& v) {
  return {{"rho", number(v.rho)},
          {"claimed", v.claimed},
          {"rho_det", number(v.rho_det)},
          {"note", v.note},
          {"lipschitz", to_json(v.lipschitz)}};
}

json to_json(const PeriodicityReport& p) {
  return {{"residual", number(p.residual)},
          {"steps", p.steps},
          {"start", {{"position", vec(p.start.position)}, {"momentum", vec(p.start.momentum)}}},
          {"end", {{"position", vec(p.end.position)}, {"momentum", vec(p.end.momentum)}, {"time", p.end.time}}}};
}

json to_json(const MinimizerResult& r) {
  json starts = json::array();
  for (const auto& s : r.starts)
    starts.push_back({{"seed", s.seed},
                      {"ok", s.ok},
                      {"status", s.status},
                      {"start_value", number(s.start_value)},
                      {"value", number(s.value)},
                      {"iterations", s.iterations}});
  const auto& c = r.certification;
  return {{"status", r.status},
          {"chosen_start", r.chosen_start},
          {"starts", starts},
          {"action", to_json(r.action_report)},
          {"certification",
           {{"non_constant", c.non_constant},
            {"negative_action", c.negative_action},
            {"el_residual_ok", c.el_residual_ok},
            {"speed_below_rho", c.speed_below_rho}}},
          {"rho_bound", number(r.rho_bound)},
          {"rho_claimed", r.rho_claimed},
          {"tilde_sup", number(r.tilde_sup)},
          {"periodicity_residual", r.periodicity_residual ? number(*r.periodicity_residual) : json(nullptr)},
          {"iterations", r.iterates.size()},
          {"trajectory", to_json(r.trajectory)}};
}

GridSpec grid_from_json(const json& j, const GridSpec& fallback) {
  GridSpec g = fallback;
  auto read_vec = [](const json& a) {
    if (!a.is_array() || a.size() != 3) throw Error(ErrorKind::ConfigError, "expected a 3-vector");
    return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  };
  if (j.contains("lo")) g.lo = read_vec(j["lo"]);
  if (j.contains("hi")) g.hi = read_vec(j["hi"]);
  if (j.contains("half_width")) {
    const double w = j["half_width"].get<double>();
    g.lo = Vec3::Constant(-w);
    g.hi = Vec3::Constant(w);
  }
  g.points_per_axis = j.value("points_per_axis", g.points_per_axis);
  g.time_nodes = j.value("time_nodes", g.time_nodes);
  if (g.points_per_axis < 1 || g.time_nodes < 1)
    throw Error(ErrorKind::ConfigError, "grid needs at least one point per axis and one time node");
  return g;
}

namespace {

DerivativeScheme scheme_from(const std::string& name) {
  if (name == "spectral") return DerivativeScheme::spectral;
  if (name == "central2") return DerivativeScheme::central2;
  throw Error(ErrorKind::ConfigError, "unknown derivative scheme '" + name + "'");
}

}  // namespace

PeriodicTrajectory trajectory_from_json(const json& j) {
  try {
    std::vector<Vec3> s;
    for (const auto& x : j.at("samples")) s.emplace_back(x.at(0).get<double>(), x.at(1).get<double>(), x.at(2).get<double>());
    return PeriodicTrajectory(std::move(s), j.at("period").get<double>(),
                              scheme_from(j.value("scheme", std::string("spectral"))));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed trajectory: ") + e.what());
  }
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const PeriodicTrajectory& q) {
  os << "# period " << format17(q.period()) << "\n# scheme " << to_string(q.scheme()) << "\nt,x1,x2,x3\n";
  for (std::size_t i = 0; i < q.size(); ++i)
    os << format17(q.time(i)) << ',' << format17(q[i].x()) << ',' << format17(q[i].y()) << ','
       << format17(q[i].z()) << '\n';
}

PeriodicTrajectory read_trajectory_csv(std::istream& is) {
  double period = -1.0;
  DerivativeScheme scheme = DerivativeScheme::spectral;
  std::vector<Vec3> samples;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key, value;
      ls >> key >> value;
      if (key == "period") period = std::stod(value);
      if (key == "scheme") scheme = scheme_from(value);
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "bad number '" + cell + "' in trajectory CSV");
      }
    }
    if (row.size() != 4) throw Error(ErrorKind::ConfigError, "trajectory CSV rows need t,x1,x2,x3");
    samples.emplace_back(row[1], row[2], row[3]);
  }
  if (period <= 0.0) throw Error(ErrorKind::ConfigError, "trajectory CSV lacks a '# period' line");
  return PeriodicTrajectory(std::move(samples), period, scheme);
}

PeriodicTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open trajectory file " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigError, std::string("trajectory JSON: ") + e.what());
    }
    if (j.contains("trajectory")) return trajectory_from_json(j["trajectory"]);
    return trajectory_from_json(j);
  }
  return read_trajectory_csv(in);
}

void write_iterates_csv(std::ostream& os, const std::vector<IterateRecord>& rows) {
  os << "iter,I,grad_norm,sup_speed,step\n";
  for (const auto& r : rows)
    os << r.iter << ',' << format17(r.value) << ',' << format17(r.grad_norm) << ',' << format17(r.sup_speed) << ','
       << format17(r.step) << '\n';
}

void write_orbit_csv(std::ostream& os, const std::vector<PhaseState>& orbit) {
  os << "t,x1,x2,x3,p1,p2,p3\n";
  for (const auto& s : orbit)
    os << format17(s.time) << ',' << format17(s.position.x()) << ',' << format17(s.position.y()) << ','
       << format17(s.position.z()) << ',' << format17(s.momentum.x()) << ',' << format17(s.momentum.y()) << ','
       << format17(s.momentum.z()) << '\n';
}

void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows) {
  os << "n,radius,r1,r2\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    os << i << ',' << format17(rows[i].radius) << ',' << format17(rows[i].r1) << ',' << format17(rows[i].r2) << '\n';
}

void write_divergence_csv(std::ostream& os, const DivergenceTable& t) {
  os << "radius,g_dot_L2_sq,g_dot_sup,ratio,epsilon,I\n";
  for (const auto& r : t.rows)
    os << format17(r.radius) << ',' << format17(r.g_dot_L2_sq) << ',' << format17(r.g_dot_sup) << ','
       << format17(r.ratio) << ',' << format17(r.epsilon) << ','
       << (r.action.infinite ? std::string("inf") : format17(r.action.value)) << '\n';
}

}  // namespace lorentz::report
