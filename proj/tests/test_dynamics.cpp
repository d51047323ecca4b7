#include "doctest.h"

#include "lorentz/catalog.hpp"
#include "lorentz/dynamics.hpp"
#include "lorentz/error.hpp"
#include "lorentz/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lorentz;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Gyration in B = B0 e3 from the origin with momentum p0 e1.
struct Gyration {
  double B0 = 1.0, p0 = 1.0;
  double omega() const { return B0 / std::sqrt(1 + p0 * p0); }
  double period() const { return 2 * kPi / omega(); }
  PhaseState at(double t) const {
    const double w = omega(), r = p0 / B0;
    PhaseState s;
    s.time = t;
    s.position = Vec3(r * std::sin(w * t), r * (std::cos(w * t) - 1), 0);
    s.momentum = Vec3(p0 * std::cos(w * t), -p0 * std::sin(w * t), 0);
    return s;
  }
};

double phase_error(const PhaseState& a, const PhaseState& b) {
  return (a.position - b.position).norm() + (a.momentum - b.momentum).norm();
}

}  // namespace

TEST_CASE("hamiltonian_rhs") {
  PhaseState s;
  s.momentum = Vec3(1, 0, 0);
  auto r = hamiltonian_rhs(catalog::zero(1.0), s);
  CHECK(r.dq.x() == Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.dp.norm() == 0.0);

  // at rest only E acts; E = -grad Phi = (2, 0, 0) for Phi = -2 x1
  const auto pair = catalog::from_expressions({"x2", "0", "0"}, "-2*x1", {}, 1.0);
  PhaseState rest;
  rest.position = Vec3(0.3, 0.1, 0);
  r = hamiltonian_rhs(pair, rest);
  CHECK(r.dq.norm() == 0.0);
  CHECK((r.dp - Vec3(2, 0, 0)).norm() < 1e-8);

  PhaseState bad;
  CHECK_THROWS_AS(hamiltonian_rhs(catalog::coulomb({}, 1.0), bad), Error);
}

TEST_CASE("free motion is a straight line") {
  PhaseState s;
  s.momentum = Vec3(0.3, -1.2, 0.5);
  const Vec3 v = s.momentum / std::sqrt(1 + s.momentum.squaredNorm());
  const auto orbit = integrate(catalog::zero(1.0), s, 3.0, 100);
  REQUIRE(orbit.size() == 101);
  for (const auto& st : orbit) {
    CHECK((st.position - st.time * v).norm() < 1e-13);
    CHECK(st.momentum == s.momentum);
  }
  CHECK(orbit.back().time == 3.0);
}

TEST_CASE("uniform-B gyration") {
  const Gyration gy{1.0, 1.0};
  const auto pair = catalog::uniform_b(Vec3(0, 0, gy.B0), 1.0);
  const auto start = gy.at(0.0);
  const double Tg = gy.period();
  const auto orbit = integrate(pair, start, Tg, 10000);

  SUBCASE("closes after one period") { CHECK(phase_error(orbit.back(), start) <= 1e-8); }
  SUBCASE("|p| and the speed are conserved") {
    for (const auto& st : orbit) {
      CHECK(std::abs(st.momentum.norm() - gy.p0) <= 1e-10);
      CHECK(std::abs(st.velocity().norm() - start.velocity().norm()) <= 1e-8);
    }
  }
  SUBCASE("fourth-order convergence") {
    const double e1 = phase_error(integrate(pair, start, Tg, 1000).back(), gy.at(Tg));
    const double e2 = phase_error(integrate(pair, start, Tg, 2000).back(), gy.at(Tg));
    CHECK(e1 / e2 == Approx(16.0).epsilon(0.1));
    CHECK(std::log2(e1 / e2) >= 3.7);
    CHECK(std::log2(e1 / e2) <= 4.3);
  }
  SUBCASE("recovered speed stays below one") {
    PhaseState fast = start;
    fast.momentum = Vec3(50, 0, 0);
    for (const auto& st : integrate(pair, fast, 1.0, 200)) CHECK(st.velocity().norm() < 1.0);
  }
}

TEST_CASE("magnetostatic speed conservation") {
  const auto pair = catalog::magnetostatic({}, 1.0);
  PhaseState s;
  s.position = Vec3(0.2, -0.1, 0.3);
  s.momentum = Vec3(0.4, 0.7, -0.2);
  const double v0 = s.velocity().norm();
  for (const auto& st : integrate(pair, s, 1.0, 4000)) CHECK(std::abs(st.velocity().norm() - v0) <= 1e-8);
}

TEST_CASE("momentum bound from rest") {
  const GridSpec box{Vec3::Constant(-4), Vec3::Constant(4), 41, 32};
  const std::vector<PotentialPair> pairs = {
      catalog::gaussian_well({}, 1.0), catalog::gaussian_pulse({}, 1.0),
      catalog::sum({catalog::gaussian_pulse({}, 1.0), catalog::gaussian_well({0.5, 1.5, Vec3(0.5, 0, 0)}, 1.0)})};
  std::mt19937_64 rng(6);
  for (const auto& pair : pairs) {
    const double C = lipschitz_and_C(pair, box).C;
    for (int k = 0; k < 10; ++k) {
      PhaseState s;
      s.position = random_point(rng, Vec3::Constant(-1.5), Vec3::Constant(1.5));
      s.time = std::uniform_real_distribution<double>(0, 1)(rng);
      for (const auto& st : integrate(pair, s, s.time + 1.0, 1000))
        CHECK(st.momentum.norm() <= (st.time - s.time) * C * (1 + 1e-9) + 1e-14);
    }
  }
}

TEST_CASE("singular encounter reports the time of closest approach") {
  // free flight from (-2,0,0) at speed 1/sqrt(2) toward a ball of radius 0.5 at the origin
  const auto pair = catalog::from_expressions({"0", "0", "0"}, "0", {{Vec3::Zero(), 0.5}}, 1.0);
  PhaseState s;
  s.position = Vec3(-2, 0, 0);
  s.momentum = Vec3(1, 0, 0);
  const double hit = 1.5 * std::sqrt(2.0);
  try {
    integrate(pair, s, 5.0, 500);
    FAIL("expected SingularEncounter");
  } catch (const SingularEncounterError& e) {
    CHECK(e.kind() == ErrorKind::SingularEncounter);
    CHECK(std::abs(e.time() - hit) <= 2 * 5.0 / 500);
  }
}

TEST_CASE("rho_from_C and velocity_bound") {
  CHECK(rho_from_C(1.0, 1.0) == Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(rho_from_C(0.0, 1.0) == 0.0);
  const auto z = velocity_bound(catalog::zero(1.0), GridSpec{});
  CHECK(z.rho == 0.0);
  CHECK(z.claimed);
  const auto pulse = velocity_bound(catalog::gaussian_pulse({}, 1.0), GridSpec{});
  CHECK(pulse.claimed);
  CHECK(pulse.rho == Approx(rho_from_C(pulse.lipschitz.C, 1.0)));
  CHECK(pulse.rho > 0.0);
  CHECK(pulse.rho < 1.0);
  CHECK(pulse.lipschitz.C >= 2 * kPi);  // |dA/dt| at the centre
  const auto coul = velocity_bound(catalog::coulomb({1.0, Vec3(10, 10, 10)}, 1.0), GridSpec{});
  CHECK_FALSE(coul.claimed);
  CHECK(coul.rho == 1.0);
  CHECK_FALSE(coul.note.empty());
}

TEST_CASE("periodicity_residual") {
  SUBCASE("exact gyration orbit") {
    const double B0 = 1.0, v = 0.6, gamma = 1 / std::sqrt(1 - v * v);
    const double w = B0 / gamma, r = v / w, T = 2 * kPi / w;
    const auto q = PeriodicTrajectory::from_function(
        [=](double t) { return Vec3(r * std::cos(w * t), -r * std::sin(w * t), 0); }, 128, T);
    const auto rep = periodicity_residual(catalog::uniform_b(Vec3(0, 0, B0), T), q);
    CHECK(rep.residual <= 1e-8);
    CHECK(rep.steps == 64 * 128);
  }
  SUBCASE("a random closed curve is not an orbit") {
    RandomTrajectoryOptions opt;
    opt.max_speed = 0.5;
    const auto q = random_k_trajectory(2, 64, 1.0, opt);
    CHECK(periodicity_residual(catalog::gaussian_pulse({}, 1.0), q).residual > 1e-2);
  }
}
