// Serial vs OpenMP timings for the data-parallel kernels.
//
//   bench_kernels [--reps N] [--threads N] [--json]

#include "lorentz/action.hpp"
#include "lorentz/catalog.hpp"
#include "lorentz/kernels.hpp"
#include "lorentz/optimizer.hpp"
#include "lorentz/sampling.hpp"
#include "lorentz/witness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace lorentz;

namespace {

double best_of(int reps, const std::function<double()>& f, double& sink) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    sink += f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

struct Case {
  std::string name;
  std::function<double(Execution)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel timings"};
  int reps = 3, threads = 0;
  bool as_json = false;
  app.add_option("--reps", reps, "repetitions; the best time is kept")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)");
  app.add_flag("--json", as_json, "print JSON instead of a table");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const auto pulse = catalog::gaussian_pulse({}, 1.0);
  const auto mixed = catalog::sum({catalog::gaussian_pulse({}, 1.0), catalog::gaussian_well({0.5, 1.5, Vec3(1, 0, 0)}, 1.0)});
  const GridSpec box{Vec3::Constant(-4), Vec3::Constant(4), 31, 32};
  const auto candidates = box.points();

  std::vector<Case> cases = {
      {"lipschitz_and_C 31^3 x 32", [&](Execution e) { return lipschitz_and_C(mixed, box, e).C; }},
      {"find_base_point 31^3", [&](Execution e) { return find_base_point(pulse, candidates, 1e-12, 64, e).norm(); }},
      {"action_lower_bound 31^3 x 32", [&](Execution e) { return action_lower_bound(mixed, box, e); }},
      {"random sweep 2e4 x N=64",
       [&](Execution e) {
         RandomTrajectoryOptions opt;
         opt.center_spread = 2.0;
         return max_over_indices(
             20000,
             [&](std::size_t i) {
               return -action_value(random_k_trajectory(mix_seed(1, i), 64, 1.0, opt), mixed).value;
             },
             e);
       }},
      {"minimize 8 starts N=64", [&](Execution e) {
         MinimizeConfig cfg;
         cfg.grid_size = 64;
         cfg.witness.grid_size = 64;
         cfg.start_mode = StartMode::random;
         cfg.multistart_seeds = {0, 1, 2, 3, 4, 5, 6, 7};
         cfg.check_periodicity = false;
         cfg.exec = e;
         return minimize(pulse, cfg).action_report.total.value;
       }}};

  double sink = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  if (!as_json) std::printf("threads %d, best of %d\n%-32s %10s %10s %8s\n", omp_get_max_threads(), reps, "kernel",
                            "serial s", "parallel s", "speedup");
  for (const auto& c : cases) {
    const double ts = best_of(reps, [&] { return c.run(Execution::serial); }, sink);
    const double tp = best_of(reps, [&] { return c.run(Execution::parallel); }, sink);
    if (as_json)
      rows.push_back({{"kernel", c.name}, {"serial_s", ts}, {"parallel_s", tp}, {"speedup", ts / tp}});
    else
      std::printf("%-32s %10.4f %10.4f %8.2f\n", c.name.c_str(), ts, tp, ts / tp);
  }
  if (as_json) std::printf("%s\n", nlohmann::json{{"threads", omp_get_max_threads()}, {"reps", reps}, {"rows", rows}}.dump(2).c_str());
  return sink == 12345.678 ? 1 : 0;  // keeps the results observable
}
