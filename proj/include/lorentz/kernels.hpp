#pragma once

// Data-parallel loops shared by the grid suprema, candidate scans and random
// sweeps. Each kernel has an OpenMP path and a plain serial loop; both visit
// the same indices and reduce in a way that gives identical results.

#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

namespace lorentz {

enum class Execution { serial, parallel };

/// Calls body(i) for i in [0, n). The first exception by index is rethrown
/// after the loop, so error reporting does not depend on thread scheduling.
template <class Body>
void for_each_index(std::size_t n, Body&& body, Execution exec) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      body(i);
    } catch (...) {
#pragma omp critical(lorentz_kernel_error)
      {
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

/// out[i] = f(i).
template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f, Execution exec) {
  std::vector<T> out(n);
  for_each_index(n, [&](std::size_t i) { out[i] = f(i); }, exec);
  return out;
}

/// max_i f(i); -inf for n == 0. Max is order-independent, so both paths agree bit for bit.
template <class F>
double max_over_indices(std::size_t n, F&& f, Execution exec) {
  double best = -std::numeric_limits<double>::infinity();
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = f(i);
      if (v > best) best = v;
    }
    return best;
  }
  const auto values = map_indices<double>(n, f, exec);
  for (double v : values)
    if (v > best) best = v;
  return best;
}

}  // namespace lorentz
