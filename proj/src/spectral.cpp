#include "lorentz/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>
#include <stdexcept>

namespace lorentz::spectral {

namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Plans live for the whole process. FFTW's planner is not thread-safe;
// executing a plan on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  const Plans& get(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n)));
    auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n / 2 + 1)));
    Plans p;
    p.forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(spec);
    if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, Plans> plans_;
};

const Plans& plans_for(int n) {
  static PlanCache cache;
  return cache.get(n);
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

void apply_multiplier(std::span<const double> in, std::span<double> out, const Multiplier& m) {
  const int n = static_cast<int>(in.size());
  if (out.size() != in.size()) throw std::invalid_argument("spectral: size mismatch");
  if (n == 0) return;
  const Plans& plans = plans_for(n);
  std::unique_ptr<double, FftwDeleter> real(
      static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n))));
  std::unique_ptr<fftw_complex, FftwDeleter> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n / 2 + 1))));
  for (int i = 0; i < n; ++i) real.get()[i] = in[static_cast<std::size_t>(i)];
  fftw_execute_dft_r2c(plans.forward, real.get(), spec.get());
  for (int k = 0; k <= n / 2; ++k) {
    const std::complex<double> c(spec.get()[k][0], spec.get()[k][1]);
    const std::complex<double> r = c * m(k) / static_cast<double>(n);
    spec.get()[k][0] = r.real();
    spec.get()[k][1] = r.imag();
  }
  fftw_execute_dft_c2r(plans.backward, spec.get(), real.get());
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = real.get()[i];
}

void derivative(std::span<const double> in, std::span<double> out, double period) {
  const int n = static_cast<int>(in.size());
  const double base = 2.0 * std::numbers::pi / period;
  // Shifting by the first sample leaves the derivative unchanged and makes it exactly 0 on constants.
  std::vector<double> shifted(in.begin(), in.end());
  if (!shifted.empty()) {
    const double offset = shifted[0];
    for (auto& v : shifted) v -= offset;
  }
  apply_multiplier(shifted, out, [n, base](int k) {
    if (2 * k == n) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, base * k);
  });
}

void primitive(std::span<const double> in, std::span<double> out, double period) {
  const int n = static_cast<int>(in.size());
  const double base = 2.0 * std::numbers::pi / period;
  apply_multiplier(in, out, [n, base](int k) {
    if (k == 0 || 2 * k == n) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, -1.0 / (base * k));
  });
}

}  // namespace lorentz::spectral
