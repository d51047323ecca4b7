#pragma once

#include "lorentz/error.hpp"
#include "lorentz/optimizer.hpp"
#include "lorentz/potentials.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lorentz::cli {

enum ExitCode : int { kOk = 0, kConfig = 2, kSingular = 3, kNotAdmissible = 4, kFailure = 5 };

int exit_code_for(ErrorKind kind);

/// Tolerances selected by --tol-profile; explicit config values take precedence.
struct Tolerances {
  std::string profile = "default";
  double grad_tol = 1e-5;
  double residual_tol = 1e-3;
  double tol_quad = 1e-6;
  double tol_zero = 1e-12;
  double gauge_tol_analytic = 1e-8;
  double gauge_tol_fd = 1e-4;
  double speed_tol = 1e-6;
};

Tolerances tolerance_profile(const std::string& name);

struct RunConfig {
  nlohmann::json effective;  // config after flag overrides; hashed into every report
  PotentialPair pair;
  double period = 1.0;
  std::size_t grid_size = 256;
  DerivativeScheme scheme = DerivativeScheme::spectral;
  GridSpec box{};
  bool normalize_phi = true;
  std::uint64_t seed = 0;
  Tolerances tol;
  MinimizeConfig minimize;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::optional<std::string> tol_profile;
};

/// Validates and resolves a JSON run configuration. Throws Error(ConfigError).
RunConfig load_config(nlohmann::json config, const Overrides& overrides = {});

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lorentz::cli
