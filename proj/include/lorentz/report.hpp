#pragma once

#include "lorentz/action.hpp"
#include "lorentz/dynamics.hpp"
#include "lorentz/optimizer.hpp"
#include "lorentz/potentials.hpp"
#include "lorentz/trajectory.hpp"
#include "lorentz/witness.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lorentz::report {

using nlohmann::json;

/// Finite numbers pass through; infinities and NaN become {"flag": ...}.
json number(double v);
json extended(const ExtendedReal& v);
json vec(const Vec3& v);

json to_json(const GridSpec& g);
json to_json(const LipschitzReport& r);
json to_json(const AdmissibilityReport& r);
json to_json(const FieldSample& f);
json to_json(const ActionReport& r);
json to_json(const PeriodicTrajectory& q);
json to_json(const WitnessCertificate& c);
json to_json(const Theorem2Result& r);
json to_json(const FlowResult& r);
json to_json(const DivergenceTable& t);
json to_json(const VelocityBound& v);
json to_json(const PeriodicityReport& p);
json to_json(const MinimizerResult& r);

GridSpec grid_from_json(const json& j, const GridSpec& fallback = {});
PeriodicTrajectory trajectory_from_json(const json& j);

/// "%.17g" formatting used by every CSV writer.
std::string format17(double v);

/// t,x1,x2,x3 preceded by "# period <T>" and "# scheme <name>" comment lines.
void write_trajectory_csv(std::ostream& os, const PeriodicTrajectory& q);
PeriodicTrajectory read_trajectory_csv(std::istream& is);

/// Reads .json (a serialized trajectory) or anything else as trajectory CSV.
PeriodicTrajectory load_trajectory(const std::string& path);

void write_iterates_csv(std::ostream& os, const std::vector<IterateRecord>& rows);
void write_orbit_csv(std::ostream& os, const std::vector<PhaseState>& orbit);
void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows);
void write_divergence_csv(std::ostream& os, const DivergenceTable& t);

}  // namespace lorentz::report
