#pragma once

#include "hypmin/barriers.hpp"
#include "hypmin/geometry.hpp"
#include "hypmin/radial.hpp"
#include "hypmin/regularity.hpp"
#include "hypmin/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace hypmin::io {

using json = nlohmann::json;

// Domains use
//   { "n": 2, "primitives": [ {"kind": "disk", "center": [0, 0], "radius": 1}, ... ],
//     "interior_point": [0, 0] }
// with kinds half_plane (normal, offset), disk (center, radius), ellipse
// (center, semi_axes, angle) and power_cap (apex, axis, exponent,
// coefficient, height).
json to_json(const DomainSpec& domain);
DomainSpec domain_from_json(const json& j);
DomainSpec load_domain(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);

json to_json(const Point& p);
Point point_from_json(const json& j);

json to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const json& j, SolverConfig base = {});

json to_json(const StageRecord& stage);

/// Run metadata: h, lift schedule, per-stage iterations and residuals, final
/// residual and tolerance, node count and the domain.
json solution_metadata(const Solution& solution);

/// Columns x, y, u, d_x, F_residual; one row per interior node, full precision.
void write_solution_csv(const std::filesystem::path& path, const Solution& solution);

/// Rebuilds the grid from the metadata and reads u back from the CSV.
Solution load_solution(const std::filesystem::path& csv_path,
                       const std::filesystem::path& metadata_path);

json to_json(const BarrierParams& params);
json to_json(const Frame& frame);
json to_json(const CertificationReport& report);
json to_json(const FlatCertification& report);
json to_json(const LocalScaling& scaling);

json to_json(const BoundaryClassification& c);
json to_json(const DomainClassification& c);
json to_json(const GeometrySummary& s);
json to_json(const EnclosingBallReport& r);

json to_json(const ProfileWindow& w);
json to_json(const ExponentFit& fit);
json to_json(const ExponentReport& report);
json to_json(const ConstantBoundReport& report);
json to_json(const LocalEstimateReport& report);
json to_json(const ComparisonReport& report);

/// Columns d, u.
void write_profile_csv(const std::filesystem::path& path, const BoundaryProfile& profile);

/// Columns r, u, exact.
void write_radial_csv(const std::filesystem::path& path, const RadialProfile& profile);

}  // namespace hypmin::io
