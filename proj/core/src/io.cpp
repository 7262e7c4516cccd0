#include "hypmin/io.hpp"

#include "hypmin/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypmin::io {

namespace {

// Full round-trip precision for CSV cells.
std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinity; flat contact is written as the string "inf".
json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

template <class T>
T required(const json& j, const char* key, const char* where) {
  if (!j.contains(key))
    throw ConfigError(std::string("missing field '") + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' in " + where + " has the wrong type");
  }
}

Point required_point(const json& j, const char* key, const char* where) {
  if (!j.contains(key))
    throw ConfigError(std::string("missing field '") + key + "' in " + where);
  return point_from_json(j.at(key));
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

json to_json(const Point& p) { return json::array({p.x(), p.y()}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("a point must be a two-element number array");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const DomainSpec& domain) {
  json prims = json::array();
  for (const auto& p : domain.primitives()) {
    std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, HalfPlane>) {
            prims.push_back({{"kind", "half_plane"}, {"normal", to_json(q.normal)},
                             {"offset", q.offset}});
          } else if constexpr (std::is_same_v<T, Disk>) {
            prims.push_back({{"kind", "disk"}, {"center", to_json(q.center)},
                             {"radius", q.radius}});
          } else if constexpr (std::is_same_v<T, Ellipse>) {
            prims.push_back({{"kind", "ellipse"},
                             {"center", to_json(q.center)},
                             {"semi_axes", json::array({q.semi_axis_x, q.semi_axis_y})},
                             {"angle", q.angle}});
          } else {
            prims.push_back({{"kind", "power_cap"},
                             {"apex", to_json(q.apex)},
                             {"axis", to_json(q.axis)},
                             {"exponent", q.exponent},
                             {"coefficient", q.coefficient},
                             {"height", q.height}});
          }
        },
        p);
  }
  return {{"n", domain.dimension()},
          {"primitives", prims},
          {"interior_point", to_json(domain.interior_point())}};
}

DomainSpec domain_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("domain must be a JSON object");
  const int n = required<int>(j, "n", "domain");
  if (!j.contains("primitives") || !j["primitives"].is_array())
    throw ConfigError("domain needs a 'primitives' array");
  std::vector<ConvexPrimitive> prims;
  for (const auto& p : j["primitives"]) {
    const auto kind = required<std::string>(p, "kind", "primitive");
    if (kind == "half_plane") {
      prims.push_back(HalfPlane{required_point(p, "normal", "half_plane"),
                                required<double>(p, "offset", "half_plane")});
    } else if (kind == "disk") {
      prims.push_back(Disk{required_point(p, "center", "disk"),
                           required<double>(p, "radius", "disk")});
    } else if (kind == "ellipse") {
      const Point axes = required_point(p, "semi_axes", "ellipse");
      prims.push_back(Ellipse{required_point(p, "center", "ellipse"), axes.x(), axes.y(),
                              p.value("angle", 0.0)});
    } else if (kind == "power_cap") {
      prims.push_back(PowerCap{required_point(p, "apex", "power_cap"),
                               required_point(p, "axis", "power_cap"),
                               required<double>(p, "exponent", "power_cap"),
                               required<double>(p, "coefficient", "power_cap"),
                               required<double>(p, "height", "power_cap")});
    } else {
      throw ConfigError("unknown primitive kind '" + kind + "'");
    }
  }
  return DomainSpec(n, std::move(prims), required_point(j, "interior_point", "domain"));
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

DomainSpec load_domain(const std::filesystem::path& path) {
  return domain_from_json(read_json(path));
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json to_json(const SolverConfig& c) {
  return {{"tau_start", c.tau_start},       {"tau_min", c.tau_min},
          {"tau_ratio", c.tau_ratio},       {"residual_rtol", c.residual_rtol},
          {"max_newton", c.max_newton},     {"backtrack", c.backtrack},
          {"max_backtracks", c.max_backtracks}, {"linear_rtol", c.linear_rtol}};
}

SolverConfig solver_config_from_json(const json& j, SolverConfig c) {
  if (!j.is_object()) throw ConfigError("solver config must be a JSON object");
  try {
    c.tau_start = j.value("tau_start", c.tau_start);
    c.tau_min = j.value("tau_min", c.tau_min);
    c.tau_ratio = j.value("tau_ratio", c.tau_ratio);
    c.residual_rtol = j.value("residual_rtol", c.residual_rtol);
    c.max_newton = j.value("max_newton", c.max_newton);
    c.backtrack = j.value("backtrack", c.backtrack);
    c.max_backtracks = j.value("max_backtracks", c.max_backtracks);
    c.linear_rtol = j.value("linear_rtol", c.linear_rtol);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad solver config: ") + e.what());
  }
  return c;
}

json to_json(const StageRecord& s) {
  return {{"tau", s.tau},
          {"iterations", s.iterations},
          {"residual", s.residual},
          {"tolerance", s.tolerance},
          {"step_converged", s.step_converged}};
}

json solution_metadata(const Solution& solution) {
  json stages = json::array();
  json schedule = json::array();
  for (const auto& s : solution.stages) {
    stages.push_back(to_json(s));
    schedule.push_back(s.tau);
  }
  return {{"h", solution.grid.spacing()},
          {"nodes", solution.grid.size()},
          {"diameter", solution.grid.diameter()},
          {"tau", solution.tau},
          {"tau_schedule", schedule},
          {"stages", stages},
          {"residual", solution.residual},
          {"tolerance", solution.tolerance},
          {"domain", to_json(solution.grid.domain())}};
}

void write_solution_csv(const std::filesystem::path& path, const Solution& solution) {
  const Eigen::VectorXd F = residual_F(solution.grid, solution.u, solution.tau);
  auto out = open_out(path);
  out << "x,y,u,d_x,F_residual\n";
  for (int k = 0; k < solution.grid.size(); ++k) {
    const auto& node = solution.grid.node(k);
    out << cell(node.x.x()) << ',' << cell(node.x.y()) << ',' << cell(solution.u[k]) << ','
        << cell(node.boundary_distance) << ',' << cell(F[k]) << '\n';
  }
}

Solution load_solution(const std::filesystem::path& csv_path,
                       const std::filesystem::path& metadata_path) {
  const json meta = read_json(metadata_path);
  if (!meta.contains("domain")) throw ConfigError("solution metadata lacks the domain");
  Grid grid(domain_from_json(meta["domain"]), required<double>(meta, "h", "metadata"));

  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot read " + csv_path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,u", 0) != 0)
    throw ConfigError("solution CSV must start with the header x,y,u,d_x,F_residual");
  Eigen::VectorXd u = Eigen::VectorXd::Constant(grid.size(), std::nan(""));
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok;
    double vals[3];
    for (double& v : vals) {
      if (!std::getline(fields, tok, ','))
        throw ConfigError("short row " + std::to_string(row) + " in " + csv_path.string());
      try {
        v = std::stod(tok);
      } catch (const std::exception&) {
        throw ConfigError("bad number in row " + std::to_string(row) + " of " + csv_path.string());
      }
    }
    const int k = grid.locate(Point(vals[0], vals[1]));
    if (k < 0)
      throw ConfigError("row " + std::to_string(row) + " is not a node of the metadata grid");
    u[k] = vals[2];
  }
  if (u.hasNaN()) throw ConfigError("solution CSV does not cover every grid node");

  Solution sol{std::move(grid), std::move(u), required<double>(meta, "tau", "metadata"),
               meta.value("residual", 0.0), meta.value("tolerance", 0.0), {}};
  if (meta.contains("stages")) {
    for (const auto& s : meta["stages"]) {
      StageRecord rec;
      rec.tau = s.value("tau", 0.0);
      rec.iterations = s.value("iterations", 0);
      rec.residual = s.value("residual", 0.0);
      rec.tolerance = s.value("tolerance", 0.0);
      rec.step_converged = s.value("step_converged", false);
      sol.stages.push_back(std::move(rec));
    }
  }
  return sol;
}

json to_json(const BarrierParams& p) {
  return {{"family", family_tag(p.family)}, {"a", p.a}, {"b", p.b}, {"epsilon", p.epsilon},
          {"n", p.n}};
}

json to_json(const Frame& f) {
  return {{"origin", to_json(f.origin)}, {"normal", to_json(f.normal)},
          {"tangent", to_json(f.tangent)}};
}

json to_json(const CertificationReport& r) {
  return {{"family", family_tag(r.params.family)},
          {"params", to_json(r.params)},
          {"frame", to_json(r.frame)},
          {"samples", r.samples},
          {"seed", r.seed},
          {"max_F", r.max_F},
          {"argmax_F", to_json(r.argmax_F)},
          {"boundary_samples", r.boundary_samples},
          {"min_boundary_W", r.min_boundary_W},
          {"unsupported_samples", r.unsupported_samples},
          {"pass", r.pass}};
}

json to_json(const FlatCertification& r) {
  return {{"family", "flat"}, {"n", r.n},           {"samples", r.samples},
          {"max_lhs", r.max_lhs}, {"argmax", r.argmax}, {"bound", r.bound},
          {"pass", r.pass}};
}

json to_json(const LocalScaling& s) {
  return {{"A", s.A},       {"cap", s.cap}, {"diameter", s.diameter},
          {"eta", s.eta},   {"a", s.a},     {"factor", s.factor()},
          {"scaled_eta", s.scaled_eta()}};
}

json to_json(const BoundaryClassification& c) {
  return {{"point", to_json(c.point)},
          {"a", number_or_inf(c.a)},
          {"eta", c.eta ? json(*c.eta) : json(nullptr)},
          {"frame", to_json(c.frame)},
          {"window", c.window},
          {"flat", c.flat()}};
}

json to_json(const DomainClassification& c) {
  return {{"a", number_or_inf(c.a)},
          {"eta", c.eta ? json(*c.eta) : json(nullptr)},
          {"samples", c.samples},
          {"flat", c.flat()}};
}

json to_json(const GeometrySummary& s) {
  return {{"diameter", s.diameter},
          {"exterior_radius", s.exterior_radius ? json(*s.exterior_radius) : json(nullptr)},
          {"lambda", s.lambda ? json(*s.lambda) : json(nullptr)},
          {"samples", s.samples}};
}

json to_json(const EnclosingBallReport& r) {
  return {{"radius", r.radius}, {"samples", r.samples}, {"max_violation", r.max_violation}};
}

json to_json(const ProfileWindow& w) { return {{"d_min", w.d_min}, {"d_max", w.d_max}}; }

json to_json(const ExponentFit& f) {
  return {{"alpha", f.alpha}, {"C", f.C}, {"rms", f.rms}, {"window", to_json(f.window)},
          {"samples", f.samples}};
}

json to_json(const ExponentReport& r) {
  return {{"anchor", to_json(r.anchor)},
          {"direction", to_json(r.direction)},
          {"window", to_json(r.window)},
          {"alpha", r.alpha},
          {"C", r.C},
          {"rms", r.rms},
          {"alpha_half_window", r.alpha_half_window},
          {"unresolved_boundary_layer", r.unresolved_boundary_layer},
          {"predicted_alpha", r.predicted_alpha},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

json to_json(const ConstantBoundReport& r) {
  const bool a2 = r.kind == BoundKind::kA2;
  // The lift is reported under both readings of the Holder bound.
  return {{"kind", a2 ? "a2" : "flat"},
          {"constant", r.constant},
          {"exponent", r.exponent},
          {"sup_ratio", r.sup_ratio},
          {"min_margin", r.min_margin},
          {"holder_seminorm_bound", r.holder_bound},
          {"holder_norm_bound", r.holder_bound},
          {"rescale", r.rescale},
          {"d_min", r.d_min},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

json to_json(const LocalEstimateReport& r) {
  return {{"a", r.a},
          {"delta", r.delta},
          {"b", r.b},
          {"bound_exponent", r.bound_exponent},
          {"max_ratio", r.max_ratio},
          {"axis_samples", r.axis_samples},
          {"fit", to_json(r.fit)},
          {"predicted_alpha", 1.0 / (r.a + r.delta)},
          {"bound_pass", r.bound_pass},
          {"exponent_pass", r.exponent_pass},
          {"pass", r.pass}};
}

json to_json(const ComparisonReport& r) {
  return {{"barrier", r.barrier},     {"max_difference", r.max_difference},
          {"argmax", to_json(r.argmax)}, {"tolerance", r.tolerance},
          {"certified", r.certified}, {"pass", r.pass}};
}

void write_profile_csv(const std::filesystem::path& path, const BoundaryProfile& profile) {
  auto out = open_out(path);
  out << "d,u\n";
  for (std::size_t k = 0; k < profile.d.size(); ++k)
    out << cell(profile.d[k]) << ',' << cell(profile.u[k]) << '\n';
}

void write_radial_csv(const std::filesystem::path& path, const RadialProfile& profile) {
  auto out = open_out(path);
  out << "r,u,exact\n";
  for (std::size_t k = 0; k < profile.r.size(); ++k)
    out << cell(profile.r[k]) << ',' << cell(profile.u[k]) << ','
        << cell(exact_ball_solution(profile.radius, profile.r[k])) << '\n';
}

}  // namespace hypmin::io
