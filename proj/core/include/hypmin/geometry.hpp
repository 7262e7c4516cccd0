#pragma once

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace hypmin {

using Point = Eigen::Vector2d;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Convex primitives. Each one is a closed convex set; a domain is their
// intersection.

/// {x : normal . x <= offset}, with `normal` the outward unit normal.
struct HalfPlane {
  Point normal;
  double offset = 0.0;
};

struct Disk {
  Point center;
  double radius = 1.0;
};

/// Solid ellipse; `angle` rotates the first semi-axis away from +x.
struct Ellipse {
  Point center;
  double semi_axis_x = 1.0;
  double semi_axis_y = 1.0;
  double angle = 0.0;
};

/// In the apex frame (s along the tangent, t along `axis`):
///   { t >= coefficient * |s|^exponent,  t <= height }.
struct PowerCap {
  Point apex;
  Point axis;
  double exponent = 2.0;
  double coefficient = 1.0;
  double height = 1.0;
};

using ConvexPrimitive = std::variant<HalfPlane, Disk, Ellipse, PowerCap>;

/// Rigid frame anchored at a boundary point. `normal` points into the domain,
/// so the domain sits in {t >= 0} of local coordinates (s, t).
struct Frame {
  Point origin;
  Point normal;
  Point tangent;

  static Frame from_normal(const Point& origin, const Point& inward_normal);

  Point to_local(const Point& x) const {
    const Point d = x - origin;
    return {d.dot(tangent), d.dot(normal)};
  }
  Point to_world(const Point& local) const {
    return origin + local.x() * tangent + local.y() * normal;
  }
};

/// A bounded convex domain given as an intersection of primitives. The
/// geometry is planar; for dimension n >= 3 the plane is read as the meridian
/// section of an axisymmetric domain.
class DomainSpec {
 public:
  DomainSpec(int dimension, std::vector<ConvexPrimitive> primitives,
             Point interior_point);

  int dimension() const { return dimension_; }
  const std::vector<ConvexPrimitive>& primitives() const { return primitives_; }
  const Point& interior_point() const { return interior_point_; }

  /// Coarse diameter estimate from the construction-time ray casts. Used to
  /// scale geometric tolerances.
  double extent() const { return extent_; }

 private:
  int dimension_;
  std::vector<ConvexPrimitive> primitives_;
  Point interior_point_;
  double extent_ = 0.0;
};

// --- presets ---------------------------------------------------------------

DomainSpec make_disk(double radius, Point center = Point::Zero(), int dimension = 2);
DomainSpec make_rectangle(Point lower, Point upper, int dimension = 2);
DomainSpec make_unit_square(int dimension = 2);
DomainSpec make_ellipse(double semi_x, double semi_y, Point center = Point::Zero(),
                        double angle = 0.0, int dimension = 2);
/// Intersection of two disks of radius `radius` whose centers are
/// `separation` apart along x, symmetric about the origin.
DomainSpec make_lens(double radius, double separation, int dimension = 2);
/// PowerCap with apex at the origin opening along +y.
DomainSpec make_power_cap(double exponent, double coefficient, double height,
                          int dimension = 2);

// --- transforms ------------------------------------------------------------

/// x -> R(angle) x + shift.
DomainSpec rigid_transform(const DomainSpec& domain, double angle, const Point& shift);
/// x -> center + factor (x - center).
DomainSpec scale_about(const DomainSpec& domain, const Point& center, double factor);

// --- queries ---------------------------------------------------------------

bool contains(const DomainSpec& domain, const Point& x);

/// Distance from an interior (or boundary) point to the boundary.
/// Throws GeometryError("exterior point") for points outside.
double boundary_distance(const DomainSpec& domain, const Point& x);

/// Distance along the unit direction `dir` from `origin` (inside) to the
/// boundary; kInfinity when the ray never leaves.
double ray_exit(const DomainSpec& domain, const Point& origin, const Point& dir);

/// m boundary points hit by rays from the interior point at uniform angles.
std::vector<Point> boundary_samples(const DomainSpec& domain, int m);

/// True when x lies on the boundary within `rel_tol * extent`.
bool on_boundary(const DomainSpec& domain, const Point& x, double rel_tol = 1e-9);

/// Outward unit normal at a boundary point. At corners this is the
/// normalized sum of the active primitives' normals.
Point outward_normal(const DomainSpec& domain, const Point& boundary_point);

/// Frame at a boundary point with the supporting line as {t = 0}.
Frame boundary_frame(const DomainSpec& domain, const Point& boundary_point);

/// Max pairwise distance over m boundary samples.
double diameter(const DomainSpec& domain, int m);

/// Smallest R such that every sample's tangent ball B_R(x - R nu) holds all
/// samples. Empty when no R <= 10 * diameter works.
std::optional<double> exterior_sphere_radius(const DomainSpec& domain, int m);

// --- (a, eta) classification ---------------------------------------------

struct BoundaryClassification {
  Point point;
  double a = kInfinity;        ///< kInfinity encodes flat contact.
  std::optional<double> eta;   ///< absent when a is infinite.
  Frame frame;
  double window = 0.0;         ///< local sampling radius mu
  bool flat() const { return a == kInfinity; }
};

/// Default candidate exponents for classification.
std::vector<double> default_exponent_candidates();

BoundaryClassification classify_boundary_point(const DomainSpec& domain,
                                               const Point& x0,
                                               std::span<const double> a_candidates);

/// eta for a fixed exponent at x0: the infimum of t / |s|^a over the local
/// boundary samples (0 when the point is flat).
double local_eta(const DomainSpec& domain, const Point& x0, double a);

struct DomainClassification {
  double a = kInfinity;
  std::optional<double> eta;
  int samples = 0;
  bool flat() const { return a == kInfinity; }
};

DomainClassification classify_domain(const DomainSpec& domain, int m,
                                     std::span<const double> a_candidates);

struct EnclosingBallReport {
  double radius = 0.0;
  int samples = 0;
  double max_violation = 0.0;  ///< max(|y - R e_n| - R) over samples
  bool contained(double tol) const { return max_violation <= tol; }
};

EnclosingBallReport enclosing_ball_check(const DomainSpec& domain, const Point& z,
                                         double radius, int m);

struct GeometrySummary {
  double diameter = 0.0;
  std::optional<double> exterior_radius;
  /// Certified lower bound on lambda for disk-only intersections.
  std::optional<double> lambda;
  int samples = 0;
};

GeometrySummary summarize(const DomainSpec& domain, int m);

}  // namespace hypmin
