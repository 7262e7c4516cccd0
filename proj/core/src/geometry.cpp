#include "hypmin/geometry.hpp"

#include "hypmin/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hypmin {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Point perp(const Point& v) { return {v.y(), -v.x()}; }

Eigen::Matrix2d rotation(double angle) {
  return Eigen::Rotation2Dd(angle).toRotationMatrix();
}

// PowerCap local coordinates: s along the tangent, t along the axis.
Point cap_local(const PowerCap& c, const Point& x) {
  const Point d = x - c.apex;
  return {d.dot(perp(c.axis)), d.dot(c.axis)};
}

// Ellipse canonical coordinates (unrotated, centered).
Point ellipse_local(const Ellipse& e, const Point& x) {
  return rotation(-e.angle) * (x - e.center);
}

// Signed "level": <= 0 inside, 0 on the boundary, roughly a distance near it.
double level(const ConvexPrimitive& p, const Point& x) {
  return std::visit(
      Overloaded{
          [&](const HalfPlane& h) { return h.normal.dot(x) - h.offset; },
          [&](const Disk& d) { return (x - d.center).norm() - d.radius; },
          [&](const Ellipse& e) {
            const Point q = ellipse_local(e, x);
            const double r = std::hypot(q.x() / e.semi_axis_x, q.y() / e.semi_axis_y);
            return (r - 1.0) * std::min(e.semi_axis_x, e.semi_axis_y);
          },
          [&](const PowerCap& c) {
            const Point l = cap_local(c, x);
            const double curve = c.coefficient * std::pow(std::abs(l.x()), c.exponent) - l.y();
            return std::max(l.y() - c.height, curve);
          }},
      p);
}

// Distance from a point in the closed ellipse with semi-axes e0 >= e1 and
// first-quadrant coordinates (y0, y1) to the ellipse curve.
double ellipse_curve_distance(double e0, double e1, double y0, double y1) {
  auto robust_length = [](double a, double b) { return std::hypot(a, b); };
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double n0 = r0 * z0;
      double s0 = z1 - 1.0;
      double s1 = g < 0.0 ? 0.0 : robust_length(n0, z1) - 1.0;
      double s = 0.0;
      for (int i = 0; i < 2000; ++i) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double ratio0 = n0 / (s + r0);
        const double ratio1 = z1 / (s + 1.0);
        g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
        if (g > 0.0) {
          s0 = s;
        } else if (g < 0.0) {
          s1 = s;
        } else {
          break;
        }
      }
      const double x0 = r0 * y0 / (s + r0);
      const double x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0));
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double golden_minimize(const auto& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

double cap_inside_distance(const PowerCap& c, const Point& x) {
  const Point l = cap_local(c, x);
  const double s = l.x();
  const double t = l.y();
  const double top = std::max(0.0, c.height - t);
  const double vertical = t - c.coefficient * std::pow(std::abs(s), c.exponent);
  if (vertical <= 0.0) return 0.0;
  // The closest curve point lies within `vertical` of s in the s-direction.
  auto sq_dist = [&](double sigma) {
    const double dt = t - c.coefficient * std::pow(std::abs(sigma), c.exponent);
    return (s - sigma) * (s - sigma) + dt * dt;
  };
  constexpr int kCells = 64;
  const double lo = s - vertical;
  const double step = 2.0 * vertical / kCells;
  std::array<double, kCells + 1> values{};
  for (int k = 0; k <= kCells; ++k) values[k] = sq_dist(lo + k * step);
  double best = values[0];
  for (int k = 0; k <= kCells; ++k) {
    const bool left_ok = k == 0 || values[k] <= values[k - 1];
    const bool right_ok = k == kCells || values[k] <= values[k + 1];
    if (!left_ok || !right_ok) continue;
    const double a = lo + std::max(0, k - 1) * step;
    const double b = lo + std::min(kCells, k + 1) * step;
    const double sigma = golden_minimize(sq_dist, a, b, 1e-14 * std::max(1.0, std::abs(s)) + 1e-16);
    best = std::min({best, values[k], sq_dist(sigma)});
  }
  return std::min(top, std::sqrt(best));
}

double inside_distance(const ConvexPrimitive& p, const Point& x) {
  return std::visit(
      Overloaded{
          [&](const HalfPlane& h) { return std::max(0.0, h.offset - h.normal.dot(x)); },
          [&](const Disk& d) { return std::max(0.0, d.radius - (x - d.center).norm()); },
          [&](const Ellipse& e) {
            const Point q = ellipse_local(e, x);
            double e0 = e.semi_axis_x, e1 = e.semi_axis_y;
            double y0 = std::abs(q.x()), y1 = std::abs(q.y());
            if (e0 < e1) {
              std::swap(e0, e1);
              std::swap(y0, y1);
            }
            return ellipse_curve_distance(e0, e1, y0, y1);
          },
          [&](const PowerCap& c) { return cap_inside_distance(c, x); }},
      p);
}

double cap_exit(const PowerCap& c, const Point& origin, const Point& dir, double scale) {
  const Point o = cap_local(c, origin);
  const Point d{dir.dot(perp(c.axis)), dir.dot(c.axis)};
  const double lambda_top = d.y() > 0.0 ? (c.height - o.y()) / d.y() : kInfinity;
  auto g = [&](double lambda) {
    return o.y() + lambda * d.y() -
           c.coefficient * std::pow(std::abs(o.x() + lambda * d.x()), c.exponent);
  };
  if (g(0.0) < 0.0) return 0.0;
  double hi = 0.0;
  if (std::isfinite(lambda_top)) {
    if (g(lambda_top) >= 0.0) return std::max(0.0, lambda_top);
    hi = lambda_top;
  } else {
    hi = std::max(scale, 1e-300);
    int guard = 0;
    while (g(hi) >= 0.0) {
      hi *= 2.0;
      if (++guard > 2000) return kInfinity;
    }
  }
  // g is concave with g(0) >= 0, so {g >= 0} is an interval [0, root].
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double primitive_exit(const ConvexPrimitive& p, const Point& o, const Point& dir, double scale) {
  return std::visit(
      Overloaded{
          [&](const HalfPlane& h) {
            const double nd = h.normal.dot(dir);
            if (nd <= 0.0) return kInfinity;
            return std::max(0.0, (h.offset - h.normal.dot(o)) / nd);
          },
          [&](const Disk& disk) {
            const Point oc = o - disk.center;
            const double b = oc.dot(dir);
            const double cc = oc.squaredNorm() - disk.radius * disk.radius;
            const double disc = b * b - cc;
            if (disc < 0.0) return 0.0;
            return std::max(0.0, -b + std::sqrt(disc));
          },
          [&](const Ellipse& e) {
            const Eigen::Matrix2d rot = rotation(-e.angle);
            Point q = rot * (o - e.center);
            Point v = rot * dir;
            q.x() /= e.semi_axis_x;
            q.y() /= e.semi_axis_y;
            v.x() /= e.semi_axis_x;
            v.y() /= e.semi_axis_y;
            const double a = v.squaredNorm();
            const double b = q.dot(v);
            const double cc = q.squaredNorm() - 1.0;
            const double disc = b * b - a * cc;
            if (disc < 0.0) return 0.0;
            return std::max(0.0, (-b + std::sqrt(disc)) / a);
          },
          [&](const PowerCap& c) { return cap_exit(c, o, dir, scale); }},
      p);
}

Point primitive_normal(const ConvexPrimitive& p, const Point& x, double tol) {
  return std::visit(
      Overloaded{
          [&](const HalfPlane& h) -> Point { return h.normal; },
          [&](const Disk& d) -> Point {
            const Point v = x - d.center;
            return v.norm() > 0.0 ? Point(v.normalized()) : Point(1.0, 0.0);
          },
          [&](const Ellipse& e) -> Point {
            const Point q = ellipse_local(e, x);
            const Point grad_local{q.x() / (e.semi_axis_x * e.semi_axis_x),
                                   q.y() / (e.semi_axis_y * e.semi_axis_y)};
            const Point g = rotation(e.angle) * grad_local;
            return g.norm() > 0.0 ? Point(g.normalized()) : Point(1.0, 0.0);
          },
          [&](const PowerCap& c) -> Point {
            const Point l = cap_local(c, x);
            const double s = l.x();
            Point sum = Point::Zero();
            if (std::abs(l.y() - c.height) <= tol) sum += c.axis;
            const double curve = c.coefficient * std::pow(std::abs(s), c.exponent);
            if (std::abs(l.y() - curve) <= tol || sum.isZero()) {
              double slope = 0.0;
              if (s != 0.0) {
                slope = c.coefficient * c.exponent * std::pow(std::abs(s), c.exponent - 1.0) *
                        (s > 0.0 ? 1.0 : -1.0);
              }
              const Point local = Point(slope, -1.0).normalized();
              sum += local.x() * perp(c.axis) + local.y() * c.axis;
            }
            return sum.normalized();
          }},
      p);
}

double feature_size(const ConvexPrimitive& p) {
  return std::visit(
      Overloaded{[](const HalfPlane&) { return kInfinity; },
                 [](const Disk& d) { return d.radius; },
                 [](const Ellipse& e) { return std::min(e.semi_axis_x, e.semi_axis_y); },
                 [](const PowerCap& c) {
                   return std::pow(c.height / c.coefficient, 1.0 / c.exponent);
                 }},
      p);
}

std::optional<double> primitive_lambda(const ConvexPrimitive& p) {
  return std::visit(
      Overloaded{[](const HalfPlane&) -> std::optional<double> { return std::nullopt; },
                 [](const Disk& d) -> std::optional<double> { return 1.0 / d.radius; },
                 [](const Ellipse& e) -> std::optional<double> {
                   const double big = std::max(e.semi_axis_x, e.semi_axis_y);
                   const double small = std::min(e.semi_axis_x, e.semi_axis_y);
                   return small / (big * big);
                 },
                 [](const PowerCap&) -> std::optional<double> { return std::nullopt; }},
      p);
}

ConvexPrimitive validated(ConvexPrimitive p) {
  std::visit(Overloaded{
                 [](HalfPlane& h) {
                   const double norm = h.normal.norm();
                   if (!(norm > 0.0) || !std::isfinite(h.offset))
                     throw ConfigError("half_plane: normal must be a nonzero vector");
                   h.normal /= norm;
                   h.offset /= norm;
                 },
                 [](Disk& d) {
                   if (!(d.radius > 0.0)) throw ConfigError("disk: radius must be positive");
                 },
                 [](Ellipse& e) {
                   if (!(e.semi_axis_x > 0.0) || !(e.semi_axis_y > 0.0))
                     throw ConfigError("ellipse: semi-axes must be positive");
                 },
                 [](PowerCap& c) {
                   const double norm = c.axis.norm();
                   if (!(norm > 0.0)) throw ConfigError("power_cap: axis must be nonzero");
                   c.axis /= norm;
                   if (!(c.exponent >= 1.0)) throw ConfigError("power_cap: exponent must be >= 1");
                   if (!(c.coefficient > 0.0))
                     throw ConfigError("power_cap: coefficient must be positive");
                   if (!(c.height > 0.0)) throw ConfigError("power_cap: height must be positive");
                 }},
             p);
  return p;
}

double max_level(const DomainSpec& domain, const Point& x) {
  double worst = -kInfinity;
  for (const auto& p : domain.primitives()) worst = std::max(worst, level(p, x));
  return worst;
}

std::vector<Point> cast_all(const std::vector<ConvexPrimitive>& prims, const Point& origin,
                            int m, double scale, bool* unbounded) {
  std::vector<Point> hits;
  hits.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / m;
    const Point dir{std::cos(theta), std::sin(theta)};
    double t = kInfinity;
    for (const auto& p : prims) t = std::min(t, primitive_exit(p, origin, dir, scale));
    if (!std::isfinite(t)) {
      if (unbounded) *unbounded = true;
      continue;
    }
    hits.push_back(origin + t * dir);
  }
  return hits;
}

double max_pairwise(const std::vector<Point>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(best);
}

}  // namespace

Frame Frame::from_normal(const Point& origin, const Point& inward_normal) {
  const Point n = inward_normal.normalized();
  return Frame{origin, n, Point(n.y(), -n.x())};
}

DomainSpec::DomainSpec(int dimension, std::vector<ConvexPrimitive> primitives,
                       Point interior_point)
    : dimension_(dimension), interior_point_(std::move(interior_point)) {
  if (dimension_ < 2) throw ConfigError("dimension n must be >= 2");
  if (primitives.empty()) throw ConfigError("domain needs at least one primitive");
  primitives_.reserve(primitives.size());
  for (auto& p : primitives) primitives_.push_back(validated(std::move(p)));

  double worst = -kInfinity;
  for (const auto& p : primitives_) worst = std::max(worst, level(p, interior_point_));
  if (!(worst < 0.0)) throw GeometryError("empty interior: interior_point is not strictly inside");

  // Coarse scale for the PowerCap ray search before extent_ is known.
  double scale = 1.0;
  for (const auto& p : primitives_) {
    const double f = feature_size(p);
    if (std::isfinite(f)) scale = std::max(scale, f);
  }
  bool unbounded = false;
  const auto hits = cast_all(primitives_, interior_point_, 64, scale, &unbounded);
  if (unbounded) throw GeometryError("unbounded domain");
  extent_ = max_pairwise(hits);
  double inradius = kInfinity;
  for (const auto& p : primitives_) inradius = std::min(inradius, inside_distance(p, interior_point_));
  if (!(extent_ > 0.0) || !(inradius > 1e-9 * extent_))
    throw GeometryError("empty interior: domain is degenerate");
}

DomainSpec make_disk(double radius, Point center, int dimension) {
  return DomainSpec(dimension, {Disk{center, radius}}, center);
}

DomainSpec make_rectangle(Point lower, Point upper, int dimension) {
  return DomainSpec(dimension,
                    {HalfPlane{{-1, 0}, -lower.x()}, HalfPlane{{1, 0}, upper.x()},
                     HalfPlane{{0, -1}, -lower.y()}, HalfPlane{{0, 1}, upper.y()}},
                    0.5 * (lower + upper));
}

DomainSpec make_unit_square(int dimension) {
  return make_rectangle({0.0, 0.0}, {1.0, 1.0}, dimension);
}

DomainSpec make_ellipse(double semi_x, double semi_y, Point center, double angle, int dimension) {
  return DomainSpec(dimension, {Ellipse{center, semi_x, semi_y, angle}}, center);
}

DomainSpec make_lens(double radius, double separation, int dimension) {
  const double half = 0.5 * separation;
  return DomainSpec(dimension, {Disk{{-half, 0.0}, radius}, Disk{{half, 0.0}, radius}},
                    Point::Zero());
}

DomainSpec make_power_cap(double exponent, double coefficient, double height, int dimension) {
  return DomainSpec(dimension, {PowerCap{Point::Zero(), {0.0, 1.0}, exponent, coefficient, height}},
                    Point(0.0, 0.5 * height));
}

DomainSpec rigid_transform(const DomainSpec& domain, double angle, const Point& shift) {
  const Eigen::Matrix2d rot = rotation(angle);
  std::vector<ConvexPrimitive> out;
  for (const auto& p : domain.primitives()) {
    out.push_back(std::visit(
        Overloaded{[&](const HalfPlane& h) -> ConvexPrimitive {
                     const Point n = rot * h.normal;
                     return HalfPlane{n, h.offset + n.dot(shift)};
                   },
                   [&](const Disk& d) -> ConvexPrimitive {
                     return Disk{rot * d.center + shift, d.radius};
                   },
                   [&](const Ellipse& e) -> ConvexPrimitive {
                     return Ellipse{rot * e.center + shift, e.semi_axis_x, e.semi_axis_y,
                                    e.angle + angle};
                   },
                   [&](const PowerCap& c) -> ConvexPrimitive {
                     return PowerCap{rot * c.apex + shift, rot * c.axis, c.exponent,
                                     c.coefficient, c.height};
                   }},
        p));
  }
  return DomainSpec(domain.dimension(), std::move(out), rot * domain.interior_point() + shift);
}

DomainSpec scale_about(const DomainSpec& domain, const Point& center, double factor) {
  if (!(factor > 0.0)) throw ConfigError("scale factor must be positive");
  auto map = [&](const Point& x) -> Point { return center + factor * (x - center); };
  std::vector<ConvexPrimitive> out;
  for (const auto& p : domain.primitives()) {
    out.push_back(std::visit(
        Overloaded{[&](const HalfPlane& h) -> ConvexPrimitive {
                     return HalfPlane{h.normal,
                                      factor * h.offset + (1.0 - factor) * h.normal.dot(center)};
                   },
                   [&](const Disk& d) -> ConvexPrimitive {
                     return Disk{map(d.center), factor * d.radius};
                   },
                   [&](const Ellipse& e) -> ConvexPrimitive {
                     return Ellipse{map(e.center), factor * e.semi_axis_x,
                                    factor * e.semi_axis_y, e.angle};
                   },
                   [&](const PowerCap& c) -> ConvexPrimitive {
                     return PowerCap{map(c.apex), c.axis, c.exponent,
                                     c.coefficient * std::pow(factor, 1.0 - c.exponent),
                                     factor * c.height};
                   }},
        p));
  }
  return DomainSpec(domain.dimension(), std::move(out), map(domain.interior_point()));
}

bool contains(const DomainSpec& domain, const Point& x) { return max_level(domain, x) <= 0.0; }

double boundary_distance(const DomainSpec& domain, const Point& x) {
  if (max_level(domain, x) > 1e-14 * domain.extent()) throw GeometryError("exterior point");
  double best = kInfinity;
  for (const auto& p : domain.primitives()) best = std::min(best, inside_distance(p, x));
  return best;
}

double ray_exit(const DomainSpec& domain, const Point& origin, const Point& dir) {
  double t = kInfinity;
  for (const auto& p : domain.primitives())
    t = std::min(t, primitive_exit(p, origin, dir, domain.extent()));
  return t;
}

std::vector<Point> boundary_samples(const DomainSpec& domain, int m) {
  if (m < 1) throw ConfigError("sample count must be positive");
  bool unbounded = false;
  auto hits = cast_all(domain.primitives(), domain.interior_point(), m, domain.extent(), &unbounded);
  if (unbounded) throw GeometryError("unbounded domain");
  return hits;
}

bool on_boundary(const DomainSpec& domain, const Point& x, double rel_tol) {
  return std::abs(max_level(domain, x)) <= rel_tol * domain.extent();
}

Point outward_normal(const DomainSpec& domain, const Point& boundary_point) {
  const double tol = 1e-9 * domain.extent();
  Point sum = Point::Zero();
  double worst = -kInfinity;
  const ConvexPrimitive* closest = nullptr;
  for (const auto& p : domain.primitives()) {
    const double lv = level(p, boundary_point);
    if (std::abs(lv) <= tol) sum += primitive_normal(p, boundary_point, tol);
    if (lv > worst) {
      worst = lv;
      closest = &p;
    }
  }
  if (sum.norm() < 1e-12) {
    if (closest != nullptr) sum = primitive_normal(*closest, boundary_point, tol);
    if (sum.norm() < 1e-12) sum = boundary_point - domain.interior_point();
  }
  return sum.normalized();
}

Frame boundary_frame(const DomainSpec& domain, const Point& boundary_point) {
  return Frame::from_normal(boundary_point, -outward_normal(domain, boundary_point));
}

double diameter(const DomainSpec& domain, int m) {
  if (m < 16) throw ConfigError("diameter needs m >= 16 samples");
  return max_pairwise(boundary_samples(domain, m));
}

std::optional<double> exterior_sphere_radius(const DomainSpec& domain, int m) {
  if (m < 16) throw ConfigError("exterior_sphere_radius needs m >= 16 samples");
  const auto pts = boundary_samples(domain, m);
  const double diam = max_pairwise(pts);
  const double cap = 10.0 * diam;
  const double coincide = 1e-12 * diam;
  double radius = 0.0;
  for (const auto& x : pts) {
    const Point inward = -outward_normal(domain, x);
    // The tangent ball B_R(x + R inward) holds y iff
    // |y - x|^2 <= 2 R inward . (y - x); the tightest R is a max of ratios.
    for (const auto& y : pts) {
      const Point d = y - x;
      const double sq = d.squaredNorm();
      if (sq <= coincide * coincide) continue;
      const double depth = inward.dot(d);
      if (!(depth > 0.0)) return std::nullopt;
      radius = std::max(radius, sq / (2.0 * depth));
      if (radius > cap) return std::nullopt;
    }
  }
  return radius;
}

// --- classification --------------------------------------------------------

namespace {

constexpr double kEtaMin = 1e-8;
constexpr double kSlopeTol = 0.05;
constexpr int kLocalRaysPerSide = 48;

struct LocalSamples {
  Frame frame;
  double window = 0.0;
  bool flat = false;
  std::vector<double> s;  // |s| of reliable samples
  std::vector<double> t;
};

LocalSamples gather_local(const DomainSpec& domain, const Point& x0) {
  LocalSamples out;
  out.frame = boundary_frame(domain, x0);
  const double tol = 1e-9 * domain.extent();
  double mu = 0.1 * domain.extent();
  for (const auto& p : domain.primitives())
    if (std::abs(level(p, x0)) <= tol) mu = std::min(mu, feature_size(p));
  out.window = mu;

  const double noise = 1e-12 * domain.extent();
  const Point origin = domain.interior_point();
  for (int side : {-1, 1}) {
    for (int j = 0; j < kLocalRaysPerSide; ++j) {
      const double frac = -3.0 + 3.0 * j / (kLocalRaysPerSide - 1);
      const double target_s = side * mu * std::pow(10.0, frac);
      const Point target = out.frame.to_world({target_s, 0.0});
      const Point dir = (target - origin).normalized();
      const Point hit = origin + ray_exit(domain, origin, dir) * dir;
      const Point l = out.frame.to_local(hit);
      const double s = std::abs(l.x());
      if (!(s > 0.0) || s > mu) continue;
      if (l.y() <= noise) {
        if (s >= 0.01 * mu) out.flat = true;
        continue;
      }
      if (l.y() <= 1e3 * noise) continue;
      out.s.push_back(s);
      out.t.push_back(l.y());
    }
  }
  if (out.s.size() < 4) out.flat = true;
  return out;
}

double eta_for(const LocalSamples& ls, double a) {
  double eta = kInfinity;
  for (std::size_t k = 0; k < ls.s.size(); ++k)
    eta = std::min(eta, ls.t[k] / std::pow(ls.s[k], a));
  return eta;
}

// Log-log slope of t/|s|^a over the innermost decade of samples. A candidate
// exponent that is too small shows up as a positive slope (the ratio decays
// to zero at the point).
double inner_slope(const LocalSamples& ls, double a) {
  const double smin = *std::min_element(ls.s.begin(), ls.s.end());
  std::vector<std::pair<double, double>> xy;
  for (std::size_t k = 0; k < ls.s.size(); ++k)
    if (ls.s[k] <= 10.0 * smin) xy.emplace_back(std::log(ls.s[k]), std::log(ls.t[k]) - a * std::log(ls.s[k]));
  if (xy.size() < 4) {
    std::vector<std::size_t> order(ls.s.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return ls.s[i] < ls.s[j]; });
    xy.clear();
    for (std::size_t k = 0; k < std::min<std::size_t>(8, order.size()); ++k) {
      const auto i = order[k];
      xy.emplace_back(std::log(ls.s[i]), std::log(ls.t[i]) - a * std::log(ls.s[i]));
    }
  }
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= xy.size();
  my /= xy.size();
  double sxy = 0.0, sxx = 0.0;
  for (auto [x, y] : xy) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

BoundaryClassification classify_from(const Point& x0, const LocalSamples& ls,
                                     std::span<const double> candidates) {
  BoundaryClassification out;
  out.point = x0;
  out.frame = ls.frame;
  out.window = ls.window;
  if (ls.flat) return out;
  for (double a : candidates) {
    if (!std::isfinite(a)) continue;
    const double eta = eta_for(ls, a);
    if (eta >= kEtaMin && inner_slope(ls, a) <= kSlopeTol) {
      out.a = a;
      out.eta = eta;
      return out;
    }
  }
  return out;
}

void check_candidates(std::span<const double> a_candidates) {
  if (a_candidates.empty()) throw ConfigError("no candidate exponents");
  for (std::size_t k = 0; k < a_candidates.size(); ++k) {
    if (!(a_candidates[k] >= 1.0)) throw ConfigError("candidate exponents must be >= 1");
    if (k > 0 && a_candidates[k] < a_candidates[k - 1])
      throw ConfigError("candidate exponents must be sorted ascending");
  }
}

}  // namespace

std::vector<double> default_exponent_candidates() {
  return {1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};
}

BoundaryClassification classify_boundary_point(const DomainSpec& domain, const Point& x0,
                                               std::span<const double> a_candidates) {
  check_candidates(a_candidates);
  if (!on_boundary(domain, x0)) throw GeometryError("point is not on the boundary");
  return classify_from(x0, gather_local(domain, x0), a_candidates);
}

double local_eta(const DomainSpec& domain, const Point& x0, double a) {
  if (!on_boundary(domain, x0)) throw GeometryError("point is not on the boundary");
  const auto ls = gather_local(domain, x0);
  if (ls.flat) return 0.0;
  return eta_for(ls, a);
}

DomainClassification classify_domain(const DomainSpec& domain, int m,
                                     std::span<const double> a_candidates) {
  if (m < 16) throw ConfigError("classify_domain needs m >= 16 samples");
  check_candidates(a_candidates);
  const auto pts = boundary_samples(domain, m);
  std::vector<LocalSamples> locals;
  locals.reserve(pts.size());
  DomainClassification out;
  out.samples = static_cast<int>(pts.size());
  double a_max = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      locals.push_back(gather_local(domain, pts[k]));
      const auto c = classify_from(pts[k], locals.back(), a_candidates);
      if (c.flat()) return out;
      a_max = std::max(a_max, c.a);
    } catch (const Error& e) {
      throw GeometryError("sample " + std::to_string(k) + ": " + e.what());
    }
  }
  double eta = kInfinity;
  for (const auto& ls : locals) eta = std::min(eta, eta_for(ls, a_max));
  out.a = a_max;
  out.eta = eta;
  return out;
}

EnclosingBallReport enclosing_ball_check(const DomainSpec& domain, const Point& z, double radius,
                                         int m) {
  const Frame frame = boundary_frame(domain, z);
  EnclosingBallReport report;
  report.radius = radius;
  const auto pts = boundary_samples(domain, m);
  report.samples = static_cast<int>(pts.size());
  report.max_violation = -kInfinity;
  const Point center{0.0, radius};
  for (const auto& y : pts)
    report.max_violation = std::max(report.max_violation, (frame.to_local(y) - center).norm() - radius);
  return report;
}

GeometrySummary summarize(const DomainSpec& domain, int m) {
  GeometrySummary s;
  s.samples = m;
  s.diameter = diameter(domain, m);
  s.exterior_radius = exterior_sphere_radius(domain, m);
  std::optional<double> lambda;
  for (const auto& p : domain.primitives()) {
    const auto l = primitive_lambda(p);
    if (!l) {
      lambda.reset();
      break;
    }
    lambda = lambda ? std::min(*lambda, *l) : *l;
  }
  s.lambda = lambda;
  return s;
}

}  // namespace hypmin
