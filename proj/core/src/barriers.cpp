#include "hypmin/barriers.hpp"

#include "hypmin/errors.hpp"
#include "hypmin/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hypmin {

namespace {

// Radicands this close to zero, relative to their two terms, are rounding noise.
constexpr double kRadicandRoundoff = 1e-12;

double radicand_scale(const BarrierParams& p, double r, double xn) {
  return std::pow(xn / p.epsilon, 2.0 / p.a) + r * r;
}

// Derivatives without the support guard; W > 0 is assumed.
WDerivatives derivatives_unchecked(const BarrierParams& p, double r, double xn) {
  const double a = p.a, b = p.b, eps = p.epsilon;
  const double X = xn / eps;
  const double W = std::pow(std::pow(X, 2.0 / a) - r * r, 1.0 / b);
  const double w1 = std::pow(W, 1.0 - b);
  const double w2 = std::pow(W, 1.0 - 2.0 * b);
  WDerivatives d;
  d.W = W;
  d.W_r = -(2.0 / b) * w1 * r;
  d.W_n = (2.0 / (a * b)) * w1 * std::pow(X, 2.0 / a - 1.0) / eps;
  d.W_rr = 4.0 * (1.0 - b) / (b * b) * w2 * r * r - (2.0 / b) * w1;
  d.W_nn = 4.0 * (1.0 - b) / (a * a * b * b) * w2 * std::pow(X, 4.0 / a - 2.0) / (eps * eps) +
           2.0 * (2.0 - a) / (a * a * b) * w1 * std::pow(X, 2.0 / a - 2.0) / (eps * eps);
  d.W_rn = 4.0 * (b - 1.0) / (a * b * b) * w2 * std::pow(X, 2.0 / a - 1.0) * r / eps;
  return d;
}

// The eight terms nearly cancel where F[W] is close to zero, which is where
// certification decides the sign, so they are formed and summed in extended
// precision before rounding to double.
JDecomposition decomposition_unchecked(const BarrierParams& p, double r_in, double xn) {
  using Real = long double;
  const Real a = p.a, b = p.b, eps = p.epsilon;
  const Real n = p.n;
  const Real r = r_in;
  const Real X = static_cast<Real>(xn) / eps;
  const Real W = std::pow(std::pow(X, 2 / a) - r * r, 1 / b);
  const Real K = std::pow(X, 4 / a - 2) / (eps * eps);
  const Real L = std::pow(X, 2 / a - 2) / (eps * eps);
  const Real w1 = std::pow(W, 1 - b);
  const Real w2 = std::pow(W, 1 - 2 * b);
  const Real w3 = std::pow(W, 3 - 3 * b);
  const Real r2 = r * r;
  const std::array<Real, 8> J = {
      4 * (n + 1 - b) / (b * b) * w2 * r2,
      (1 - n) * (2 / b) * w1,
      (1 - n) * (8 / (a * a * b * b * b)) * w3 * K,
      4 * (n + 1 - b) / (a * a * b * b) * w2 * K,
      2 * (2 - a) / (a * a * b) * w1 * L,
      8 * (2 - a) / (a * a * b * b * b) * w3 * r2 * L,
      (2 - n) * (8 / (b * b * b)) * w3 * r2,
      n / W};
  JDecomposition out;
  Real sum = 0;
  for (std::size_t k = 0; k < J.size(); ++k) {
    out.J[k] = static_cast<double>(J[k]);
    sum += J[k];
  }
  out.I_plus_J = static_cast<double>(sum);
  const Real w4 = std::pow(W, 2 - 2 * b);
  out.prefactor = static_cast<double>(1 + 4 / (b * b) * w4 * r2 + 4 / (a * a * b * b) * w4 * K);
  return out;
}

void require_interior(const BarrierParams& p, double r, double xn) {
  p.validate();
  if (!(xn > 0.0)) throw BarrierError("outside barrier support: x_n must be positive");
  if (!(barrier_radicand(p, r, xn) >= 1e-14))
    throw BarrierError("outside barrier support: too close to the support boundary");
}

}  // namespace

std::string family_tag(BarrierFamily family) {
  return family == BarrierFamily::kPowerType ? "s3" : "s4";
}

BarrierFamily family_from_tag(const std::string& tag) {
  if (tag == "s3") return BarrierFamily::kPowerType;
  if (tag == "s4") return BarrierFamily::kLocal;
  throw ConfigError("unknown barrier family '" + tag + "'");
}

BarrierParams BarrierParams::power_type(double a, double epsilon, int n) {
  BarrierParams p{BarrierFamily::kPowerType, a, 2.0, epsilon, n};
  p.validate();
  return p;
}

BarrierParams BarrierParams::local(double a, double b, int n) {
  BarrierParams p{BarrierFamily::kLocal, a, b, 1.0, n};
  p.validate();
  return p;
}

void BarrierParams::validate() const {
  if (n < 2) throw BarrierError("wrong family: dimension must be at least 2");
  if (family == BarrierFamily::kPowerType) {
    if (!(a > 2.0)) throw BarrierError("wrong family: power-type barrier needs a > 2");
    if (b != 2.0) throw BarrierError("wrong family: power-type barrier needs b = 2");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw BarrierError("wrong family: epsilon must be positive");
  } else {
    if (!(a > 1.0 && a < 2.0)) throw BarrierError("wrong family: local barrier needs a in (1, 2)");
    if (!(b > 2.0 && b < 3.0)) throw BarrierError("wrong family: local barrier needs b in (2, 3)");
    if (epsilon != 1.0) throw BarrierError("wrong family: local barrier needs epsilon = 1");
  }
}

double barrier_radicand(const BarrierParams& p, double r, double xn) {
  return std::pow(xn / p.epsilon, 2.0 / p.a) - r * r;
}

double eval_W(const BarrierParams& p, double r, double xn) {
  p.validate();
  if (!(xn > 0.0)) throw BarrierError("outside barrier support: x_n must be positive");
  const double rad = barrier_radicand(p, r, xn);
  if (rad < 0.0) throw BarrierError("outside barrier support");
  return std::pow(rad, 1.0 / p.b);
}

WDerivatives eval_W_derivatives(const BarrierParams& p, double r, double xn) {
  require_interior(p, r, xn);
  return derivatives_unchecked(p, r, xn);
}

JDecomposition eval_J_decomposition(const BarrierParams& p, double r, double xn) {
  require_interior(p, r, xn);
  return decomposition_unchecked(p, r, xn);
}

double eval_F_of_W(const BarrierParams& p, double r, double xn) {
  const auto j = eval_J_decomposition(p, r, xn);
  return j.I_plus_J / j.prefactor;
}

double choose_epsilon(double a, double eta, double d) {
  if (!(a > 2.0)) throw BarrierError("wrong family: epsilon selection needs a > 2");
  if (!(eta > 0.0) || !(d > 0.0)) throw ConfigError("eta and d must be positive");
  const double bracket = std::pow((a - 2.0) / (a * a), a / 2.0) * std::pow(d, 1.0 - a);
  return std::min(eta, bracket) * (1.0 - 1e-9);
}

FlatBarrierValue eval_flat_barrier(int n, double xn) {
  if (n < 2) throw ConfigError("dimension must be at least 2");
  if (!(xn > 0.0 && xn <= 1.0)) throw ConfigError("flat barrier needs 0 < x_n <= 1");
  const double p = 1.0 / (n + 1.0);
  const double m = n + 1.0;
  FlatBarrierValue v;
  v.U = m * m * std::pow(xn, p) - std::pow(xn, 2.0 - p);
  v.U_n = m * std::pow(xn, p - 1.0) - (2.0 - p) * std::pow(xn, 1.0 - p);
  v.U_nn = -n * std::pow(xn, p - 2.0) - (2.0 - p) * (1.0 - p) * std::pow(xn, -p);
  v.lhs = v.U * v.U_nn + n * (1.0 + v.U_n * v.U_n);
  return v;
}

FlatCertification certify_flat_barrier(int n, int samples) {
  if (samples < 1) throw ConfigError("sample count must be positive");
  FlatCertification out;
  out.n = n;
  out.samples = samples;
  out.bound = flat_barrier_bound(n);
  out.max_lhs = -kInfinity;
  for (int k = 1; k <= samples; ++k) {
    const double x = static_cast<double>(k) / samples;
    const double lhs = eval_flat_barrier(n, x).lhs;
    if (lhs > out.max_lhs) {
      out.max_lhs = lhs;
      out.argmax = x;
    }
  }
  out.pass = out.max_lhs <= out.bound;
  return out;
}

double eval_Phi(double a, double b, int n, double A) {
  if (!(a > 1.0 && a < 2.0) || !(b > 2.0 && b < 3.0) || n < 2)
    throw BarrierError("wrong family: criterion needs a in (1, 2), b in (2, 3), n >= 2");
  if (!(A > 0.0)) throw ConfigError("scale A must be positive");
  const double ab = a * b;
  return 4.0 * (n + 1.0 - b) / (b * b) * std::pow(A, 2.0 - 4.0 / ab) +
         (4.0 * n + 4.0 - 2.0 * ab) / (a * a * b * b) * std::pow(A, 2.0 * (b - 2.0) / ab) +
         n * std::pow(A, 2.0 * (ab + b - 4.0) / ab) - 8.0 * (n + a - 3.0) / (a * a * b * b * b);
}

double LocalScaling::scaled_eta() const { return eta * std::pow(diameter / A, a - 1.0); }

LocalScaling choose_A(double a, double eta, double d, int n, double b) {
  if (!(eta > 0.0) || !(d > 0.0)) throw ConfigError("eta and d must be positive");
  LocalScaling s;
  s.a = a;
  s.eta = eta;
  s.diameter = d;
  s.cap = std::pow(eta, 1.0 / (a - 1.0)) * d;
  if (eval_Phi(a, b, n, s.cap) <= 0.0) {
    s.A = s.cap;
    return s;
  }
  double hi = s.cap;
  double lo = s.cap;
  while (eval_Phi(a, b, n, lo) > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-30) throw BarrierError("no admissible scale A above 1e-30");
  }
  // Phi is increasing in A; bisect geometrically keeping Phi(lo) <= 0 < Phi(hi).
  while (hi / lo - 1.0 > 1e-6) {
    const double mid = std::sqrt(lo * hi);
    if (eval_Phi(a, b, n, mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  s.A = lo;
  return s;
}

std::optional<Frame> power_cap_frame(const DomainSpec& domain) {
  std::optional<Frame> frame;
  for (const auto& prim : domain.primitives()) {
    if (const auto* cap = std::get_if<PowerCap>(&prim)) {
      if (frame) return std::nullopt;
      frame = Frame::from_normal(cap->apex, cap->axis);
    }
  }
  return frame;
}

CertificationReport certify_supersolution(const BarrierParams& params, const DomainSpec& domain,
                                          int samples, std::uint64_t seed,
                                          std::optional<Frame> frame) {
  params.validate();
  if (samples < 1) throw ConfigError("sample count must be positive");
  if (params.n != domain.dimension())
    throw BarrierError("wrong family: barrier dimension differs from the domain's");
  if (!frame) {
    const PowerCap* cap = nullptr;
    for (const auto& prim : domain.primitives())
      if (const auto* c = std::get_if<PowerCap>(&prim)) cap = c;
    if (cap == nullptr)
      throw BarrierError("wrong family: domain has no power-cap apex to anchor the barrier");
    if (std::abs(cap->exponent - params.a) > 1e-6 * params.a)
      throw BarrierError("wrong family: domain exponent does not match the barrier exponent");
    frame = power_cap_frame(domain);
    if (!frame) throw BarrierError("wrong family: several power-cap apexes");
  }

  CertificationReport rep;
  rep.params = params;
  rep.frame = *frame;
  rep.seed = seed;
  rep.max_F = -kInfinity;
  rep.min_boundary_W = kInfinity;

  const int nb = std::max(1024, samples / 10);
  const auto boundary = boundary_samples(domain, nb);
  Point lo = frame->to_local(boundary.front()), hi = lo;
  for (const auto& x : boundary) {
    const Point l = frame->to_local(x);
    lo = lo.cwiseMin(l);
    hi = hi.cwiseMax(l);
    const double r = std::abs(l.x()), t = l.y();
    const double scale = t > 0.0 ? radicand_scale(params, r, t) : r * r;
    double W;
    if (t <= 0.0) {
      // Only the anchor itself may sit on {t = 0}.
      if (t < -kRadicandRoundoff * domain.extent() || r > kRadicandRoundoff * domain.extent()) {
        ++rep.unsupported_samples;
        W = -std::sqrt(std::max(r * r, t * t));
      } else {
        W = 0.0;
      }
    } else {
      const double rad = barrier_radicand(params, r, t);
      if (rad >= 0.0) {
        W = std::pow(rad, 1.0 / params.b);
      } else if (rad >= -kRadicandRoundoff * scale) {
        W = 0.0;
      } else {
        ++rep.unsupported_samples;
        W = -std::pow(-rad, 1.0 / params.b);
      }
    }
    rep.min_boundary_W = std::min(rep.min_boundary_W, W);
  }
  rep.boundary_samples = nb;

  HaltonSampler sampler(seed);
  const long long max_draws = 1000LL * samples;
  long long draws = 0;
  while (rep.samples < samples) {
    if (++draws > max_draws) throw GeometryError("rejection sampling failed to hit the domain");
    const Point q = sampler.next();
    const Point l = lo + q.cwiseProduct(hi - lo);
    if (!contains(domain, frame->to_world(l))) continue;
    ++rep.samples;
    const double r = std::abs(l.x()), t = l.y();
    if (!(t > 0.0) || !(barrier_radicand(params, r, t) > 0.0)) {
      ++rep.unsupported_samples;
      continue;
    }
    const auto j = decomposition_unchecked(params, r, t);
    const double F = j.I_plus_J / j.prefactor;
    if (!std::isfinite(F)) {
      ++rep.unsupported_samples;
      continue;
    }
    if (F > rep.max_F) {
      rep.max_F = F;
      rep.argmax_F = Point(r, t);
    }
  }
  rep.pass = rep.unsupported_samples == 0 && rep.max_F <= 1e-12 && rep.min_boundary_W >= -1e-12;
  return rep;
}

double barrier_value(const BarrierParams& params, const Frame& frame, const Point& x) {
  const Point l = frame.to_local(x);
  const double r = std::abs(l.x()), t = l.y();
  if (t <= 0.0) {
    if (t * t + r * r <= kRadicandRoundoff * kRadicandRoundoff) return 0.0;
    throw BarrierError("outside barrier support");
  }
  const double rad = barrier_radicand(params, r, t);
  if (rad >= 0.0) return std::pow(rad, 1.0 / params.b);
  if (rad >= -kRadicandRoundoff * radicand_scale(params, r, t)) return 0.0;
  throw BarrierError("outside barrier support");
}

}  // namespace hypmin
