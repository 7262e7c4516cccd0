#pragma once

#include "hypmin/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace hypmin {

/// The two members of W = ((x_n / eps)^{2/a} - r^2)^{1/b}.
///   kPowerType: a > 2, b = 2, eps > 0 (a global barrier at an (a, eta) point)
///   kLocal:     a in (1, 2), b in (2, 3), eps = 1 (after the local rescaling)
/// Their command-line tags are "s3" and "s4".
enum class BarrierFamily { kPowerType, kLocal };

std::string family_tag(BarrierFamily family);
BarrierFamily family_from_tag(const std::string& tag);

struct BarrierParams {
  BarrierFamily family = BarrierFamily::kPowerType;
  double a = 3.0;
  double b = 2.0;
  double epsilon = 1.0;
  int n = 2;

  static BarrierParams power_type(double a, double epsilon, int n);
  static BarrierParams local(double a, double b, int n);

  /// Throws BarrierError("wrong family: ...") when the parameters leave the
  /// family's admissible ranges.
  void validate() const;
};

/// Radicand (x_n / eps)^{2/a} - r^2; negative outside the support.
double barrier_radicand(const BarrierParams& p, double r, double xn);

double eval_W(const BarrierParams& p, double r, double xn);

struct WDerivatives {
  double W = 0.0;
  double W_r = 0.0;
  double W_n = 0.0;
  double W_rr = 0.0;
  double W_rn = 0.0;
  double W_nn = 0.0;
};

/// Closed-form first and second derivatives. Requires radicand >= 1e-14.
WDerivatives eval_W_derivatives(const BarrierParams& p, double r, double xn);

/// (1 + W_r^2 + W_n^2) F[W] split into its eight closed-form terms.
struct JDecomposition {
  std::array<double, 8> J{};
  double I_plus_J = 0.0;
  double prefactor = 1.0;  ///< 1 + W_r^2 + W_n^2
};

JDecomposition eval_J_decomposition(const BarrierParams& p, double r, double xn);

/// F[W] = (I + J) / (1 + W_r^2 + W_n^2).
double eval_F_of_W(const BarrierParams& p, double r, double xn);

/// Largest admissible eps for the power-type family, times (1 - 1e-9):
/// min{eta, ((a - 2) / a^2)^{a/2} d^{1-a}} where d bounds x_n on the domain.
double choose_epsilon(double a, double eta, double d);

/// U = (n+1)^2 x^{1/(n+1)} - x^{2 - 1/(n+1)} on 0 < x <= 1.
struct FlatBarrierValue {
  double U = 0.0;
  double U_n = 0.0;
  double U_nn = 0.0;
  double lhs = 0.0;  ///< U U_nn + n (1 + U_n^2)
};

FlatBarrierValue eval_flat_barrier(int n, double xn);

/// The closed-form ceiling -6 n^2 + 3 n + 2 for U U_nn + n (1 + U_n^2).
inline double flat_barrier_bound(int n) { return -6.0 * n * n + 3.0 * n + 2.0; }

struct FlatCertification {
  int n = 2;
  int samples = 0;
  double max_lhs = 0.0;
  double argmax = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Evaluates lhs on the uniform points k / samples, k = 1..samples.
FlatCertification certify_flat_barrier(int n, int samples);

/// Upper bound of the local-barrier criterion as a function of the scale A.
double eval_Phi(double a, double b, int n, double A);

/// Rescaling about a boundary point: x~ = origin' + (A / d) (x - origin),
/// u~ = (A / d) u.
struct LocalScaling {
  double A = 0.0;
  double cap = 0.0;  ///< eta^{1/(a-1)} d
  double diameter = 0.0;
  double eta = 0.0;
  double a = 0.0;

  double factor() const { return A / diameter; }
  /// Coefficient of the rescaled profile: eta (d / A)^{a-1}.
  double scaled_eta() const;
};

/// Largest A <= eta^{1/(a-1)} d with eval_Phi(a, b, n, A) <= 0 (relative
/// tolerance 1e-6).
LocalScaling choose_A(double a, double eta, double d, int n, double b);

struct CertificationReport {
  BarrierParams params;
  Frame frame;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_F = 0.0;
  Point argmax_F = Point::Zero();  ///< local (r, x_n) of the largest F
  int boundary_samples = 0;
  double min_boundary_W = 0.0;
  int unsupported_samples = 0;
  bool pass = false;
};

/// Apex frame of the domain's PowerCap primitive, if it has exactly one.
std::optional<Frame> power_cap_frame(const DomainSpec& domain);

/// Samples F[W] at quasi-random interior points and W on the boundary.
/// Without an explicit frame the domain must carry a PowerCap primitive whose
/// exponent matches params.a.
CertificationReport certify_supersolution(const BarrierParams& params, const DomainSpec& domain,
                                          int samples, std::uint64_t seed = 0,
                                          std::optional<Frame> frame = std::nullopt);

/// W at a world point, in the given frame. Radicands within rounding of zero
/// are read as zero; genuinely negative ones throw.
double barrier_value(const BarrierParams& params, const Frame& frame, const Point& x);

}  // namespace hypmin
