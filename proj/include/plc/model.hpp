#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plc/sampler.hpp"

namespace plc {

/// |w| above pi - kCuspTol is treated as a cusp (R or S unbounded).
inline constexpr double kCuspTol = 1e-6;

/// Wave speed and its derivative at one angle.
struct WaveSpeed {
  double c;
  double cprime;
};

/// Frank elastic constants and the derived wave-speed law
/// c(theta) = sqrt(K1 cos^2 theta + K3 sin^2 theta).
///
/// The derivative bound uses the exact maximizer of |c'|. Writing
/// s = sin^2 theta, |c'|^2 = (K3-K1)^2 s(1-s) / (K1 + (K3-K1) s), which peaks at
/// s = sqrt(K1)/(sqrt(K1)+sqrt(K3)) with value (sqrt(K3)-sqrt(K1))^2, so
/// max |c'| = |sqrt(K3) - sqrt(K1)|.
class MaterialModel {
 public:
  MaterialModel() = default;
  /// Throws InvalidCoefficients unless both constants are finite and positive.
  MaterialModel(double k1, double k3);

  double k1() const { return k1_; }
  double k3() const { return k3_; }

  double speed(double theta) const;
  WaveSpeed wave_speed(double theta) const;

  double c_lower() const;
  double c_upper() const;
  /// Exact sup of |c'(theta)|.
  double c1() const;
  /// Bound |K3-K1| / (2 min(sqrt K1, sqrt K3)); always >= c1().
  double c1_coarse() const;

  /// Integral of c(s)^2 s ds over [0, theta], by Gauss-Legendre panels.
  double c2s_integral(double theta) const;

 private:
  double k1_ = 1.0;
  double k3_ = 1.0;
};

enum class USide { Nonslip, StressFree };

/// Velocity condition plus the two director-angle conditions
///   -iota1 theta(0) + iota2 theta_x(0) = 0,   iota3 theta(pi) + iota4 theta_x(pi) = 0.
struct BoundarySpec {
  USide u_side = USide::Nonslip;
  double iota1 = 1.0, iota2 = 0.0;
  double iota3 = 0.0, iota4 = 1.0;

  /// Dirichlet theta(0)=0 on the left, theta_x(pi) = -iota theta(pi) on the right.
  static BoundarySpec dirichlet_robin(USide side, double iota);

  bool left_dirichlet() const { return iota2 == 0.0; }
  bool right_dirichlet() const { return iota4 == 0.0; }
  /// theta_x(0) = kappa_left theta(0); meaningful when !left_dirichlet().
  double kappa_left() const { return left_dirichlet() ? 0.0 : iota1 / iota2; }
  /// theta_x(pi) = -iota_right theta(pi); meaningful when !right_dirichlet().
  double iota_right() const { return right_dirichlet() ? 0.0 : iota3 / iota4; }
  /// The combination with strong anchoring at x=0 and weak anchoring at x=pi.
  bool proved_case() const { return left_dirichlet() && !right_dirichlet(); }
};

struct InitialData {
  Sampler u0;
  Sampler theta0;
  Sampler theta1;
  double alpha = 0.2;  ///< Hoelder exponent of J0, recorded only

  double J0(double x) const { return u0.derivative(x) + theta1.value(x); }
};

struct ProblemSpec {
  MaterialModel model;
  BoundarySpec bc;
  InitialData data;

  /// Boundary energy B0(theta(0,t)); zero for strong anchoring.
  double boundary_energy_left(double theta) const;
  /// Boundary energy Bpi(theta(pi,t)); zero for strong anchoring.
  double boundary_energy_right(double theta) const;
};

struct Violation {
  std::string endpoint;  ///< "x=0", "x=pi", "grid" or "coefficients"
  std::string identity;
  double residual = 0.0;
};

/// Result of a successful validate(): the problem plus tabulated J0 and
/// non-fatal findings.
struct ValidatedProblem {
  ProblemSpec spec;
  std::vector<double> J0_table;  ///< J0 on a uniform 1025-point grid over [0, pi]
  bool extension = false;        ///< boundary combination outside the proved case
  std::vector<Violation> warnings;
};

/// All hard violations; empty means valid.
std::vector<Violation> check(const ProblemSpec& problem, double tol = 1e-12);
/// Throws plc::Error (InvalidCoefficients or CompatibilityViolation) listing
/// every violation.
ValidatedProblem validate(const ProblemSpec& problem, double tol = 1e-12);

// Riemann variables and their compressed form.

struct RiemannState {
  double R = 0, S = 0, w = 0, z = 0, p = 1, q = 1;
};

std::pair<double, double> riemann_from_fields(double theta_t, double theta_x, double theta,
                                              const MaterialModel& model);
/// Inverse of riemann_from_fields: (theta_t, theta_x).
std::pair<double, double> fields_from_riemann(double R, double S, double theta,
                                              const MaterialModel& model);

/// Value recovered from a compressed angle. For |w| within kCuspTol of pi the
/// value is the finite sentinel +-cusp_magnitude() and `cusp` is set.
struct Decompressed {
  double value;
  bool cusp;
};

double compress(double R);
Decompressed decompress(double w, double cusp_tol = kCuspTol);
double cusp_magnitude(double cusp_tol = kCuspTol);
/// Maps an angle to (-pi, pi].
double wrap_angle(double w);

}  // namespace plc
