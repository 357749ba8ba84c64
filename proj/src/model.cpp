#include "plc/model.hpp"

#include <cmath>
#include <sstream>

#include "plc/errors.hpp"
#include "plc/quadrature.hpp"

namespace plc {

MaterialModel::MaterialModel(double k1, double k3) : k1_(k1), k3_(k3) {
  if (!(std::isfinite(k1) && std::isfinite(k3) && k1 > 0.0 && k3 > 0.0))
    throw Error(ErrorCode::InvalidCoefficients, "model", "K1 and K3 must be positive and finite");
}

double MaterialModel::speed(double theta) const {
  double c = std::cos(theta), s = std::sin(theta);
  return std::sqrt(k1_ * c * c + k3_ * s * s);
}

WaveSpeed MaterialModel::wave_speed(double theta) const {
  double cs = std::cos(theta), sn = std::sin(theta);
  double c = std::sqrt(k1_ * cs * cs + k3_ * sn * sn);
  return {c, (k3_ - k1_) * sn * cs / c};
}

double MaterialModel::c_lower() const { return std::sqrt(std::min(k1_, k3_)); }
double MaterialModel::c_upper() const { return std::sqrt(std::max(k1_, k3_)); }
double MaterialModel::c1() const { return std::fabs(std::sqrt(k3_) - std::sqrt(k1_)); }
double MaterialModel::c1_coarse() const { return std::fabs(k3_ - k1_) / (2.0 * c_lower()); }

double MaterialModel::c2s_integral(double theta) const {
  if (theta == 0.0) return 0.0;
  int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(theta) / 0.5)));
  return gauss_integrate(
      [this](double s) {
        double c = speed(s);
        return c * c * s;
      },
      0.0, theta, panels, 12);
}

BoundarySpec BoundarySpec::dirichlet_robin(USide side, double iota) {
  BoundarySpec b;
  b.u_side = side;
  b.iota1 = 1.0;
  b.iota2 = 0.0;
  b.iota3 = iota;
  b.iota4 = 1.0;
  return b;
}

double ProblemSpec::boundary_energy_left(double theta) const {
  if (bc.left_dirichlet()) return 0.0;
  return bc.kappa_left() * model.c2s_integral(theta);
}

double ProblemSpec::boundary_energy_right(double theta) const {
  if (bc.right_dirichlet()) return 0.0;
  return bc.iota_right() * model.c2s_integral(theta);
}

namespace {
constexpr int kTablePoints = 1025;

void push(std::vector<Violation>& out, std::string at, std::string what, double r) {
  out.push_back({std::move(at), std::move(what), r});
}
}  // namespace

std::vector<Violation> check(const ProblemSpec& p, double tol) {
  std::vector<Violation> v;
  const BoundarySpec& b = p.bc;
  const double io[4] = {b.iota1, b.iota2, b.iota3, b.iota4};
  for (int i = 0; i < 4; ++i)
    if (!(io[i] >= 0.0) || !std::isfinite(io[i]))
      push(v, "coefficients", "iota" + std::to_string(i + 1) + " >= 0", io[i]);
  if (b.iota1 == 0.0 && b.iota2 == 0.0) push(v, "coefficients", "iota1^2 + iota2^2 > 0", 0.0);
  if (b.iota3 == 0.0 && b.iota4 == 0.0) push(v, "coefficients", "iota3^2 + iota4^2 > 0", 0.0);
  if (!v.empty()) return v;

  const InitialData& d = p.data;
  // Compatibility of the data with the director-angle conditions, in the
  // (theta0, theta1) form used for the strong/weak anchoring case.
  double left = -b.iota1 * d.theta0.value(0.0) + b.iota2 * d.theta1.value(0.0);
  if (std::fabs(left) > tol)
    push(v, "x=0", b.left_dirichlet() ? "theta0(0) = 0" : "-iota1 theta0(0) + iota2 theta1(0) = 0",
         left);
  double right = b.iota3 * d.theta0.value(M_PI) + b.iota4 * d.theta1.value(M_PI);
  if (std::fabs(right) > tol)
    push(v, "x=pi", b.right_dirichlet() ? "theta0(pi) = 0" : "iota theta0(pi) + theta1(pi) = 0",
         right);
  if (b.u_side == USide::Nonslip) {
    double a = d.u0.value(0.0), c = d.u0.value(M_PI);
    if (std::fabs(a) > tol) push(v, "x=0", "u0(0) = 0", a);
    if (std::fabs(c) > tol) push(v, "x=pi", "u0(pi) = 0", c);
  }
  for (int i = 0; i < kTablePoints; ++i) {
    double x = M_PI * i / (kTablePoints - 1);
    double j = d.J0(x), t0 = d.theta0.value(x), t0x = d.theta0.derivative(x);
    if (!std::isfinite(j) || !std::isfinite(t0) || !std::isfinite(t0x) || !std::isfinite(d.u0.value(x))) {
      push(v, "grid", "initial data finite", x);
      break;
    }
  }
  return v;
}

ValidatedProblem validate(const ProblemSpec& problem, double tol) {
  std::vector<Violation> v = check(problem, tol);
  if (!v.empty()) {
    bool coeff = false;
    std::ostringstream os;
    os.precision(6);
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].endpoint == "coefficients") coeff = true;
      os << (i ? "; " : "") << v[i].endpoint << ": " << v[i].identity << " (residual " << v[i].residual
         << ")";
    }
    throw Error(coeff ? ErrorCode::InvalidCoefficients : ErrorCode::CompatibilityViolation, "model",
                os.str());
  }
  ValidatedProblem out;
  out.spec = problem;
  out.extension = !problem.bc.proved_case();
  out.J0_table.resize(kTablePoints);
  for (int i = 0; i < kTablePoints; ++i) out.J0_table[i] = problem.data.J0(M_PI * i / (kTablePoints - 1));

  // Non-fatal: first-order conditions on theta0 and the J0 endpoint values
  // that a smooth solution would need.
  const BoundarySpec& b = problem.bc;
  const InitialData& d = problem.data;
  double gl = -b.iota1 * d.theta0.value(0.0) + b.iota2 * d.theta0.derivative(0.0);
  double gr = b.iota3 * d.theta0.value(M_PI) + b.iota4 * d.theta0.derivative(M_PI);
  if (std::fabs(gl) > 1e-9) out.warnings.push_back({"x=0", "theta0 satisfies the x=0 condition", gl});
  if (std::fabs(gr) > 1e-9) out.warnings.push_back({"x=pi", "theta0 satisfies the x=pi condition", gr});
  if (b.u_side == USide::StressFree) {
    double a = d.J0(0.0), c = d.J0(M_PI);
    if (std::fabs(a) > 1e-9) out.warnings.push_back({"x=0", "J0(0) = 0", a});
    if (std::fabs(c) > 1e-9) out.warnings.push_back({"x=pi", "J0(pi) = 0", c});
  }
  return out;
}

std::pair<double, double> riemann_from_fields(double theta_t, double theta_x, double theta,
                                              const MaterialModel& model) {
  double c = model.speed(theta);
  return {theta_t + c * theta_x, theta_t - c * theta_x};
}

std::pair<double, double> fields_from_riemann(double R, double S, double theta,
                                              const MaterialModel& model) {
  double c = model.speed(theta);
  return {0.5 * (R + S), (R - S) / (2.0 * c)};
}

double compress(double R) { return 2.0 * std::atan(R); }

double cusp_magnitude(double cusp_tol) { return 1.0 / std::tan(0.5 * cusp_tol); }

Decompressed decompress(double w, double cusp_tol) {
  if (std::fabs(w) > M_PI - cusp_tol) return {std::copysign(cusp_magnitude(cusp_tol), w), true};
  return {std::tan(0.5 * w), false};
}

double wrap_angle(double w) {
  if (w > -M_PI && w <= M_PI) return w;
  double r = std::remainder(w, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

}  // namespace plc
