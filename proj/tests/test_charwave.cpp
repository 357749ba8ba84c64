#include <doctest.h>

#include <cmath>
#include <random>

#include "plc/charwave.hpp"
#include "plc/coupling.hpp"
#include "plc/errors.hpp"

using namespace plc;
using namespace plc::charwave;

TEST_CASE("the initial curve of zero data is the antidiagonal") {
  InitialData d;
  MaterialModel m(1.0, 2.0);
  Gamma0Curve c = Gamma0Curve::build(d, m);
  CHECK(c.xhat() == doctest::Approx(M_PI));
  CHECK(c.xtil() == doctest::Approx(2 * M_PI));
  CHECK(c.X_of_x(1.0) == doctest::Approx(1.0));
  CHECK(c.Y_of_x(1.0) == doctest::Approx(-1.0));
  CHECK(c.x_of_diff(2.0) == doctest::Approx(1.0));
}

TEST_CASE("initial curve inverse maps") {
  InitialData d;
  d.theta0 = Sampler::sine_series({{false, 1, 0.4}});
  d.theta1 = Sampler::sine_series({{false, 2, 0.3}});
  MaterialModel m(1.0, 1.4);
  Gamma0Curve c = Gamma0Curve::build(d, m);
  for (double x : {0.2, 1.0, 2.5}) {
    CHECK(c.x_of_X(c.X_of_x(x)) == doctest::Approx(x).epsilon(1e-10));
    CHECK(c.x_of_Y(c.Y_of_x(x)) == doctest::Approx(x).epsilon(1e-10));
    const double R = d.theta1.value(x) + m.speed(d.theta0.value(x)) * d.theta0.derivative(x);
    CHECK(c.R0(x) == doctest::Approx(R));
    // X' = 1 + R0^2.
    const double h = 1e-5;
    CHECK((c.X_of_x(x + h) - c.X_of_x(x - h)) / (2 * h) == doctest::Approx(1 + R * R).epsilon(1e-6));
  }
}

TEST_CASE("reflection laws reproduce the wall conditions") {
  MaterialModel m(1.0, 1.3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), up(0.3, 3.0), uth(-1.0, 1.0);
  for (int s = 0; s < 500; ++s) {
    const double w = ua(rng), p = up(rng), th = uth(rng), iota = 2.0 * up(rng);
    auto [z, q] = apply_boundary_L0(w, p);
    CHECK(std::fabs(fields_from_riemann(std::tan(w / 2), std::tan(z / 2), 0.0, m).first) < 1e-12);
    CHECK(q == doctest::Approx(p));

    auto [w2, p2] = apply_boundary_Lpi(w, p, th, iota, m);
    auto f = fields_from_riemann(std::tan(w2 / 2), std::tan(w / 2), th, m);
    CHECK(f.second + iota * th == doctest::Approx(0.0).scale(1 + std::fabs(f.first)));
    CHECK(p2 > 0.0);

    auto [z3, q3] = apply_boundary_L0_robin(w, p, th, iota, m);
    auto g = fields_from_riemann(std::tan(w / 2), std::tan(z3 / 2), th, m);
    CHECK(g.second - iota * th == doctest::Approx(0.0).scale(1 + std::fabs(g.first)));
    CHECK(q3 > 0.0);

    auto [w4, p4] = apply_boundary_Lpi_dirichlet(w, p);
    CHECK(std::fabs(fields_from_riemann(std::tan(w4 / 2), std::tan(w / 2), 0.0, m).first) < 1e-12);
    CHECK(p4 == doctest::Approx(p));
  }
}

TEST_CASE("a cusp reaching the weak-anchoring wall is reported") {
  MaterialModel m(1.0, 1.0);
  try {
    apply_boundary_Lpi(M_PI, 1.0, 0.2, 1.0, m);
    FAIL("expected CuspAtRobinBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CuspAtRobinBoundary);
  }
  CHECK_NOTHROW(apply_boundary_Lpi(M_PI, 1.0, 0.0, 1.0, m));
}

TEST_CASE("constant director with insulated walls is an equilibrium") {
  ProblemSpec p;
  p.model = MaterialModel(1.0, 1.5);
  p.bc.iota1 = 0.0;
  p.bc.iota2 = 1.0;
  p.bc.iota3 = 0.0;
  p.bc.iota4 = 1.0;
  p.data.theta0 = Sampler::constant(0.3);
  ValidatedProblem vp = validate(p);
  coupling::GridConfig gc;
  gc.K = 128;
  gc.nx = 16;
  for (coupling::Mode mode : {coupling::Mode::WaveOnly, coupling::Mode::Coupled}) {
    coupling::SolutionBundle b = coupling::extend_to_horizon(vp, {}, gc, 0.4, mode);
    double dev = 0.0;
    for (std::size_t i = 0; i < b.grid.size(); ++i)
      dev = std::max({dev, std::fabs(b.grid.theta[i] - 0.3), std::fabs(b.grid.theta_t[i]), std::fabs(b.grid.J[i]),
                      std::fabs(b.grid.u[i])});
    CHECK(dev < 1e-12);
  }
}

TEST_CASE("undamped lattice conserves the wave energy") {
  InitialData d;
  d.theta0 = Sampler::sine_series({{false, 2, 0.3}});
  d.theta1 = Sampler::sine_series({{false, 1, 0.4}});
  MaterialModel m(1.0, 1.6);
  BoundarySpec bc;  // Dirichlet at both walls
  bc.iota3 = 1.0;
  bc.iota4 = 0.0;
  ProblemSpec p{m, bc, d};
  Gamma0Curve c = Gamma0Curve::build(d, m);
  MarchOptions opt;
  opt.damping = 0.0;
  double prev_drift = 0.0;
  for (int K : {256, 512}) {
    opt.K = K;
    CharGrid g = march(c, bc, JSource{}, 1.0, opt);
    const double e0 = energy_char(g, p, 0.0);
    double drift = 0.0;
    for (double t : {0.25, 0.5, 1.0}) drift = std::max(drift, std::fabs(energy_char(g, p, t) - e0) / e0);
    CHECK(drift < 1e-3);
    if (prev_drift > 0.0) CHECK(drift < prev_drift / 2.5);
    prev_drift = drift;
    CHECK(g.min_p > 0.0);
    CHECK(g.min_q > 0.0);
  }
}

TEST_CASE("damped mode follows separation of variables") {
  // theta_tt + 2 theta_t = theta_xx, theta(0) = 0, theta_x(pi) = 0, theta0 = sin(x/2):
  // theta(pi, 1) = T(1) with T'' + 2T' + T/4 = 0, T(0) = 1, T'(0) = 0.
  const double expected = 0.930294794098041;
  ProblemSpec p;
  p.bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 0.0);
  p.data.theta0 = Sampler::sine_series({{false, 0.5, 1.0}});
  ValidatedProblem vp = validate(p);
  coupling::GridConfig gc;
  gc.K = 512;
  gc.nx = 32;
  coupling::SolutionBundle b = coupling::extend_to_horizon(vp, {}, gc, 1.0, coupling::Mode::WaveOnly);
  const PhysGrid& g = b.grid;
  CHECK(g.theta[g.index(g.nt, g.nx)] == doctest::Approx(expected).epsilon(5e-3));
  CHECK(boundary_theta(*b.char_grid, true, 1.0) == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("marching on from a prefix reproduces the full march") {
  InitialData d;
  d.theta0 = Sampler::sine_series({{false, 2, 0.3}});
  MaterialModel m(1.0, 1.6);
  BoundarySpec bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 1.0);
  Gamma0Curve c = Gamma0Curve::build(d, m);
  PhysGrid J = PhysGrid::make(16, 40, 1.0);
  for (int k = 0; k <= J.nt; ++k)
    for (int i = 0; i <= J.nx; ++i) J.J[J.index(k, i)] = 0.2 * std::sin(J.x(i)) * std::cos(3 * J.t(k));
  MarchOptions opt;
  opt.K = 256;
  CharGrid full = march(c, bc, JSource{&J}, 1.0, opt);
  CharGrid resumed = march(c, bc, JSource{&J}, 1.0, opt, full, 0.5);
  REQUIRE(resumed.nodes.size() == full.nodes.size());
  bool same = true;
  for (std::size_t n = 0; n < full.nodes.size(); ++n)
    same = same && full.nodes[n].theta == resumed.nodes[n].theta && full.nodes[n].t == resumed.nodes[n].t;
  CHECK(same);
  CHECK(resumed.min_p == full.min_p);
}
