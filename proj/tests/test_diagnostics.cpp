#include <doctest.h>

#include <cmath>

#include "plc/coupling.hpp"
#include "plc/diagnostics.hpp"

using namespace plc;

TEST_CASE("slack is relative with an absolute floor") {
  diag::Slack s;
  CHECK(s.value(1.0) == doctest::Approx(1e-6));
  CHECK(s.value(1e-4) == doctest::Approx(1e-8));
}

TEST_CASE("row energy of prescribed fields") {
  ProblemSpec p;
  p.bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 3.0);
  PhysGrid g = PhysGrid::make(64, 1, 1.0);
  for (int i = 0; i <= g.nx; ++i) {
    const double x = g.x(i);
    g.theta[i] = 0.1 * std::sin(x / 2);
    g.theta_x[i] = 0.05 * std::cos(x / 2);
    g.theta_t[i] = 0.2 * std::sin(x);
    g.u[i] = std::sin(x);
  }
  // c = 1: (1/2)(0.04 pi/2 + 0.0025 pi/2 + pi/2) + 3 * 0.1^2 / 2.
  diag::EnergyPoint e = diag::energy_phys(p, g, 0);
  CHECK(e.Bpi == doctest::Approx(0.015));
  CHECK(e.B0 == 0.0);
  CHECK(e.E == doctest::Approx(0.25 * M_PI * 1.0425 + 0.015).epsilon(1e-8));
}

TEST_CASE("hoelder quotient of the square root is one") {
  PhysGrid g = PhysGrid::make(256, 2, 1.0);
  std::vector<double> f(g.size());
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) f[g.index(k, i)] = std::sqrt(g.x(i));
  const double q = diag::holder_quotient(g, f);
  CHECK(q <= 1.0 + 1e-12);
  CHECK(q >= 0.99);
  // A smooth function has a quotient that shrinks with the separation floor.
  for (std::size_t id = 0; id < f.size(); ++id) f[id] = std::sin(g.x(static_cast<int>(id % g.stride())));
  CHECK(diag::holder_quotient(g, f) < std::sqrt(M_PI));
}

TEST_CASE("zero data have zero energy and pass") {
  ProblemSpec p;
  ValidatedProblem vp = validate(p);
  coupling::GridConfig gc;
  gc.K = 64;
  gc.nx = 8;
  coupling::SolutionBundle b = coupling::extend_to_horizon(vp, {}, gc, 0.2);
  diag::EnergyTrace tr = diag::dissipation_report(b);
  CHECK(tr.pass());
  for (double e : tr.E) CHECK(e == 0.0);
  CHECK(diag::boundary_traces(b).max() == 0.0);
}

TEST_CASE("smooth coupled run: energy, weak residuals and char metrics") {
  ProblemSpec p;
  p.model = MaterialModel(1.0, 1.2);
  p.bc = BoundarySpec::dirichlet_robin(USide::Nonslip, 1.0);
  p.data.theta0 = Sampler::sine_series({{true, 2, -0.05}}, 0.05);
  p.data.u0 = Sampler::sine_series({{false, 1, 0.1}});
  ValidatedProblem vp = validate(p);
  coupling::GridConfig gc;
  gc.K = 256;
  gc.nx = 16;
  coupling::SolutionBundle b = coupling::extend_to_horizon(vp, {}, gc, 0.3);
  diag::EnergyTrace tr = diag::dissipation_report(b);
  // (1/2) int (c(theta0)^2 theta0'^2 + u0^2) by adaptive quadrature.
  CHECK(tr.E[0] == doctest::Approx(0.015712863423486067).epsilon(1e-8));
  // D grows and E decreases.
  for (std::size_t k = 1; k < tr.D.size(); ++k) {
    CHECK(tr.D[k] >= tr.D[k - 1]);
    CHECK(tr.E[k] <= tr.E[k - 1] + 1e-6);
  }
  CHECK(std::fabs(tr.max_residual) < 1e-4);
  diag::WeakResidual w = diag::weak_residual(b, 3);
  CHECK(w.r_u < b.grid.dx);
  CHECK(w.r_theta < b.grid.dx);
  diag::CharMetrics cm = diag::char_consistency(*b.char_grid);
  CHECK(cm.cusp_nodes == 0);
  CHECK(cm.degenerate_cells == 0);
  CHECK(cm.min_p > 0.9);
  CHECK(cm.max_p < 1.1);
  CHECK(cm.mismatch_x < 1e-2);
  CHECK(diag::initial_trace_l1(b) < 1e-2);
  CHECK(diag::boundary_traces(b).max() < 1e-6);
}
