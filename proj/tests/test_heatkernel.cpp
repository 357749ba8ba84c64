#include <doctest.h>

#include <cmath>

#include "plc/errors.hpp"
#include "plc/heatkernel.hpp"

using namespace plc;

// Reference values from the eigenfunction expansions
//   G = (2/pi) sum e^{-n^2 t} sin(n x) sin(n xi),
//   N = 1/pi + (2/pi) sum e^{-n^2 t} cos(n x) cos(n xi),
// summed to convergence in 30-digit arithmetic.
TEST_CASE("image sums match eigenfunction expansions") {
  struct Row {
    double x, xi, t, G, N;
  };
  const Row rows[] = {
      {1.0, 2.0, 0.3, 0.223482579688792, 0.224181623570786},
      {2.5, 2.9, 0.05, 0.5413238281444924, 0.59239269430529933},
      {0.1, 0.2, 0.01, 1.8996307242795385, 2.4942821703976853},
      {3.0, 3.1, 2.0, 0.00051051685192364937, 0.40373537420172426},
  };
  for (const Row& r : rows) {
    CHECK(heat::green(r.x, r.t, r.xi, 0.0) == doctest::Approx(r.G).epsilon(1e-12));
    CHECK(heat::neumann(r.x, r.t, r.xi, 0.0) == doctest::Approx(r.N).epsilon(1e-12));
    // Only the time gap matters.
    CHECK(heat::green(r.x, r.t + 0.7, r.xi, 0.7) == doctest::Approx(r.G).epsilon(1e-12));
  }
}

TEST_CASE("kernels are symmetric and satisfy their wall conditions") {
  for (double t : {0.01, 0.2, 1.5}) {
    CHECK(heat::green(0.4, t, 2.1, 0.0) == doctest::Approx(heat::green(2.1, t, 0.4, 0.0)));
    CHECK(heat::neumann(0.4, t, 2.1, 0.0) == doctest::Approx(heat::neumann(2.1, t, 0.4, 0.0)));
    CHECK(std::fabs(heat::green(0.0, t, 1.3, 0.0)) < 1e-13);
    CHECK(std::fabs(heat::green(M_PI, t, 1.3, 0.0)) < 1e-13);
    CHECK(std::fabs(heat::dneumann_dx(0.0, t, 1.3, 0.0)) < 1e-12);
    CHECK(std::fabs(heat::dneumann_dx(M_PI, t, 1.3, 0.0)) < 1e-12);
  }
}

TEST_CASE("derivatives agree with central differences") {
  const double h = 1e-5;
  for (double t : {0.05, 0.5}) {
    const double x = 1.1, xi = 2.0;
    CHECK(heat::dgreen_dxi(x, t, xi, 0) ==
          doctest::Approx((heat::green(x, t, xi + h, 0) - heat::green(x, t, xi - h, 0)) / (2 * h)).epsilon(1e-7));
    CHECK(heat::dneumann_dxi(x, t, xi, 0) ==
          doctest::Approx((heat::neumann(x, t, xi + h, 0) - heat::neumann(x, t, xi - h, 0)) / (2 * h))
              .epsilon(1e-7));
    CHECK(heat::dgreen_dx(x, t, xi, 0) ==
          doctest::Approx((heat::green(x + h, t, xi, 0) - heat::green(x - h, t, xi, 0)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("derivative identity dG/dx = -dN/dxi") {
  for (double t : {0.02, 0.3, 1.0})
    for (double x : {0.3, 1.7, 3.0})
      for (double xi : {0.1, 1.2, 2.8})
        CHECK(heat::dgreen_dx(x, t, xi, 0) == doctest::Approx(-heat::dneumann_dxi(x, t, xi, 0)).epsilon(1e-11));
}

TEST_CASE("identity suite within its tolerances") {
  heat::IdentityReport r = heat::check_identities(100, 1);
  CHECK(r.mass <= 1e-8);
  CHECK(r.green_boundary <= 1e-10);
  CHECK(r.derivative_identity <= 1e-8);
  CHECK(r.chapman_kolmogorov <= 1e-6);
}

TEST_CASE("nonpositive time gap is rejected") {
  CHECK_THROWS_AS(heat::green(1.0, 0.5, 1.0, 0.5), Error);
  try {
    heat::neumann(1.0, 0.2, 1.0, 0.4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveTimeGap);
  }
}

TEST_CASE("image count grows with the gap and the tail bound holds") {
  CHECK(heat::image_count(0.01) <= heat::image_count(1.0));
  CHECK(heat::image_count(1.0) <= heat::image_count(10.0));
  const int n = heat::image_count(0.5);
  CHECK(heat::tail_bound(n / 2, 0.5) <= 1e-12);
}
