#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bnlab/branch.hpp"
#include "bnlab/errors.hpp"

using namespace bnlab;
using std::numbers::pi;

TEST_CASE("scaling identity u(0) = a lambda^{(N-2)/4}") {
  for (int N = 3; N <= 6; ++N)
    for (int m = 1; m <= 3; ++m)
      for (double a : {0.1, 3.0, 1e3}) {
        auto p = shoot(N, m, a);
        CHECK(std::abs(p.profile.u(0.0) / std::pow(p.lambda, (N - 2) / 4.0) - a) < 1e-8 * a);
        CHECK(std::abs(p.profile.u(1.0)) < 1e-9 * p.sup_norm);
        CHECK(p.nodal.zeros.size() == size_t(m - 1));
      }
}

// Reference values from scipy's DOP853 on the plain equation (tests/oracle).
TEST_CASE("branch points match the external reference") {
  struct Case {
    int N;
    double a, lambda, r_lambda, eps;
  };
  const Case cases[] = {
      {3, 1.0, 36.28997730403335, 0.4786775905790994, 8.315203633996006},
      {4, 1.0, 43.51654366112653, 0.5181059265001077, 11.68130904875497},
      {5, 1.0, 51.36353194086915, 0.5509255949024909, 15.58980842225449},
      {6, 1.0, 59.73883460996401, 0.5784018272810962, 19.98554789324711},
      {3, 100.0, 22.21173364386312, 0.3334102304058664, 2.469109214410607},
  };
  ShootOptions opt;
  opt.tol_rel = opt.tol_abs = 1e-12;
  for (const auto& c : cases) {
    CAPTURE(c.N);
    auto p = shoot(c.N, 2, c.a, opt);
    CHECK(p.lambda == doctest::Approx(c.lambda).epsilon(1e-9));
    CHECK(p.nodal.r_lambda == doctest::Approx(c.r_lambda).epsilon(1e-9));
    CHECK(p.eps == doctest::Approx(c.eps).epsilon(1e-9));
  }
}

TEST_CASE("linear and concentration limits") {
  CHECK(shoot(3, 1, 1e-6).lambda == doctest::Approx(pi * pi).epsilon(1e-6));
  CHECK(std::abs(shoot(3, 2, 1e6).lambda - 9 * pi * pi / 4) < 1e-2);
}

TEST_CASE("nodal structure") {
  auto p1 = shoot(4, 1, 2.0);
  CHECK(p1.nodal.zeros.empty());
  CHECK(std::isnan(p1.nodal.s_lambda));
  CHECK(p1.nodal.zone_max.at(0) == doctest::Approx(p1.profile.u(0.0)));

  for (int N = 3; N <= 6; ++N) {
    auto p = shoot(N, 3, 50.0);
    REQUIRE(p.nodal.zone_max.size() == 3);
    CHECK(p.nodal.zone_max[0] > p.nodal.zone_max[1]);
    CHECK(p.nodal.zone_max[1] > p.nodal.zone_max[2]);
    const double r = p.nodal.r_lambda;
    CHECK(p.nodal.M_annulus <= -r * p.profile.u_prime(r) / (N - 2));
    CHECK(p.nodal.s_lambda > r);
    CHECK(p.profile.u_prime(p.nodal.s_lambda) == doctest::Approx(0.0).scale(p.sup_norm));
  }
}

TEST_CASE("bounds hold along a sweep") {
  for (int N = 3; N <= 6; ++N) {
    auto table = sweep(N, 2, log_grid(1e-1, 1e4, 3));
    for (const auto* p : table.points()) {
      auto b = check_bounds(*p);
      CAPTURE(N);
      CAPTURE(p->a);
      CHECK(b.window);
      CHECK(b.annulus_bound);
      CHECK(b.ordering);
      CHECK(b.ok());
      const double w = p->eps;
      if (N == 3) {
        CHECK(w > pi * pi / 4);
        CHECK(w < pi * pi);
      }
    }
  }
}

TEST_CASE("sup norm grows along the tail") {
  for (int N = 3; N <= 6; ++N) {
    double prev = 0;
    for (double a = 1e2; a <= 1e5; a *= 2) {
      const double s = shoot(N, 2, a).sup_norm;
      CHECK(s > prev);
      prev = s;
    }
  }
}

TEST_CASE("positive solution after rescaling, N = 3") {
  const double law = std::sqrt(pi * pi * pi / 2) * std::pow(3.0, 0.25);
  CHECK(law == doctest::Approx(5.182).epsilon(1e-3));
  auto p = shoot(3, 2, 5e3);
  auto v = rescale_to_positive(p);
  CHECK(v.lambda() == doctest::Approx(p.eps));
  CHECK(std::abs(v.u(1.0)) < 1e-9 * v.u(0.0));
  CHECK(v.u(0.5) > 0);
  CHECK(v.u(0.0) * std::sqrt(v.lambda() - pi * pi / 4) == doctest::Approx(law).epsilon(2e-2));
}

TEST_CASE("sweep table") {
  auto g = log_grid(1.0, 100.0, 2);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == doctest::Approx(100.0));

  auto t1 = sweep(5, 3, g, {}, 1);
  auto t4 = sweep(5, 3, g, {}, 4);
  std::ostringstream a, b;
  t1.write_csv(a);
  t4.write_csv(b);
  CHECK(a.str() == b.str());
  const std::string header = a.str().substr(0, a.str().find('\n'));
  CHECK(header == "a,lambda,r1,r2,s_lambda,sup_norm,M_annulus,eps");
  CHECK(t1.points().size() == 5);
  CHECK_THROWS_AS(shoot(3, 0, 1.0), Error);
}
