#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bnlab/ansatz6.hpp"
#include "bnlab/errors.hpp"

using namespace bnlab;
using std::numbers::pi;

namespace {

const LinearizedBundle& lin() {
  static const LinearizedBundle b = solve_v0(lambda_bar(6, 2));
  return b;
}

}  // namespace

TEST_CASE("bubble") {
  CHECK(sigma6() == doctest::Approx(pi * pi * pi));
  for (double delta : {0.3, 0.05}) {
    Bubble U(delta);
    CHECK(U.u(0.0) == doctest::Approx(24 / (delta * delta)));
    for (double r : {0.01, 0.1, 0.7}) {
      // -Delta U = U^2 in R^6
      CHECK(U.u_second(r) + 5 / r * U.u_prime(r) + U.u(r) * U.u(r) ==
            doctest::Approx(0.0).scale(U.u(0.0) * U.u(0.0)).epsilon(1e-12));
      const double e = 1e-6 * delta;
      CHECK(U.z(r) == doctest::Approx((Bubble(delta + e).u(r) - Bubble(delta - e).u(r)) / (2 * e)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(Bubble(0.0), Error);
}

TEST_CASE("projected bubble") {
  auto pu = project_bubble(0.1);
  CHECK(pu.pu(1.0) == 0.0);
  // 2400 - 24 delta^2 / (1 + delta^2)^2
  CHECK(pu.pu(0.0) == doctest::Approx(2399.764728948142).epsilon(1e-13));
  CHECK(std::abs(pu.pu_by_quadrature(0.0) - 2399.76) < 1e-3 + 0.0048);
  CHECK(pu.pu_by_quadrature(0.0) == doctest::Approx(pu.pu(0.0)).epsilon(1e-9));
  for (double delta : {0.1, 0.05, 0.025, 0.0125}) {
    ProjectedBubble p(delta);
    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
      const double r = i / 200.0;
      worst = std::max(worst, std::abs(p.pu_by_quadrature(r) - p.bubble.u(r) + 24 * delta * delta));
    }
    CHECK(worst / std::pow(delta, 4) < 60);
  }
}

TEST_CASE("level radius") {
  const double delta = 0.05, level = 10.0;
  const double r = bubble_level_radius(delta, level);
  CHECK(Bubble(delta).u(r) == doctest::Approx(level).epsilon(1e-12));
  CHECK(r == doctest::Approx(std::sqrt(std::sqrt(24 * delta * delta / level) - delta * delta)).epsilon(1e-12));
}

TEST_CASE("reduced energy constants") {
  CHECK(8 * std::sqrt(3.0) / 11 == doctest::Approx(1.259674).epsilon(1e-6));
  CHECK(a1_by_quadrature() == doctest::Approx(96 * pi * pi * pi).epsilon(1e-8));
  auto re = ReducedEnergy::build(lin(), 1e-3);
  CHECK(re.a1 == doctest::Approx(96 * pi * pi * pi).epsilon(1e-8));
  CHECK(std::abs(re.d0() - d0_closed_form(lin())) < 1e-12 * d0_closed_form(lin()));
  CHECK(d0_closed_form(lin()) ==
        doctest::Approx(8 * std::sqrt(3.0) / 11 * lin().sign_selector / std::pow(lin().lambda_bar, 1.5)));
  // d0 is a critical point of the reduced energy
  const double d = re.d0(), h = 1e-5 * d;
  CHECK(std::abs(re.upsilon(d + h) - re.upsilon(d - h)) < 1e-8 * std::abs(re.upsilon(d)));
}

TEST_CASE("ansatz assembly") {
  CHECK_THROWS_AS(build_ansatz(lin(), 0.0, 1.0), Error);
  auto b = build_ansatz(lin(), 1e-3, d0_closed_form(lin()));
  CHECK(b.delta == doctest::Approx(b.d * 1e-3));
  CHECK(std::abs(b.W.u(1.0)) < 1e-10);
  CHECK(b.W.u(0.0) == doctest::Approx(b.background(0.0) - b.pu.pu(0.0)));
  CHECK(b.W.u(0.0) * b.delta * b.delta == doctest::Approx(-24).epsilon(1e-2));
  CHECK(std::isfinite(residual(b, 0.3)));
  CHECK(residual_norm(b) > 0);
}

TEST_CASE("energy functional") {
  RadialProfile zero(6, 1.0, 1.0, [](double) { return ode::State<2>{0.0, 0.0}; });
  CHECK(energy(zero, 1.0) == 0.0);
  const auto& u = lin().u_bar;
  CHECK(energy(u, 2.0) == doctest::Approx(energy(u.scaled(-1.0), 2.0)).epsilon(1e-14));
  // (1 - r^2): sigma (int 2 r^7 - l/2 (1-r^2)^2 r^5 - (1-r^2)^3 r^5 / 3)
  RadialProfile p(6, 1.0, 1.0, [](double r) { return ode::State<2>{1 - r * r, -2 * r}; });
  const double expect = pi * pi * pi * (0.25 - 0.5 / 60 - 1.0 / 360);
  CHECK(energy(p, 1.0) == doctest::Approx(expect).epsilon(1e-10));
}
