#include <doctest.h>

#include <cmath>

#include "bnlab/errors.hpp"
#include "bnlab/linear6.hpp"

using namespace bnlab;

namespace {

const LinearizedBundle& bundle() {
  static const LinearizedBundle b = [] {
    ShootOptions opt;
    opt.tol_rel = opt.tol_abs = 1e-12;
    return solve_v0(lambda_bar(6, 2, opt));
  }();
  return b;
}

}  // namespace

// Reference values: scipy superposition solve of the same problem (tests/oracle).
TEST_CASE("v0 problem") {
  const auto& b = bundle();
  CHECK(std::abs(b.v0_bar.u(1.0)) < 1e-12);
  CHECK(b.v0_bar_at_0 == doctest::Approx(-3.22841941794385).epsilon(1e-8));
  CHECK(b.sign_selector == doctest::Approx(7.4568388358877).epsilon(1e-8));
  CHECK(b.sign_selector > 0);
  CHECK(b.nondegeneracy_margin == doctest::Approx(0.02797762012933063).epsilon(1e-6));
  CHECK(b.h.u(0.0) == 1.0);
  CHECK(b.u_bar.u(0.0) == doctest::Approx(b.lambda_bar / 2));
}

TEST_CASE("linearity in the source") {
  const auto& b = bundle();
  auto c = lambda_bar(6, 2);
  for (double t : {-1.0, 0.5, 3.0}) {
    auto s = solve_v0_scaled_source(c, t);
    CHECK(s.v0_bar_at_0 == doctest::Approx(t * b.v0_bar_at_0).epsilon(1e-8));
    CHECK(s.v0_bar.u(0.4) == doctest::Approx(t * b.v0_bar.u(0.4)).epsilon(1e-8));
  }
}

TEST_CASE("z0 cross-check") {
  const auto& b = bundle();
  auto z = z0_crosscheck(b);
  CHECK(z.boundary_rel_error < 1e-6);
  CHECK(z.proportionality_error < 1e-6);
  CHECK(z.center_error < 1e-8);
  CHECK(z.z0_at_1 == doctest::Approx(-4.68760873886943 / 2).epsilon(1e-8));
}

TEST_CASE("sign prediction") {
  CHECK(predict_sign(bundle()) == Side::Above);
  CHECK(predict_sign(-0.3) == Side::Below);
  CHECK(predict_sign(0.3) == Side::Above);
  CHECK_THROWS_AS(predict_sign(1e-8), Error);
}
