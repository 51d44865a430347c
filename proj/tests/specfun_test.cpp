#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "ctinv/error.hpp"
#include "ctinv/specfun.hpp"

using namespace ctinv;
using namespace ctinv::specfun;
using ctinv::test::mixed_err;
using ctinv::test::rel_err;

namespace {

struct BesselOracleRow {
  cplx order;
  double x;
  cplx u, du, v, dv;
};

#include "oracle/bessel_oracle.inc"

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("integer closed forms") {
  const FunctionValue u0 = riccati_j(0.0, kPi / 2);
  CHECK(std::abs(u0.f - 1.0) < 1e-15);
  CHECK(std::abs(u0.df) < 1e-15);

  const FunctionValue v0 = riccati_y(0.0, kPi);
  CHECK(std::abs(v0.f - 1.0) < 1e-14);

  for (double x : {0.3, 1.7, 4.2, 11.0, 27.5}) {
    CAPTURE(x);
    CHECK(rel_err(riccati_j(1.0, x).f, std::sin(x) / x - std::cos(x)) < 1e-13);
    CHECK(rel_err(riccati_y(1.0, x).f, -std::cos(x) / x - std::sin(x)) < 1e-13);
  }
}

TEST_CASE("matches the 50-digit oracle") {
  double worst = 0.0;
  for (const BesselOracleRow& row : kBesselOracle) {
    const RiccatiPair p = riccati_pair(row.order, row.x);
    CAPTURE(row.order);
    CAPTURE(row.x);
    CHECK(mixed_err(p.u.f, row.u) < 1e-12);
    CHECK(mixed_err(p.u.df, row.du) < 1e-12);
    CHECK(mixed_err(p.v.f, row.v) < 1e-12);
    CHECK(mixed_err(p.v.df, row.dv) < 1e-12);
    worst = std::max({worst, rel_err(p.u.f, row.u), rel_err(p.v.f, row.v)});
  }
  MESSAGE("worst relative error vs oracle: " << worst);
}

TEST_CASE("separate evaluators agree with the pair") {
  const cplx lam(0.5, 0.3);
  const RiccatiPair p = riccati_pair(lam, 2.0);
  CHECK(std::abs(riccati_j(lam, 2.0).f - p.u.f) < 1e-15);
  CHECK(std::abs(riccati_y(lam, 2.0).f - p.v.f) < 1e-15);
}

TEST_CASE("cross Wronskian of integer orders") {
  CHECK(std::abs(wronskian(0.0, 0.0, 1.3) - 1.0) < 1e-14);
  CHECK(std::abs(wronskian(0.0, 2.0, 5.0) - kWronskianU0V2At5) < 1e-13);
}

TEST_CASE("asymptotic form") {
  CHECK(std::abs(asymptotic_u(0.0, 0.7) - std::sin(0.7)) < 1e-15);
  CHECK(std::abs(asymptotic_u(2.0, 0.7) + std::sin(0.7)) < 1e-15);
  const double x = 80.0;
  const double lam = 3.01;
  const cplx exact = riccati_j(lam, x).f;
  // First Hankel correction: u ~ sin(phi) + lam (lam + 1) / (2x) cos(phi).
  const double phi = x - lam * kPi / 2;
  const double c = lam * (lam + 1) / (2 * x);
  CHECK(std::abs(asymptotic_u(lam, x) - exact) < 1.01 * c);
  CHECK(std::abs(std::sin(phi) + c * std::cos(phi) - exact) < 1e-3);
}

TEST_CASE("integer-order evaluator") {
  // u_{-1} = cos x and v_{-1} = sin x seed the upward recurrence; check l = 2 by hand.
  const double x = 0.9;
  const RiccatiPair p = riccati_integer(2, x);
  const double u2 = (3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 * std::cos(x) / x;
  const double v2 = -(3.0 / (x * x) - 1.0) * std::cos(x) - 3.0 * std::sin(x) / x;
  CHECK(rel_err(p.u.f, u2) < 1e-13);
  CHECK(rel_err(p.v.f, v2) < 1e-13);
}

TEST_CASE("range errors") {
  CHECK_THROWS_AS(riccati_j(0.5, 0.0), RangeError);
  CHECK_THROWS_AS(riccati_j(0.5, -1.0), RangeError);
  CHECK_THROWS_AS(riccati_y(cplx(1.0, 51.0), 2.0), RangeError);
  CHECK_THROWS_AS(riccati_j(std::nan(""), 2.0), RangeError);
  CHECK_THROWS_AS(riccati_integer(-1, 2.0), RangeError);
  CHECK_NOTHROW(riccati_j(cplx(1.0, 50.0), 2.0));
}

TEST_CASE("rgamma") {
  CHECK(std::abs(rgamma({5.0L, 0.0L}) - std::complex<long double>(1.0L / 24.0L)) < 1e-17L);
  CHECK(std::abs(rgamma({-2.0L, 0.0L})) == 0.0L);
  CHECK(std::abs(rgamma({0.5L, 0.0L}) - std::complex<long double>(1.0L / std::sqrt(std::numbers::pi_v<long double>))) < 1e-17L);
}

}  // TEST_SUITE("specfun")

TEST_SUITE("properties") {

TEST_CASE("specfun: W[u, v] = 1 over orders and x in [0.1, 60]") {
  // Shifted momenta met in practice: Re lambda >= -1, |Im lambda| <= 1.
  for (int trial = 0; trial < 60; ++trial) {
    const cplx lam = test::uniform_c(-1.0, 10.0, -1.0, 1.0);
    for (double x = 0.1; x <= 60.0; x += 0.37) {
      const cplx w = wronskian(lam, lam, x);
      CAPTURE(lam);
      CAPTURE(x);
      REQUIRE(std::abs(w - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("specfun: W[u, v] = 1 to roundoff of the products for far negative orders") {
  // For Re lambda < -1 and small x, u v' and u' v reach 1e8 and cancel to 1,
  // so the attainable accuracy scales with their size.
  for (int trial = 0; trial < 60; ++trial) {
    const cplx lam = test::uniform_c(-2.4, -1.0, -2.0, 2.0);
    for (double x = 0.1; x <= 60.0; x += 0.37) {
      const RiccatiPair p = riccati_pair(lam, x);
      const double scale = std::abs(p.u.f * p.v.df) + std::abs(p.u.df * p.v.f);
      const cplx w = p.u.f * p.v.df - p.u.df * p.v.f;
      CAPTURE(lam);
      CAPTURE(x);
      REQUIRE(std::abs(w - 1.0) < std::max(1e-10, 1e-14 * scale));
    }
  }
}

TEST_CASE("specfun: general evaluator reproduces integer closed forms") {
  for (int l = 0; l <= 6; ++l) {
    for (double x = 0.1; x <= 60.0; x += 0.23) {
      const RiccatiPair gen = riccati_pair(static_cast<double>(l), x);
      const RiccatiPair ref = riccati_integer(l, x);
      CAPTURE(l);
      CAPTURE(x);
      REQUIRE(rel_err(gen.u.f, ref.u.f) < 1e-12);
      REQUIRE(rel_err(gen.v.f, ref.v.f) < 1e-12);
    }
  }
}

TEST_CASE("specfun: integer-order guard is the limit of the reflection formula") {
  for (double lam0 : {0.5, 1.5, 3.5}) {
    for (double x : {0.4, 2.0, 7.5, 19.0}) {
      const FunctionValue guarded = riccati_y(lam0, x);
      const double d = 1e-5;
      const FunctionValue above = detail::riccati_y_reflection(lam0 + d, x);
      const FunctionValue below = detail::riccati_y_reflection(lam0 - d, x);
      CAPTURE(lam0);
      CAPTURE(x);
      const double scale = std::max(std::abs(guarded.f), 1.0);
      // Both sides approach linearly, the symmetric mean quadratically.
      CHECK(std::abs(above.f - guarded.f) / scale < 1e3 * d);
      CHECK(std::abs(below.f - guarded.f) / scale < 1e3 * d);
      CHECK(std::abs(0.5 * (above.f + below.f) - guarded.f) / scale < 1e-8);
    }
  }
}

TEST_CASE("specfun: derivatives match central differences") {
  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const cplx lam = test::uniform_c(-1.5, 8.0, -1.0, 1.0);
    const double x = test::uniform(0.5, 55.0);
    const RiccatiPair p = riccati_pair(lam, x);
    const RiccatiPair hi = riccati_pair(lam, x + h);
    const RiccatiPair lo = riccati_pair(lam, x - h);
    CAPTURE(lam);
    CAPTURE(x);
    CHECK(mixed_err((hi.u.f - lo.u.f) / (2 * h), p.u.df) < 1e-6);
    CHECK(mixed_err((hi.v.f - lo.v.f) / (2 * h), p.v.df) < 1e-6);
  }
}

}  // TEST_SUITE("properties")
