#include <cmath>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

#include "ctinv/error.hpp"
#include "ctinv/generalct.hpp"
#include "ctinv/io.hpp"
#include "ctinv/semianalytic.hpp"

using namespace ctinv;
using namespace ctinv::generalct;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseShiftSet make_set(const std::vector<int>& ls, const std::vector<cplx>& d) {
  std::vector<Channel> ch;
  for (std::size_t i = 0; i < ls.size(); ++i) ch.push_back({ls[i], d[i]});
  return PhaseShiftSet(ch);
}

std::vector<cplx> json_complex(const nlohmann::json& arr) {
  std::vector<cplx> out;
  for (const auto& p : arr) out.emplace_back(p[0].get<double>(), p[1].get<double>());
  return out;
}

nlohmann::json reference() {
  std::ifstream is(CTINV_DATA_DIR "/n12c_12mev_reference.json");
  REQUIRE(is);
  return nlohmann::json::parse(is);
}

PhaseShiftSet n12c() { return io::load_phase_shifts(CTINV_DATA_DIR "/n12c_12mev.csv").to_set(); }

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("generalct") {

TEST_CASE("M matrices") {
  const std::vector<int> ls{0};
  const std::vector<cplx> t{-0.2};
  const MMatrixPair m = build_m_matrices(ls, t);
  CHECK(std::abs(m.m_sin(0, 0) - (-1.9313562)) < 1e-7);
  CHECK(std::abs(m.m_cos(0, 0) - (-5.9441032)) < 1e-7);

  const std::vector<int> ls2{0, 1};
  const std::vector<cplx> t2{cplx(-0.3, 0.1), cplx(1.2, -0.05)};
  const MMatrixPair m2 = build_m_matrices(ls2, t2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cplx L = t2[static_cast<std::size_t>(j)];
      const double l = ls2[static_cast<std::size_t>(i)];
      const cplx den = L * (L + 1.0) - l * (l + 1.0);
      CHECK(std::abs(m2.m_sin(i, j) - std::sin((l - L) * kPi / 2.0) / den) < 1e-14);
      CHECK(std::abs(m2.m_cos(i, j) - std::cos((l - L) * kPi / 2.0) / den) < 1e-14);
    }
  }
}

TEST_CASE("single-channel reactance is tan((l - L) pi/2)") {
  const std::vector<int> ls{0};
  const std::vector<cplx> t{-0.2};
  const ReactancePair k = reactance(ls, t);
  CHECK(std::abs(k.k_plus[0] - 0.3249197) < 1e-7);
  CHECK(std::abs(k.k_minus[0] - 0.3249197) < 1e-7);
  CHECK(k.solve_residual < 1e-14);
}

TEST_CASE("reactance: conjugate symmetry for real T and the T -> S limit") {
  const std::vector<int> ls{0, 1, 2, 3};
  const std::vector<cplx> t{-0.4, 1.3, 1.8, 3.2};
  const ReactancePair k = reactance(ls, t);
  CHECK((k.k_minus - k.k_plus.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(k.solve_residual < 1e-10);

  double prev = 1.0;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    std::vector<cplx> near;
    for (int l : ls) near.emplace_back(l - eps, 0.0);
    const ReactancePair kn = reactance(ls, near);
    const double size = std::max(max_abs(kn.k_plus), max_abs(kn.k_minus));
    CHECK(size < prev);
    prev = size;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("reactance errors") {
  const std::vector<int> ls{0, 1};
  CHECK_THROWS_AS(reactance(ls, std::vector<cplx>{0.0, 1.5}), DegeneracyError);
  CHECK_THROWS_AS(reactance(ls, std::vector<cplx>{0.5, -1.5}), DegeneracyError);
  CHECK_THROWS_AS(reactance(ls, std::vector<cplx>{0.5}), DegeneracyError);
}

TEST_CASE("solve_general: single channel closed form") {
  const SolveReport r = solve_general(make_set({0}, {0.3}));
  REQUIRE(r.converged);
  CHECK(std::abs(r.solution[0] - (-2 * 0.3 / kPi)) < 1e-10);
  CHECK(r.condition_history.size() >= 1);
}

TEST_CASE("solve_general: mixed parity sets in both residual forms") {
  const PhaseShiftSet set = make_set({0, 1, 2, 3}, {cplx(0.6, 0.1), cplx(-0.2, 0.05), 0.15, cplx(0.05, 0.01)});
  for (ResidualForm form : {ResidualForm::Tangent, ResidualForm::SMatrix}) {
    SolverOptions o;
    o.form = form;
    const SolveReport r = solve_general(set, o);
    REQUIRE(r.converged);
    CHECK(r.residual_norm < 10 * o.tol);
    const std::vector<int> ls = set.ls();
    const std::vector<cplx> d = set.deltas();
    CHECK(max_abs(residual_general(ls, r.solution.values(), d, ResidualForm::Tangent)) < 1e-8);
    CHECK(max_abs(residual_general(ls, r.solution.values(), d, ResidualForm::SMatrix)) < 1e-8);
    CHECK_FALSE(r.condition_history.empty());
  }
}

TEST_CASE("solve_general agrees with the semi-analytic solver on parity-pure sets") {
  const PhaseShiftSet set = make_set({0, 2, 4}, {cplx(0.5, 0.1), 0.2, cplx(0.05, 0.02)});
  const SolveReport g = solve_general(set);
  const SolveReport s = semianalytic::solve_parity(set);
  REQUIRE(g.converged);
  REQUIRE(s.converged);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(g.solution[k] - s.solution[k]) < 1e-8);
}

TEST_CASE("solve_general: zero phase shifts") {
  const SolveReport r = solve_general(make_set({0, 1}, {0.0, 0.0}));
  CHECK(r.converged);
  CHECK(r.zero_limit);
}

TEST_CASE("residual_general: pole of tan(delta)") {
  const std::vector<int> ls{0};
  CHECK_THROWS_AS(residual_general(ls, std::vector<cplx>{-0.2}, std::vector<cplx>{kPi / 2},
                                   ResidualForm::Tangent),
                  PoleError);
}

TEST_CASE("combine_spin_orbit") {
  CHECK(std::abs(combine_spin_orbit(0.4, 99.0, 0) - 0.4) < 1e-15);
  CHECK(std::abs(combine_spin_orbit(cplx(0.3, 0.1), cplx(0.3, 0.1), 3) - cplx(0.3, 0.1)) < 1e-15);
  CHECK(std::abs(combine_spin_orbit(0.3, 0.1, 2) - 0.22) < 1e-15);
  CHECK_THROWS_AS(combine_spin_orbit(0.1, 0.1, -1), InputError);
}

TEST_CASE("solve_approximate splits by parity") {
  const PhaseShiftSet set = make_set({0, 1, 2}, {0.4, -0.2, 0.1});
  const ApproximateReport r = solve_approximate(set);
  REQUIRE(r.even);
  REQUIRE(r.odd);
  CHECK(r.even->converged);
  CHECK(r.odd->converged);
  CHECK(r.even_set.ls() == std::vector<int>{0, 2});
  CHECK(r.odd_set.ls() == std::vector<int>{1});
  CHECK(std::abs(r.odd->solution[0] - (1 + 2 * 0.2 / kPi)) < 1e-10);

  const ApproximateReport only_even = solve_approximate(make_set({0, 2}, {0.4, 0.1}));
  CHECK(only_even.even);
  CHECK_FALSE(only_even.odd);
}

TEST_CASE("n+12C: general solution from the published starting point") {
  const nlohmann::json ref = reference();
  const std::vector<cplx> published = json_complex(ref["L_general"]);
  SolverOptions o;
  o.initial = published;
  const SolveReport r = solve_general(n12c(), o);
  REQUIRE(r.converged);
  CHECK(r.residual_norm < 1e-10);
  // l = 0, 1, 4 agree with the published roots; the root at l = 2 (l = 3)
  // carries the real part published for l = 3 (l = 2).
  for (std::size_t k : {0u, 1u, 4u}) CHECK(std::abs(r.solution[k] - published[k]) < 0.05);
  CHECK(std::abs(r.solution[2].real() - published[3].real()) < 0.05);
  CHECK(std::abs(r.solution[3].real() - published[2].real()) < 0.05);
  CHECK(std::abs(r.solution[2].imag() - published[2].imag()) < 0.05);
  CHECK(std::abs(r.solution[3].imag() - published[3].imag()) < 0.05);
}

TEST_CASE("n+12C: published general roots with l = 2, 3 real parts exchanged solve the system") {
  const nlohmann::json ref = reference();
  const std::vector<cplx> published = json_complex(ref["L_general"]);
  const PhaseShiftSet set = n12c();
  const std::vector<int> ls = set.ls();
  const std::vector<cplx> d = set.deltas();
  std::vector<cplx> swapped = published;
  swapped[2] = {published[3].real(), published[2].imag()};
  swapped[3] = {published[2].real(), published[3].imag()};
  const double as_printed = max_abs(residual_general(ls, published, d, ResidualForm::Tangent));
  const double exchanged = max_abs(residual_general(ls, swapped, d, ResidualForm::Tangent));
  MESSAGE("residual as printed " << as_printed << ", exchanged " << exchanged);
  CHECK(as_printed > 0.1);
  CHECK(exchanged < 1e-2);
}

TEST_CASE("n+12C: approximate roots") {
  const nlohmann::json ref = reference();
  const std::vector<cplx> published = json_complex(ref["L_approximate"]);
  SolverOptions o;
  o.initial = published;
  const ApproximateReport r = solve_approximate(n12c(), o);
  REQUIRE(r.even);
  REQUIRE(r.odd);
  REQUIRE(r.even->converged);
  REQUIRE(r.odd->converged);
  const std::vector<cplx> even{published[0], published[2], published[4]};
  const std::vector<cplx> odd{published[1], published[3]};
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(r.even->solution[k] - even[k]) < 0.1);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(r.odd->solution[k] - odd[k]) < 0.1);
}

}  // TEST_SUITE("generalct")

TEST_SUITE("properties") {

TEST_CASE("generalct: equations are invariant under relabelling T") {
  const std::vector<int> ls{0, 1, 2};
  const std::vector<cplx> d{cplx(0.4, 0.1), -0.15, cplx(0.1, 0.03)};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> t{test::uniform_c(-0.7, -0.1, -0.2, 0.2), test::uniform_c(1.1, 1.7, -0.2, 0.2),
                        test::uniform_c(2.2, 2.8, -0.2, 0.2)};
    const Eigen::VectorXcd base = residual_general(ls, t, d, ResidualForm::Tangent);
    std::swap(t[0], t[2]);
    const Eigen::VectorXcd perm = residual_general(ls, t, d, ResidualForm::Tangent);
    CHECK((base - perm).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("generalct: real input gives conjugate-symmetric reactances") {
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> ls{0, 1, 2, 3};
    const std::vector<cplx> t{test::uniform(-0.8, -0.1), test::uniform(1.1, 1.8), test::uniform(2.2, 2.8),
                              test::uniform(3.1, 3.9)};
    const ReactancePair k = reactance(ls, t);
    CHECK((k.k_minus - k.k_plus.conjugate()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("generalct: real branch is unitary and every solve meets its residual") {
  for (int trial = 0; trial < 8; ++trial) {
    const PhaseShiftSet set =
        make_set({0, 1, 2, 3}, {test::uniform(-0.6, 0.6), test::uniform(-0.3, 0.3), test::uniform(-0.15, 0.15),
                                test::uniform(-0.05, 0.05)});
    const SolveReport r = solve_general(set);
    if (!r.converged) continue;
    bool real_t = true;
    for (cplx L : r.solution.values()) real_t = real_t && std::abs(L.imag()) < 1e-10;
    if (!real_t) continue;
    const ReactancePair k = reactance(set.ls(), r.solution.values());
    CHECK(k.solve_residual < 1e-10);
    for (Eigen::Index i = 0; i < k.k_plus.size(); ++i) {
      const cplx s = (1.0 + cplx(0, 1) * k.k_plus[i]) / (1.0 - cplx(0, 1) * k.k_minus[i]);
      CHECK(std::abs(std::abs(s) - 1.0) < 1e-10);
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<int> ls{0, 1, 2, 3, 4};
    std::vector<cplx> t;
    for (int l : ls) t.push_back(static_cast<double>(l) + test::uniform_c(-0.45, 0.45, -0.3, 0.3));
    CHECK(reactance(ls, t).solve_residual < 1e-10);
  }
}

TEST_CASE("generalct: both residual forms vanish at converged roots") {
  for (int trial = 0; trial < 8; ++trial) {
    const PhaseShiftSet set = make_set(
        {0, 1, 2}, {test::uniform_c(-0.6, 0.6, 0.0, 0.2), test::uniform_c(-0.3, 0.3, 0.0, 0.1),
                    test::uniform_c(-0.1, 0.1, 0.0, 0.05)});
    const SolverOptions o;
    const SolveReport r = solve_general(set, o);
    if (!r.converged) continue;
    CHECK(max_abs(residual_general(set.ls(), r.solution.values(), set.deltas(), ResidualForm::SMatrix)) < 10 * o.tol);
  }
}

}  // TEST_SUITE("properties")
