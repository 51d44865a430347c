#include "ctinv/semianalytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctinv/error.hpp"
#include "solve_common.hpp"

namespace ctinv::semianalytic {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kCauchyGap = 1e-12;
constexpr double kTrigFloor = 1e-12;

cplx ll1(cplx L) { return L * (L + 1.0); }
cplx ll1(int l) { return {static_cast<double>(l) * (l + 1.0), 0.0}; }

void require_parity(std::span<const int> ls, int parity, const char* who) {
  for (int l : ls) {
    if (l % 2 != parity) {
      std::ostringstream os;
      os << who << " requires " << (parity == 0 ? "even" : "odd") << " l, got l = " << l;
      throw ParityError(os.str());
    }
  }
}

// Distance from L to the nearest integer of the given parity (0 even, 1 odd).
double pole_distance(cplx L, int parity) {
  double m = 2.0 * std::round((L.real() - parity) / 2.0) + parity;
  return std::abs(L - m);
}

// w_lL = prod_{l' != l} (L(L+1) - l'(l'+1)) / prod_{L' != L} (L(L+1) - L'(L'+1))
cplx weight(std::span<const cplx> shifted, std::span<const int> ls, std::size_t row,
            std::size_t col) {
  const cplx x = ll1(shifted[col]);
  cplx num = 1.0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i != row) num *= x - ll1(ls[i]);
  }
  cplx den = 1.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    if (j != col) den *= x - ll1(shifted[j]);
  }
  return num / den;
}

// Shared body of the even/odd residuals. `parity` selects tan (even) or cot (odd).
Eigen::VectorXcd parity_residual(std::span<const cplx> shifted, std::span<const int> ls,
                                 std::span<const cplx> deltas, double pole_guard, int parity) {
  require_parity(ls, parity, parity == 0 ? "residual_even" : "residual_odd");
  if (deltas.size() != ls.size()) throw InputError("one phase shift per channel required");
  check_admissible(shifted, ls);

  const std::size_t n = shifted.size();
  // Poles of tan(L pi/2) sit at odd L, those of cot(L pi/2) at even L.
  const int pole_parity = parity == 0 ? 1 : 0;
  std::vector<cplx> trig(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx L = shifted[j];
    if (pole_distance(L, pole_parity) < pole_guard) {
      std::ostringstream os;
      os << "shifted momentum " << L << " within " << pole_guard << " of a "
         << (parity == 0 ? "tan" : "cot") << " pole";
      throw PoleError(os.str());
    }
    const cplx s = std::sin(L * kHalfPi);
    const cplx c = std::cos(L * kHalfPi);
    trig[j] = parity == 0 ? -s / c : c / s;
  }

  Eigen::VectorXcd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cplx rhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) rhs += weight(shifted, ls, i, j) * trig[j];
    out[static_cast<Eigen::Index>(i)] = rhs - checked_tan(deltas[i]);
  }
  return out;
}

CauchyCoefficients parity_coefficients(std::span<const cplx> shifted, std::span<const int> ls,
                                       int parity) {
  require_parity(ls, parity, parity == 0 ? "coefficients_even" : "coefficients_odd");
  check_admissible(shifted, ls);
  // With alpha_L = a_L cos(L pi/2) (even) or b_L sin(L pi/2) (odd), the
  // asymptotic system is sum_L alpha_L / (l(l+1) - L(L+1)) = -1.
  std::vector<cplx> xs;
  std::vector<cplx> ys;
  for (cplx L : shifted) xs.push_back(ll1(L));
  for (int l : ls) ys.push_back(ll1(l));
  const std::vector<cplx> alpha = cauchy_solve(xs, ys);

  CauchyCoefficients out;
  out.a.assign(shifted.size(), 0.0);
  out.b.assign(shifted.size(), 0.0);
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    const cplx t = parity == 0 ? std::cos(shifted[j] * kHalfPi) : std::sin(shifted[j] * kHalfPi);
    if (std::abs(t) < kTrigFloor) {
      std::ostringstream os;
      os << (parity == 0 ? "cos" : "sin") << "(L pi/2) vanishes at L = " << shifted[j];
      throw PoleError(os.str());
    }
    (parity == 0 ? out.a : out.b)[j] = alpha[j] / t;
  }
  return out;
}

}  // namespace

std::vector<cplx> cauchy_solve(std::span<const cplx> xs, std::span<const cplx> ys) {
  if (xs.size() != ys.size()) throw InputError("cauchy_solve needs equally many x and y");
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(xs[i] - xs[j]) < kCauchyGap) throw DegeneracyError("coincident Cauchy nodes x");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(xs[i] - ys[j]) < kCauchyGap) throw PoleError("Cauchy node x coincides with y");
    }
  }
  std::vector<cplx> a(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx num = 1.0;
    cplx den = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      num *= xs[k] - ys[i];
      if (i != k) den *= xs[k] - xs[i];
    }
    a[k] = num / den;
  }
  return a;
}

CauchyCoefficients coefficients_even(std::span<const cplx> shifted, std::span<const int> ls) {
  return parity_coefficients(shifted, ls, 0);
}

CauchyCoefficients coefficients_odd(std::span<const cplx> shifted, std::span<const int> ls) {
  return parity_coefficients(shifted, ls, 1);
}

Eigen::VectorXcd residual_even(std::span<const cplx> shifted, std::span<const int> ls,
                               std::span<const cplx> deltas, double pole_guard) {
  return parity_residual(shifted, ls, deltas, pole_guard, 0);
}

Eigen::VectorXcd residual_odd(std::span<const cplx> shifted, std::span<const int> ls,
                              std::span<const cplx> deltas, double pole_guard) {
  return parity_residual(shifted, ls, deltas, pole_guard, 1);
}

std::vector<cplx> canonical_start(const PhaseShiftSet& set) {
  std::vector<cplx> out;
  out.reserve(set.size());
  for (const Channel& c : set.channels()) {
    out.push_back(static_cast<double>(c.l) - c.delta / kHalfPi);
  }
  return out;
}

SolveReport solve_parity(const PhaseShiftSet& set, const SolverOptions& options) {
  const Parity parity = set.parity();
  if (parity == Parity::Mixed) {
    throw ParityError("semi-analytic inversion needs channels of a single parity");
  }
  const std::vector<int> ls = set.ls();
  const std::vector<cplx> deltas = set.deltas();
  const int p = parity == Parity::Even ? 0 : 1;
  const double guard = options.pole_guard;
  return detail::drive_solver(set, [&](std::span<const cplx> t) {
    return parity_residual(t, ls, deltas, guard, p);
  }, options);
}

cplx checked_tan(cplx delta) {
  const cplx c = std::cos(delta);
  if (std::abs(c) < kTrigFloor) {
    std::ostringstream os;
    os << "cos(delta) vanishes at delta = " << delta;
    throw PoleError(os.str());
  }
  return std::sin(delta) / c;
}

cplx normalization(cplx delta) {
  const cplx c = std::cos(delta);
  if (std::abs(c) < kTrigFloor) {
    std::ostringstream os;
    os << "normalization undefined: cos(delta) vanishes at delta = " << delta;
    throw PoleError(os.str());
  }
  return 1.0 / c;
}

}  // namespace ctinv::semianalytic
