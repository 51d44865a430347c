#pragma once

// Parity-pure inversion: for channel sets holding only even (or only odd) l
// the asymptotic expansion system is a Cauchy system with a closed-form
// solution, and the equations for the shifted momenta contain no matrix
// inverse.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ctinv/types.hpp"

namespace ctinv::semianalytic {

/// Coefficients of A_L(x -> inf) = a_L cos x + b_L sin x, aligned with T.
struct CauchyCoefficients {
  std::vector<cplx> a;
  std::vector<cplx> b;
};

/// Unique solution of sum_i a_i / (y_j - x_i) = -1 (j = 1..N):
///   a_k = prod_i (x_k - y_i) / prod_{i != k} (x_k - x_i).
/// Throws DegeneracyError for coincident x_i and PoleError when x_i = y_j.
std::vector<cplx> cauchy_solve(std::span<const cplx> xs, std::span<const cplx> ys);

CauchyCoefficients coefficients_even(std::span<const cplx> shifted, std::span<const int> ls);
CauchyCoefficients coefficients_odd(std::span<const cplx> shifted, std::span<const int> ls);

/// Component l: -sum_L w_lL tan(L pi/2) - tan(delta_l), with
/// w_lL = prod_{l' != l} (L(L+1) - l'(l'+1)) / prod_{L' != L} (L(L+1) - L'(L'+1)).
/// Iterates closer than pole_guard to an odd integer raise PoleError.
Eigen::VectorXcd residual_even(std::span<const cplx> shifted, std::span<const int> ls,
                               std::span<const cplx> deltas, double pole_guard = 1e-4);

/// Odd-parity mirror: sum_L w_lL cot(L pi/2) - tan(delta_l); poles at even integers.
Eigen::VectorXcd residual_odd(std::span<const cplx> shifted, std::span<const int> ls,
                              std::span<const cplx> deltas, double pole_guard = 1e-4);

/// Per-channel closed form L = l - 2 delta / pi (exact for a single channel).
std::vector<cplx> canonical_start(const PhaseShiftSet& set);

/// Largest channel count the solvers accept.
inline constexpr std::size_t kMaxChannels = 12;

/// Solves the parity-pure system for T. Throws ParityError for mixed input.
SolveReport solve_parity(const PhaseShiftSet& set, const SolverOptions& options = {});

/// B_l = 1 / cos(delta).
cplx normalization(cplx delta);

/// tan(delta) via sin/cos with the |cos delta| >= 1e-12 guard.
cplx checked_tan(cplx delta);

}  // namespace ctinv::semianalytic
