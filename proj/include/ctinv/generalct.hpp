#pragma once

// General (arbitrary parity) Cox-Thompson system and the parity-split
// approximation built on the semi-analytic solver.

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ctinv/types.hpp"

namespace ctinv::generalct {

/// Rows indexed by l in S, columns by L in T:
///   [M_sin]_lL = sin((l-L) pi/2) / (L(L+1) - l(l+1)),  M_cos likewise with cos.
struct MMatrixPair {
  Eigen::MatrixXcd m_sin;
  Eigen::MatrixXcd m_cos;
};

/// Shifted reactance elements
///   K_l^+- = sum_{L,l'} [M_sin]_lL [M_cos^-1]_Ll' exp(+-i (l-l') pi/2),
/// obtained from two linear solves against M_cos.
struct ReactancePair {
  Eigen::VectorXcd k_plus;
  Eigen::VectorXcd k_minus;
  /// 1-norm condition estimate of M_cos.
  double condition = 0.0;
  /// Largest |M_cos z - rhs|_inf over the two solves.
  double solve_residual = 0.0;
};

/// Condition estimates above this raise ConditioningError.
inline constexpr double kMaxCondition = 1e12;

MMatrixPair build_m_matrices(std::span<const int> ls, std::span<const cplx> shifted);

ReactancePair reactance(std::span<const int> ls, std::span<const cplx> shifted);

/// Component l is LHS - RHS of either
///   S_l = exp(2 i delta_l) = (1 + i K^+) / (1 - i K^-)                (SMatrix)
///   tan(delta_l) = (K^+ + K^-) / (2 + i (K^+ - K^-))                  (Tangent)
Eigen::VectorXcd residual_general(std::span<const int> ls, std::span<const cplx> shifted,
                                  std::span<const cplx> deltas, ResidualForm form);

SolveReport solve_general(const PhaseShiftSet& set, const SolverOptions& options = {});

/// Independent even/odd semi-analytic solves; the potential of the split
/// method is q_e + q_o. A half is empty when the input has no channel of that
/// parity.
struct ApproximateReport {
  std::optional<SolveReport> even;
  std::optional<SolveReport> odd;
  PhaseShiftSet even_set;
  PhaseShiftSet odd_set;
};

/// `options.initial`, when given, is paired with the full channel list and
/// split by parity.
ApproximateReport solve_approximate(const PhaseShiftSet& set, const SolverOptions& options = {});

/// Spin-orbit averaged phase shift [(l+1) delta^+ + l delta^-] / (2l+1).
cplx combine_spin_orbit(cplx delta_plus, cplx delta_minus, int l);

}  // namespace ctinv::generalct
