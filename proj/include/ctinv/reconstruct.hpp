#pragma once

// Potential from a solved shifted-momentum set. The transformation kernel is
// separable, K(x, y) = sum_L A_L(x) u_L(y), and the A_L(x) follow from
//
//   sum_L A_L(x) W[u_L, v_l](x) / (l(l+1) - L(L+1)) = v_l(x),   l in S,
//
// solved independently at every grid point. Then
//
//   q(x) = -(2/x) d/dx [K(x, x) / x].

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ctinv/potential.hpp"
#include "ctinv/types.hpp"

namespace ctinv::reconstruct {

/// Relative back-substitution residual above which a point is flagged.
inline constexpr double kMaxSolveResidual = 1e-9;
/// Reciprocal condition below which a point is flagged.
inline constexpr double kMinRcond = 1e-13;

struct ExpansionTable {
  std::vector<cplx> shifted;
  std::vector<int> ls;
  /// Row per grid point, column per L.
  Eigen::MatrixXcd a;
  /// u_L(x) at the same points, kept for the kernel diagonal.
  Eigen::MatrixXcd u;
  std::vector<PointFlag> flags;
  /// Largest relative residual over the clean points.
  double max_residual = 0.0;
};

ExpansionTable expansion_functions(std::span<const cplx> shifted, std::span<const int> ls,
                                   const RadialGrid& grid);

/// K(x, x) = sum_L A_L(x) u_L(x).
std::vector<cplx> kernel_diagonal(std::span<const cplx> shifted, const ExpansionTable& table,
                                  const RadialGrid& grid);

/// Needs at least five points. Second-order differences: three-point central
/// in the interior (non-uniform spacing allowed), three-point one-sided at
/// the ends.
PotentialCurve potential_from_kernel(const RadialGrid& grid, std::span<const cplx> kdiag);

/// expansion_functions + kernel_diagonal + potential_from_kernel; flags of
/// interpolated expansion points carry over to the curve.
PotentialCurve potential(std::span<const cplx> shifted, std::span<const int> ls,
                         const RadialGrid& grid);

/// Spacing above which the finite-difference potential gets a warning.
inline constexpr double kCoarseSpacing = 0.2;

}  // namespace ctinv::reconstruct
