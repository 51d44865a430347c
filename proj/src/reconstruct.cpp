#include "ctinv/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctinv/error.hpp"
#include "ctinv/specfun.hpp"

namespace ctinv::reconstruct {

namespace {

struct PointSolve {
  Eigen::VectorXcd a;
  double residual = 0.0;
  bool ok = false;
};

PointSolve solve_point(std::span<const cplx> shifted, std::span<const int> ls, double x,
                       const std::vector<specfun::FunctionValue>& u) {
  const auto n = static_cast<Eigen::Index>(ls.size());
  Eigen::MatrixXcd m(n, n);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int l = ls[static_cast<std::size_t>(r)];
    const specfun::FunctionValue v = specfun::riccati_integer(l, x).v;
    rhs[r] = v.f;
    for (Eigen::Index c = 0; c < n; ++c) {
      const cplx L = shifted[static_cast<std::size_t>(c)];
      const specfun::FunctionValue& uc = u[static_cast<std::size_t>(c)];
      const cplx w = uc.f * v.df - uc.df * v.f;
      m(r, c) = w / (static_cast<double>(l) * (l + 1.0) - L * (L + 1.0));
    }
  }

  // Row and column equilibration; the columns of nearly coincident L and l
  // are much larger than the rest.
  Eigen::VectorXd row_scale(n), col_scale(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double s = m.row(r).cwiseAbs().maxCoeff();
    row_scale[r] = s > 0.0 ? 1.0 / s : 1.0;
  }
  Eigen::MatrixXcd scaled = row_scale.asDiagonal() * m;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double s = scaled.col(c).cwiseAbs().maxCoeff();
    col_scale[c] = s > 0.0 ? 1.0 / s : 1.0;
  }
  scaled = scaled * col_scale.asDiagonal();

  PointSolve out;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(scaled);
  if (!(lu.rcond() > kMinRcond)) return out;
  const Eigen::VectorXcd y = lu.solve(row_scale.asDiagonal() * rhs);
  out.a = col_scale.asDiagonal() * y;
  const double norm = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
  out.residual = (m * out.a - rhs).cwiseAbs().maxCoeff() / norm;
  out.ok = out.a.allFinite() && out.residual < kMaxSolveResidual;
  return out;
}

}  // namespace

ExpansionTable expansion_functions(std::span<const cplx> shifted, std::span<const int> ls,
                                   const RadialGrid& grid) {
  check_admissible(shifted, ls);
  const std::size_t np = grid.size();
  const auto n = static_cast<Eigen::Index>(ls.size());

  ExpansionTable table;
  table.shifted.assign(shifted.begin(), shifted.end());
  table.ls.assign(ls.begin(), ls.end());
  table.a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(np), n);
  table.u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(np), n);
  table.flags.assign(np, PointFlag::Clean);

  std::vector<specfun::FunctionValue> u(ls.size());
  for (std::size_t i = 0; i < np; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t c = 0; c < shifted.size(); ++c) {
      u[c] = specfun::riccati_j(shifted[c], grid[i]);
      table.u(row, static_cast<Eigen::Index>(c)) = u[c].f;
    }
    const PointSolve s = solve_point(shifted, ls, grid[i], u);
    if (s.ok) {
      table.a.row(row) = s.a.transpose();
      table.max_residual = std::max(table.max_residual, s.residual);
    } else {
      table.flags[i] = PointFlag::Interpolated;
    }
  }

  // Fill flagged points linearly from the nearest clean neighbours.
  std::vector<std::size_t> clean;
  for (std::size_t i = 0; i < np; ++i) {
    if (table.flags[i] == PointFlag::Clean) clean.push_back(i);
  }
  if (clean.size() < 2) {
    throw ConditioningError("expansion system singular at nearly every grid point", 0.0);
  }
  for (std::size_t i = 0; i < np; ++i) {
    if (table.flags[i] == PointFlag::Clean) continue;
    auto hi = std::lower_bound(clean.begin(), clean.end(), i);
    std::size_t j0, j1;
    if (hi == clean.begin()) {
      j0 = clean[0];
      j1 = clean[1];
    } else if (hi == clean.end()) {
      j0 = clean[clean.size() - 2];
      j1 = clean.back();
    } else {
      j1 = *hi;
      j0 = *(hi - 1);
    }
    const double t = (grid[i] - grid[j0]) / (grid[j1] - grid[j0]);
    table.a.row(static_cast<Eigen::Index>(i)) =
        (1.0 - t) * table.a.row(static_cast<Eigen::Index>(j0)) +
        t * table.a.row(static_cast<Eigen::Index>(j1));
  }
  return table;
}

std::vector<cplx> kernel_diagonal(std::span<const cplx> shifted, const ExpansionTable& table,
                                  const RadialGrid& grid) {
  if (static_cast<std::size_t>(table.a.rows()) != grid.size()) {
    throw InputError("expansion table and grid are not aligned");
  }
  if (!std::equal(shifted.begin(), shifted.end(), table.shifted.begin(), table.shifted.end())) {
    throw InputError("expansion table was built for a different shifted set");
  }
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out[i] = table.a.row(r).cwiseProduct(table.u.row(r)).sum();
  }
  return out;
}

PotentialCurve potential_from_kernel(const RadialGrid& grid, std::span<const cplx> kdiag) {
  const std::size_t n = grid.size();
  if (n < 5) throw InputError("potential_from_kernel needs at least five grid points");
  if (kdiag.size() != n) throw InputError("kernel diagonal and grid differ in length");

  std::vector<cplx> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = kdiag[i] / grid[i];

  // Derivative of the quadratic through three points (xa, xb, xc) at x.
  auto d3 = [&](std::size_t a, std::size_t b, std::size_t c, double x) {
    const double xa = grid[a], xb = grid[b], xc = grid[c];
    return g[a] * ((2.0 * x - xb - xc) / ((xa - xb) * (xa - xc))) +
           g[b] * ((2.0 * x - xa - xc) / ((xb - xa) * (xb - xc))) +
           g[c] * ((2.0 * x - xa - xb) / ((xc - xa) * (xc - xb)));
  };

  PotentialCurve curve;
  curve.grid = grid;
  curve.q.resize(n);
  curve.flags.assign(n, PointFlag::Clean);
  for (std::size_t i = 0; i < n; ++i) {
    cplx dg;
    if (i == 0) {
      dg = d3(0, 1, 2, grid[0]);
    } else if (i == n - 1) {
      dg = d3(n - 3, n - 2, n - 1, grid[n - 1]);
    } else {
      dg = d3(i - 1, i, i + 1, grid[i]);
    }
    curve.q[i] = -2.0 / grid[i] * dg;
  }
  if (grid.max_spacing() > kCoarseSpacing) {
    std::ostringstream os;
    os << "grid spacing " << grid.max_spacing() << " above " << kCoarseSpacing
       << ": finite-difference potential may be inaccurate";
    curve.warnings.push_back(os.str());
  }
  return curve;
}

PotentialCurve potential(std::span<const cplx> shifted, std::span<const int> ls,
                         const RadialGrid& grid) {
  const ExpansionTable table = expansion_functions(shifted, ls, grid);
  PotentialCurve curve = potential_from_kernel(grid, kernel_diagonal(shifted, table, grid));
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (table.flags[i] != PointFlag::Clean) {
      curve.flags[i] = table.flags[i];
      ++flagged;
    }
  }
  if (flagged > 0) {
    std::ostringstream os;
    os << flagged << " grid point(s) with a singular expansion system were interpolated";
    curve.warnings.push_back(os.str());
  }
  return curve;
}

}  // namespace ctinv::reconstruct
