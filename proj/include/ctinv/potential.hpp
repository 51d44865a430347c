#pragma once

// Radial grids and sampled potentials in the dimensionless variable x = k r,
// with q(x) = V(x/k) / E.

#include <memory>
#include <string>
#include <vector>

#include "ctinv/types.hpp"

namespace ctinv {

/// Strictly increasing positive abscissae with spacing <= pi/4, so the
/// fastest Riccati-Bessel mode gets at least 8 points per oscillation.
class RadialGrid {
 public:
  static constexpr double kMaxSpacing = 0.78539816339744831;  // pi/4

  RadialGrid() = default;
  explicit RadialGrid(std::vector<double> points);

  /// n points, both ends included.
  static RadialGrid uniform(double x_min, double x_max, std::size_t n);
  /// Default reconstruction grid, [0.05, 25] with 500 points.
  static RadialGrid standard() { return uniform(0.05, 25.0, 500); }
  /// `inner` followed by uniformly spaced points out to x_max. Reconstructed
  /// potentials decay slowly (~1/x^2), so forward checks of them need the
  /// long outer zone; it can be much coarser than the inner one.
  static RadialGrid with_tail(const RadialGrid& inner, double x_max, double spacing);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double>& points() const noexcept { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double max_spacing() const noexcept { return max_spacing_; }
  double min_spacing() const noexcept { return min_spacing_; }

 private:
  std::vector<double> points_;
  double max_spacing_ = 0.0;
  double min_spacing_ = 0.0;
};

enum class PointFlag { Clean, Interpolated, Extrapolated };

const char* to_string(PointFlag f);

struct PotentialCurve {
  RadialGrid grid;
  std::vector<cplx> q;
  std::vector<PointFlag> flags;
  std::vector<std::string> warnings;

  /// Throws InputError when sizes disagree or a value is not finite.
  void validate() const;
};

/// Pointwise sum on a common grid (the split method's q_e + q_o). A point is
/// flagged if it is flagged in either summand.
PotentialCurve operator+(const PotentialCurve& a, const PotentialCurve& b);

/// Quadratic extrapolation of q through the first three samples, evaluated
/// at x (used for x below the grid, typically x = 0).
cplx extrapolate_below(const PotentialCurve& curve, double x);

/// Natural cubic spline through the samples of a curve, real and imaginary
/// parts interpolated separately. Below the grid the quadratic extrapolation
/// is used; beyond it the potential is taken to vanish.
class CurveInterpolator {
 public:
  explicit CurveInterpolator(const PotentialCurve& curve);
  ~CurveInterpolator();
  CurveInterpolator(CurveInterpolator&&) noexcept;
  CurveInterpolator& operator=(CurveInterpolator&&) noexcept;

  cplx operator()(double x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// r in fm, V in MeV.
struct PhysicalTable {
  std::vector<double> r;
  std::vector<cplx> v;
};

/// r = x / k, V = E q. Requires k > 0 and E > 0.
PhysicalTable to_physical(const PotentialCurve& curve, double k, double energy);

/// Inverse of to_physical; flags are reset to Clean.
PotentialCurve to_dimensionless(const PhysicalTable& table, double k, double energy);

}  // namespace ctinv
