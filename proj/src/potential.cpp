#include "ctinv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include "ctinv/error.hpp"

namespace ctinv {

RadialGrid::RadialGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InputError("a radial grid needs at least two points");
  if (!(points_.front() > 0.0)) throw InputError("radial grid must start at x > 0");
  max_spacing_ = 0.0;
  min_spacing_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw InputError("radial grid contains a non-finite point");
    if (i == 0) continue;
    const double h = points_[i] - points_[i - 1];
    if (!(h > 0.0)) throw InputError("radial grid must be strictly increasing");
    max_spacing_ = std::max(max_spacing_, h);
    min_spacing_ = std::min(min_spacing_, h);
  }
  if (max_spacing_ > kMaxSpacing) {
    std::ostringstream os;
    os << "radial grid spacing " << max_spacing_ << " exceeds pi/4";
    throw InputError(os.str());
  }
}

RadialGrid RadialGrid::uniform(double x_min, double x_max, std::size_t n) {
  if (n < 2 || !(x_max > x_min)) throw InputError("uniform grid needs n >= 2 and x_max > x_min");
  std::vector<double> pts(n);
  const double h = (x_max - x_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = x_min + h * static_cast<double>(i);
  pts.back() = x_max;
  return RadialGrid(std::move(pts));
}

RadialGrid RadialGrid::with_tail(const RadialGrid& inner, double x_max, double spacing) {
  if (!(spacing > 0.0)) throw InputError("tail spacing must be positive");
  std::vector<double> pts = inner.points();
  const double start = inner.back();
  const auto n = static_cast<std::size_t>(std::ceil((x_max - start) / spacing - 1e-9));
  for (std::size_t i = 1; i <= n; ++i) pts.push_back(std::min(start + spacing * static_cast<double>(i), x_max));
  if (pts.size() >= 2 && pts.back() <= pts[pts.size() - 2]) pts.pop_back();
  return RadialGrid(std::move(pts));
}

const char* to_string(PointFlag f) {
  switch (f) {
    case PointFlag::Clean:
      return "clean";
    case PointFlag::Interpolated:
      return "interpolated";
    case PointFlag::Extrapolated:
      return "extrapolated";
  }
  return "?";
}

void PotentialCurve::validate() const {
  if (q.size() != grid.size() || flags.size() != grid.size()) {
    throw InputError("potential curve: grid, values and flags differ in length");
  }
  for (cplx v : q) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InputError("potential curve contains a non-finite value");
    }
  }
}

PotentialCurve operator+(const PotentialCurve& a, const PotentialCurve& b) {
  if (a.grid.points() != b.grid.points()) throw InputError("cannot add curves on different grids");
  PotentialCurve out = a;
  for (std::size_t i = 0; i < out.q.size(); ++i) {
    out.q[i] += b.q[i];
    if (out.flags[i] == PointFlag::Clean) out.flags[i] = b.flags[i];
  }
  out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
  return out;
}

cplx extrapolate_below(const PotentialCurve& curve, double x) {
  if (curve.grid.size() < 3) throw InputError("extrapolation needs three samples");
  const double x0 = curve.grid[0], x1 = curve.grid[1], x2 = curve.grid[2];
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  return l0 * curve.q[0] + l1 * curve.q[1] + l2 * curve.q[2];
}

struct CurveInterpolator::Impl {
  PotentialCurve curve;
  std::vector<double> re, im;
  gsl_interp* spline_re = nullptr;
  gsl_interp* spline_im = nullptr;

  ~Impl() {
    if (spline_re) gsl_interp_free(spline_re);
    if (spline_im) gsl_interp_free(spline_im);
  }
};

CurveInterpolator::CurveInterpolator(const PotentialCurve& curve) : impl_(std::make_unique<Impl>()) {
  curve.validate();
  if (curve.grid.size() < 3) throw InputError("spline interpolation needs three samples");
  impl_->curve = curve;
  const std::size_t n = curve.grid.size();
  impl_->re.resize(n);
  impl_->im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    impl_->re[i] = curve.q[i].real();
    impl_->im[i] = curve.q[i].imag();
  }
  const double* xs = impl_->curve.grid.points().data();
  impl_->spline_re = gsl_interp_alloc(gsl_interp_cspline, n);
  impl_->spline_im = gsl_interp_alloc(gsl_interp_cspline, n);
  gsl_interp_init(impl_->spline_re, xs, impl_->re.data(), n);
  gsl_interp_init(impl_->spline_im, xs, impl_->im.data(), n);
}

CurveInterpolator::~CurveInterpolator() = default;
CurveInterpolator::CurveInterpolator(CurveInterpolator&&) noexcept = default;
CurveInterpolator& CurveInterpolator::operator=(CurveInterpolator&&) noexcept = default;

cplx CurveInterpolator::operator()(double x) const {
  const PotentialCurve& c = impl_->curve;
  if (x > c.grid.back()) return 0.0;
  if (x < c.grid.front()) return extrapolate_below(c, x);
  const double* xs = c.grid.points().data();
  // Stateless lookups keep the interpolator safe to share between threads.
  return {gsl_interp_eval(impl_->spline_re, xs, impl_->re.data(), x, nullptr),
          gsl_interp_eval(impl_->spline_im, xs, impl_->im.data(), x, nullptr)};
}

PhysicalTable to_physical(const PotentialCurve& curve, double k, double energy) {
  if (!(k > 0.0) || !(energy > 0.0)) throw InputError("k and E must be positive");
  PhysicalTable out;
  out.r.reserve(curve.q.size());
  out.v.reserve(curve.q.size());
  for (std::size_t i = 0; i < curve.q.size(); ++i) {
    out.r.push_back(curve.grid[i] / k);
    out.v.push_back(energy * curve.q[i]);
  }
  return out;
}

PotentialCurve to_dimensionless(const PhysicalTable& table, double k, double energy) {
  if (!(k > 0.0) || !(energy > 0.0)) throw InputError("k and E must be positive");
  std::vector<double> xs;
  PotentialCurve out;
  for (std::size_t i = 0; i < table.r.size(); ++i) {
    xs.push_back(table.r[i] * k);
    out.q.push_back(table.v[i] / energy);
  }
  out.grid = RadialGrid(std::move(xs));
  out.flags.assign(out.q.size(), PointFlag::Clean);
  return out;
}

}  // namespace ctinv
