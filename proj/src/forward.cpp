#include "ctinv/forward.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctinv/error.hpp"
#include "ctinv/specfun.hpp"

namespace ctinv::forward {

WaveSample integrate_radial(const PotentialFn& q, int l, double x_max, double h) {
  if (l < 0) throw InputError("angular momentum must be non-negative");
  if (!(h > 0.0) || h > kMaxStep) throw InputError("Numerov step must lie in (0, 0.01]");
  if (!(x_max > kStartX + 4.0 * h)) throw InputError("integration range too short");

  WaveSample w;
  w.l = l;
  w.x0 = kStartX;
  w.h = h;
  const auto n = static_cast<std::size_t>(std::floor((x_max - kStartX) / h)) + 1;
  w.psi.resize(n);

  const double ll = static_cast<double>(l) * (l + 1.0);
  const double h2 = h * h / 12.0;
  auto f = [&](double x) { return q(x) + ll / (x * x) - 1.0; };
  const cplx q0 = q(0.0);
  auto seed = [&](double x) {
    return std::pow(x, l + 1) * (1.0 + (q0 - 1.0) * x * x / (2.0 * (2.0 * l + 3.0)));
  };

  w.psi[0] = seed(w.x(0));
  w.psi[1] = seed(w.x(1));
  cplx f_prev = f(w.x(0));
  cplx f_cur = f(w.x(1));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const cplx f_next = f(w.x(i + 1));
    w.psi[i + 1] = (2.0 * w.psi[i] * (1.0 + 5.0 * h2 * f_cur) - w.psi[i - 1] * (1.0 - h2 * f_prev)) /
                   (1.0 - h2 * f_next);
    f_prev = f_cur;
    f_cur = f_next;
  }
  for (cplx v : w.psi) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw RangeError("Numerov integration overflowed");
    }
  }
  return w;
}

WaveSample integrate_radial(const PotentialCurve& q, int l, const RadialGrid& grid) {
  const CurveInterpolator interp(q);
  const double h = std::min(grid.min_spacing(), kMaxStep);
  return integrate_radial([&](double x) { return interp(x); }, l, grid.back(), h);
}

PhaseResult extract_phase_shift(const WaveSample& wave, int l, std::optional<MatchPair> pair) {
  if (wave.psi.size() < 3) throw InputError("wave sample too short to match");
  MatchPair p = pair.value_or(MatchPair{wave.x_max() - 2.0, wave.x_max()});
  if (p.x2 - p.x1 < kMinMatchSeparation) throw InputError("matching points closer than 0.5");

  auto index_of = [&](double x) {
    const double t = std::round((x - wave.x0) / wave.h);
    if (t < 0.0 || t > static_cast<double>(wave.psi.size() - 1)) {
      throw InputError("matching point outside the integrated range");
    }
    return static_cast<std::size_t>(t);
  };

  PhaseResult out;
  out.l = l;
  const std::size_t i2 = index_of(p.x2);
  const double x2 = wave.x(i2);
  const specfun::RiccatiPair f2 = specfun::riccati_integer(l, x2);
  for (int shift = 0; shift <= kMaxNodeShifts; ++shift) {
    const std::size_t i1 = index_of(p.x1 - kNodeShift * shift);
    const double x1 = wave.x(i1);
    const specfun::RiccatiPair f1 = specfun::riccati_integer(l, x1);
    const double det = f1.u.f.real() * f2.v.f.real() - f2.u.f.real() * f1.v.f.real();
    if (std::abs(det) < kNodeThreshold) continue;

    const cplx psi1 = wave.psi[i1];
    const cplx psi2 = wave.psi[i2];
    // psi = C (cos d u - sin d v)  =>  tan d = (psi1 u2 - psi2 u1) / (psi1 v2 - psi2 v1)
    const cplx c = psi1 * f2.v.f - psi2 * f1.v.f;
    const cplx s = psi1 * f2.u.f - psi2 * f1.u.f;
    const cplx i(0.0, 1.0);
    const cplx num = c + i * s;
    const cplx den = c - i * s;
    if (std::abs(den) == 0.0 || std::abs(num) == 0.0) {
      throw ConditioningError("degenerate phase-shift match", 0.0);
    }
    cplx delta = -0.5 * i * std::log(num / den);
    // Fold Re delta into (-pi/2, pi/2].
    double re = delta.real();
    while (re <= -std::numbers::pi / 2.0) re += std::numbers::pi;
    while (re > std::numbers::pi / 2.0) re -= std::numbers::pi;
    out.delta = {re, delta.imag()};
    out.eta = std::abs(num / den);
    out.used = {x1, x2};
    out.node_shifts = shift;
    return out;
  }
  throw ConditioningError("matching points sit on a node after all shifts", 0.0);
}

PhaseShiftSet ForwardResult::as_set() const {
  std::vector<Channel> ch;
  for (const PhaseResult& r : channels) ch.push_back({r.l, r.delta});
  return PhaseShiftSet(std::move(ch));
}

ForwardResult phase_shifts(const PotentialFn& q, std::span<const int> ls, double x_max, double h) {
  ForwardResult out;
  for (int l : ls) out.channels.push_back(extract_phase_shift(integrate_radial(q, l, x_max, h), l));
  return out;
}

ForwardResult phase_shifts(const PotentialCurve& q, std::span<const int> ls,
                           const RadialGrid& grid) {
  const CurveInterpolator interp(q);
  const double h = std::min(grid.min_spacing(), kMaxStep);
  return phase_shifts([&](double x) { return interp(x); }, ls, grid.back(), h);
}

double phase_difference(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

cplx Model::operator()(double x) const {
  switch (kind) {
    case Kind::Gaussian:
      return depth * std::exp(-(x / range) * (x / range));
    case Kind::WoodsSaxon:
      return depth / (1.0 + std::exp((x - range) / diffuseness));
    case Kind::SquareWell:
      return x < range ? depth : cplx(0.0);
  }
  return 0.0;
}

std::string Model::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Gaussian:
      os << "gaussian depth=" << depth << " width=" << range;
      break;
    case Kind::WoodsSaxon:
      os << "woods-saxon depth=" << depth << " radius=" << range << " diffuseness=" << diffuseness;
      break;
    case Kind::SquareWell:
      os << "square-well depth=" << depth << " radius=" << range;
      break;
  }
  return os.str();
}

Model::Kind parse_model_kind(const std::string& name) {
  if (name == "gaussian") return Model::Kind::Gaussian;
  if (name == "woods-saxon") return Model::Kind::WoodsSaxon;
  if (name == "square-well") return Model::Kind::SquareWell;
  throw InputError("unknown model '" + name + "' (gaussian, woods-saxon, square-well)");
}

}  // namespace ctinv::forward
