#include "ctinv/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <quadmath.h>

#include "ctinv/error.hpp"

namespace ctinv::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Ascending series (quad precision) up to this argument; large-argument forms
// above it, where the Hankel remainder is below double roundoff.
constexpr double kSeriesLimit = 25.0;
// Hankel expansion applied directly up to this |lam|; order recurrence beyond.
constexpr double kHankelMaxOrder = 4.5;
// Reflection formula degenerates at integer nu = lam + 1/2.
constexpr double kIntegerGuard = 1e-6;
constexpr double kRichardsonStep = 1e-5;

void check_argument(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "Riccati-Bessel argument must be positive and finite, got " << x;
    throw RangeError(os.str());
  }
}

void check_finite(const FunctionValue& v, const char* what, cplx lam, double x) {
  auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!finite(v.f) || !finite(v.df)) {
    std::ostringstream os;
    os << what << " overflows at order " << lam << ", x = " << x;
    throw RangeError(os.str());
  }
}

// Minimal complex arithmetic on __float128. The ascending series for
// J_mu(x) cancels like e^x / sqrt(x); 113-bit mantissas keep that below
// double roundoff for x <= kSeriesLimit.
using quad = __float128;

quad pi_q() {
  static const quad value = 4 * atanq(quad(1));
  return value;
}

struct QComplex {
  quad re = 0;
  quad im = 0;

  QComplex() = default;
  QComplex(quad r, quad i = 0) : re(r), im(i) {}  // NOLINT
  explicit QComplex(cplx z) : re(z.real()), im(z.imag()) {}

  cplx to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

QComplex operator+(QComplex a, QComplex b) { return {a.re + b.re, a.im + b.im}; }
QComplex operator-(QComplex a, QComplex b) { return {a.re - b.re, a.im - b.im}; }
QComplex operator-(QComplex a) { return {-a.re, -a.im}; }
QComplex operator*(QComplex a, QComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
QComplex operator*(QComplex a, quad s) { return {a.re * s, a.im * s}; }
QComplex operator/(QComplex a, quad s) { return {a.re / s, a.im / s}; }
QComplex operator/(QComplex a, QComplex b) {
  // Smith's algorithm
  if (fabsq(b.re) >= fabsq(b.im)) {
    const quad r = b.im / b.re;
    const quad d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  const quad r = b.re / b.im;
  const quad d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}
QComplex& operator+=(QComplex& a, QComplex b) { return a = a + b; }
QComplex& operator*=(QComplex& a, QComplex b) { return a = a * b; }

quad abs(QComplex a) { return hypotq(a.re, a.im); }
QComplex exp(QComplex a) {
  const quad m = expq(a.re);
  return {m * cosq(a.im), m * sinq(a.im)};
}
QComplex log(QComplex a) { return {logq(abs(a)), atan2q(a.im, a.re)}; }
QComplex sin(QComplex a) { return {sinq(a.re) * coshq(a.im), cosq(a.re) * sinhq(a.im)}; }
QComplex cos(QComplex a) { return {cosq(a.re) * coshq(a.im), -sinq(a.re) * sinhq(a.im)}; }

// sin(pi z) and cos(pi z) with the integer part removed first, so integer z
// gives exact zeros.
QComplex sin_pi(QComplex z) {
  const quad m = nearbyintq(z.re);
  const QComplex r = sin((z - m) * pi_q());
  return fmodq(fabsq(m), 2) == 1 ? -r : r;
}

QComplex cos_pi(QComplex z) {
  const quad m = nearbyintq(z.re);
  const QComplex r = cos((z - m) * pi_q());
  return fmodq(fabsq(m), 2) == 1 ? -r : r;
}

// Stirling series for ln Gamma(w), Re w >= 20.
QComplex log_gamma_stirling(QComplex w) {
  static const quad kCoef[] = {
      quad(1) / 12,      quad(-1) / 360,       quad(1) / 1260,
      quad(-1) / 1680,   quad(1) / 1188,       quad(-691) / 360360,
      quad(1) / 156,     quad(-3617) / 122400, quad(43867) / 244188,
      quad(-174611) / 125400, quad(77683) / 5796, quad(-236364091) / 1506960};
  const QComplex inv = QComplex(1) / w;
  const QComplex inv2 = inv * inv;
  QComplex power = inv;
  QComplex corr;
  for (quad c : kCoef) {
    corr += power * c;
    power *= inv2;
  }
  return (w - QComplex(quad(0.5))) * log(w) - w + QComplex(quad(0.5) * logq(2 * pi_q())) + corr;
}

// Gamma(z) for Re z >= 0.5 by upward shift into the Stirling region.
QComplex gamma_right(QComplex z) {
  QComplex prod(1);
  QComplex w = z;
  while (w.re < 20) {
    prod *= w;
    w += QComplex(1);
  }
  return exp(log_gamma_stirling(w)) / prod;
}

QComplex rgamma_q(QComplex z) {
  if (z.re < quad(0.5)) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    return sin_pi(z) * gamma_right(QComplex(1) - z) / pi_q();
  }
  return QComplex(1) / gamma_right(z);
}

struct QValue {
  QComplex f;
  QComplex df;
};

// sqrt(pi x / 2) J_mu(x) and derivative, summed in quad precision.
QValue scaled_bessel_series_q(QComplex mu, double x_d) {
  const quad x = x_d;
  const quad hx = x / 2;
  const quad q = hx * hx;
  const QComplex pref = exp((mu + QComplex(quad(0.5))) * logq(hx)) * sqrtq(pi_q());

  QComplex sum, dsum, term;
  quad largest = 0;
  const quad eps = quad(1e-34);
  bool recurring = false;
  quad kfact = 1;
  quad qk = 1;
  for (int k = 0; k < 4000; ++k) {
    const QComplex kmu = mu + QComplex(quad(k));
    if (!recurring) {
      // Terms with Re(k + mu + 1) < 1 may sit on poles of Gamma; take them
      // through 1/Gamma directly, then recur once past that region.
      if (k > 0) {
        kfact *= k;
        qk *= -q;
      }
      term = pref * (qk / kfact) * rgamma_q(kmu + QComplex(1));
      recurring = kmu.re >= 0;
    } else {
      term = term * (-q) / (kmu * quad(k));
    }
    const QComplex dterm = term * (kmu + QComplex(quad(k) + quad(0.5))) / x;
    sum += term;
    dsum += dterm;
    largest = fmaxq(largest, abs(term));
    if (recurring && quad(k) > hx + 1) {
      const quad scale = fmaxq(abs(sum), largest * quad(1e-40));
      const quad dscale = fmaxq(abs(dsum), largest * quad(1e-40));
      if (abs(term) <= eps * scale && abs(dterm) <= eps * dscale) break;
    }
  }
  return {sum, dsum};
}

QValue riccati_y_reflection_q(QComplex lam, double x) {
  const QComplex nu = lam + QComplex(quad(0.5));
  const QComplex s = sin_pi(nu);
  const QComplex c = cos_pi(nu);
  const QValue jp = scaled_bessel_series_q(nu, x);
  const QValue jm = scaled_bessel_series_q(-nu, x);
  return {(jp.f * c - jm.f) / s, (jp.df * c - jm.df) / s};
}

}  // namespace

Order::Order(double value) : Order(cplx(value, 0.0)) {}

Order::Order(cplx value) : value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw RangeError("order must be finite");
  }
  if (std::abs(value.imag()) > kMaxImagOrder) {
    std::ostringstream os;
    os << "order " << value << " outside supported envelope |Im| <= " << kMaxImagOrder;
    throw RangeError(os.str());
  }
}

std::complex<long double> rgamma(std::complex<long double> z) {
  const QComplex r = rgamma_q(QComplex(static_cast<quad>(z.real()), static_cast<quad>(z.imag())));
  return {static_cast<long double>(r.re), static_cast<long double>(r.im)};
}

namespace detail {

FunctionValue scaled_bessel_series(cplx mu, double x) {
  const QValue r = scaled_bessel_series_q(QComplex(mu), x);
  return {r.f.to_double(), r.df.to_double()};
}

FunctionValue riccati_y_reflection(cplx lam, double x) {
  const QValue r = riccati_y_reflection_q(QComplex(lam), x);
  return {r.f.to_double(), r.df.to_double()};
}

RiccatiPair riccati_hankel(cplx lam, double x) {
  const cplx nu = lam + 0.5;
  const cplx mu4 = 4.0 * nu * nu;
  cplx p = 1.0;
  cplx qs = 0.0;
  cplx dp = 0.0;
  cplx dq = 0.0;
  cplx t = 1.0;
  double previous = 1.0;
  const double nu_abs = std::abs(nu);
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    const cplx next = t * (mu4 - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(next);
    if (mag == 0.0) break;
    if (k > nu_abs + 2.0 && mag > previous) break;  // asymptotic series turned
    t = next;
    previous = mag;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    const cplx dt = -static_cast<double>(k) / x * t;
    if (k % 2 == 0) {
      p += sign * t;
      dp += sign * dt;
    } else {
      qs += sign * t;
      dq += sign * dt;
    }
    if (mag < 1e-18 * std::abs(p)) break;
  }
  const cplx omega = x - (lam + 1.0) * (kPi / 2.0);
  const cplx c = std::cos(omega);
  const cplx s = std::sin(omega);
  RiccatiPair out;
  out.u.f = p * c - qs * s;
  out.u.df = dp * c - p * s - dq * s - qs * c;
  out.v.f = p * s + qs * c;
  out.v.df = dp * s + p * c + dq * c - qs * s;
  return out;
}

}  // namespace detail

namespace {

bool near_integer_nu(cplx lam) {
  const cplx nu = lam + 0.5;
  return std::abs(nu - std::nearbyint(nu.real())) < kIntegerGuard;
}

FunctionValue riccati_y_series(cplx lam, double x) {
  if (!near_integer_nu(lam)) return detail::riccati_y_reflection(lam, x);
  // Symmetric samples at +-h and +-2h, Richardson-combined to O(h^4).
  const double h = kRichardsonStep;
  auto avg = [&](double step) {
    const FunctionValue a = detail::riccati_y_reflection(lam + step, x);
    const FunctionValue b = detail::riccati_y_reflection(lam - step, x);
    return FunctionValue{0.5 * (a.f + b.f), 0.5 * (a.df + b.df)};
  };
  const FunctionValue a1 = avg(h);
  const FunctionValue a2 = avg(2.0 * h);
  return {(4.0 * a1.f - a2.f) / 3.0, (4.0 * a1.df - a2.df) / 3.0};
}

// Walk the three-term recurrence f_{lam+1} + f_{lam-1} = (2 lam + 1)/x f_lam
// from a Hankel-evaluated base order with |Re| <= 1/2.
RiccatiPair riccati_recurrence(cplx lam, double x) {
  const long n = std::lround(lam.real());
  const cplx base = lam - static_cast<double>(n);
  RiccatiPair out;
  if (n >= 0) {
    RiccatiPair lo = detail::riccati_hankel(base - 1.0, x);
    RiccatiPair hi = detail::riccati_hankel(base, x);
    cplx ul = lo.u.f, uh = hi.u.f, vl = lo.v.f, vh = hi.v.f;
    cplx order = base;
    for (long k = 0; k < n; ++k) {
      const cplx factor = (2.0 * order + 1.0) / x;
      const cplx un = factor * uh - ul;
      const cplx vn = factor * vh - vl;
      ul = uh;
      uh = un;
      vl = vh;
      vh = vn;
      order += 1.0;
    }
    out.u = {uh, ul - lam / x * uh};
    out.v = {vh, vl - lam / x * vh};
  } else {
    RiccatiPair lo = detail::riccati_hankel(base, x);
    RiccatiPair hi = detail::riccati_hankel(base + 1.0, x);
    cplx ul = lo.u.f, uh = hi.u.f, vl = lo.v.f, vh = hi.v.f;
    cplx order = base;  // order of ul
    for (long k = 0; k < -n + 1; ++k) {
      const cplx factor = (2.0 * order + 1.0) / x;
      const cplx un = factor * ul - uh;
      const cplx vn = factor * vl - vh;
      uh = ul;
      ul = un;
      vh = vl;
      vl = vn;
      order -= 1.0;
    }
    // uh now holds order lam, ul holds lam - 1.
    out.u = {uh, ul - lam / x * uh};
    out.v = {vh, vl - lam / x * vh};
  }
  return out;
}

enum class Regime { Series, Hankel, Recurrence };

Regime pick_regime(cplx lam, double x) {
  if (x <= kSeriesLimit) return Regime::Series;
  if (std::abs(lam) <= kHankelMaxOrder) return Regime::Hankel;
  if (std::abs(lam.imag()) <= 4.0 && std::abs(lam.real()) + 1.0 < 0.8 * x) {
    return Regime::Recurrence;
  }
  return Regime::Series;
}

}  // namespace

RiccatiPair riccati_pair(Order order, double x) {
  check_argument(x);
  const cplx lam = order.value();
  RiccatiPair out;
  switch (pick_regime(lam, x)) {
    case Regime::Series:
      out.u = detail::scaled_bessel_series(lam + 0.5, x);
      out.v = riccati_y_series(lam, x);
      break;
    case Regime::Hankel:
      out = detail::riccati_hankel(lam, x);
      break;
    case Regime::Recurrence:
      out = riccati_recurrence(lam, x);
      break;
  }
  check_finite(out.u, "riccati_j", lam, x);
  check_finite(out.v, "riccati_y", lam, x);
  return out;
}

FunctionValue riccati_j(Order order, double x) {
  check_argument(x);
  const cplx lam = order.value();
  FunctionValue out;
  switch (pick_regime(lam, x)) {
    case Regime::Series:
      out = detail::scaled_bessel_series(lam + 0.5, x);
      break;
    case Regime::Hankel:
      out = detail::riccati_hankel(lam, x).u;
      break;
    case Regime::Recurrence:
      out = riccati_recurrence(lam, x).u;
      break;
  }
  check_finite(out, "riccati_j", lam, x);
  return out;
}

FunctionValue riccati_y(Order order, double x) {
  check_argument(x);
  const cplx lam = order.value();
  FunctionValue out;
  switch (pick_regime(lam, x)) {
    case Regime::Series:
      out = riccati_y_series(lam, x);
      break;
    case Regime::Hankel:
      out = detail::riccati_hankel(lam, x).v;
      break;
    case Regime::Recurrence:
      out = riccati_recurrence(lam, x).v;
      break;
  }
  check_finite(out, "riccati_y", lam, x);
  return out;
}

cplx wronskian(Order a, Order b, double x) {
  const FunctionValue u = riccati_j(a, x);
  const FunctionValue v = riccati_y(b, x);
  return u.f * v.df - u.df * v.f;
}

cplx asymptotic_u(Order order, double x) {
  return std::sin(x - order.value() * (kPi / 2.0));
}

RiccatiPair riccati_integer(int l, double x) {
  check_argument(x);
  if (l < 0) throw RangeError("integer Riccati-Bessel order must be non-negative");
  // Orders -1 and 0 seed the recurrence.
  double um = std::cos(x), u = std::sin(x);
  double vm = std::sin(x), v = -std::cos(x);
  for (int k = 0; k < l; ++k) {
    const double factor = (2.0 * k + 1.0) / x;
    const double vn = factor * v - vm;
    vm = v;
    v = vn;
    const double un = factor * u - um;
    um = u;
    u = un;
  }
  RiccatiPair out;
  out.v = {v, vm - l / x * v};
  if (x >= l) {
    out.u = {u, um - l / x * u};
    return out;
  }
  // u_l(x) = x^{l+1} sum_k (-x^2/2)^k / (k! (2l+2k+1)!!)
  auto series = [x](int order) {
    double dfact = 1.0;
    for (int j = 3; j <= 2 * order + 1; j += 2) dfact *= j;
    double term = std::pow(x, order + 1) / dfact;
    double sum = term;
    double dsum = term * (order + 1) / x;
    for (int k = 1; k < 200; ++k) {
      term *= -0.5 * x * x / (k * (2.0 * order + 2.0 * k + 1.0));
      sum += term;
      dsum += term * (order + 1 + 2 * k) / x;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return FunctionValue{sum, dsum};
  };
  out.u = series(l);
  return out;
}

}  // namespace ctinv::specfun
