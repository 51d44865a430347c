#pragma once

// Riccati-Bessel functions of real and complex order on the positive real axis.
//
//   u_lam(x) = sqrt(pi x / 2) J_{lam+1/2}(x)
//   v_lam(x) = sqrt(pi x / 2) Y_{lam+1/2}(x)
//
// Both solve f'' = (lam(lam+1)/x^2 - 1) f and W[u_lam, v_lam] = 1.

#include <complex>

namespace ctinv::specfun {

using cplx = std::complex<double>;

/// Largest |Im lam| accepted by the evaluators.
inline constexpr double kMaxImagOrder = 50.0;

/// Angular-momentum-like order lam. Physical channels use integer lam,
/// shifted momenta are complex.
class Order {
 public:
  Order(double value);  // NOLINT(google-explicit-constructor)
  Order(cplx value);    // NOLINT(google-explicit-constructor)

  cplx value() const noexcept { return value_; }

 private:
  cplx value_;
};

struct FunctionValue {
  cplx f;
  cplx df;
};

struct RiccatiPair {
  FunctionValue u;
  FunctionValue v;
};

FunctionValue riccati_j(Order order, double x);
FunctionValue riccati_y(Order order, double x);

/// u and v together; shares the series work where possible.
RiccatiPair riccati_pair(Order order, double x);

/// W[u_a, v_b](x) = u_a v_b' - u_a' v_b.
cplx wronskian(Order a, Order b, double x);

/// Leading large-x form sin(x - lam pi / 2). Valid for x >> |lam|^2.
cplx asymptotic_u(Order order, double x);

/// Integer-order pair from the trigonometric closed forms (upward recurrence
/// from sin/cos). Falls back to a real power series for u when x < l, where
/// upward recurrence is unstable.
RiccatiPair riccati_integer(int l, double x);

/// 1/Gamma(z), entire; exactly representable zeros at the poles of Gamma.
std::complex<long double> rgamma(std::complex<long double> z);

namespace detail {

/// sqrt(pi x / 2) J_mu(x) and its x-derivative from the ascending series,
/// summed in extended precision.
FunctionValue scaled_bessel_series(cplx mu, double x);

/// v_lam via the reflection formula, with no integer-order guard.
FunctionValue riccati_y_reflection(cplx lam, double x);

/// Large-argument Hankel expansion, returns u and v of order lam.
RiccatiPair riccati_hankel(cplx lam, double x);

}  // namespace detail

}  // namespace ctinv::specfun
