#pragma once

#include <algorithm>
#include <complex>
#include <random>

namespace ctinv::test {

using cplx = std::complex<double>;

inline double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// |got - want| relative to max(|want|, 1).
inline double mixed_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(std::abs(want), 1.0);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline cplx uniform_c(double re_lo, double re_hi, double im_lo, double im_hi) {
  return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
}

}  // namespace ctinv::test
