#include "ctinv/types.hpp"

#include <cmath>
#include <sstream>

#include "ctinv/error.hpp"

namespace ctinv {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even:
      return "even";
    case Parity::Odd:
      return "odd";
    case Parity::Mixed:
      return "mixed";
  }
  return "?";
}

double elasticity(cplx delta) { return std::exp(-2.0 * delta.imag()); }

cplx delta_from_elasticity(double re_delta, double eta) {
  if (!(eta > 0.0) || eta > 1.0) {
    std::ostringstream os;
    os << "elasticity must lie in (0, 1], got " << eta;
    throw InputError(os.str());
  }
  return {re_delta, -0.5 * std::log(eta)};
}

PhaseShiftSet::PhaseShiftSet(std::vector<Channel> channels) : channels_(std::move(channels)) {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const Channel& c = channels_[i];
    if (c.l < 0) throw InputError("angular momentum must be non-negative");
    if (i > 0 && c.l <= channels_[i - 1].l) {
      throw InputError("channel l values must be strictly increasing");
    }
    if (!std::isfinite(c.delta.real()) || !std::isfinite(c.delta.imag())) {
      throw InputError("phase shift must be finite");
    }
  }
}

std::vector<int> PhaseShiftSet::ls() const {
  std::vector<int> out;
  out.reserve(channels_.size());
  for (const Channel& c : channels_) out.push_back(c.l);
  return out;
}

std::vector<cplx> PhaseShiftSet::deltas() const {
  std::vector<cplx> out;
  out.reserve(channels_.size());
  for (const Channel& c : channels_) out.push_back(c.delta);
  return out;
}

bool PhaseShiftSet::all_real(double tol) const {
  for (const Channel& c : channels_) {
    if (std::abs(c.delta.imag()) > tol) return false;
  }
  return true;
}

Parity PhaseShiftSet::parity() const {
  if (channels_.empty()) throw InputError("empty channel set has no parity");
  bool even = false;
  bool odd = false;
  for (const Channel& c : channels_) (c.l % 2 == 0 ? even : odd) = true;
  if (even && odd) return Parity::Mixed;
  return even ? Parity::Even : Parity::Odd;
}

PhaseShiftSet PhaseShiftSet::even_part() const {
  std::vector<Channel> out;
  for (const Channel& c : channels_) {
    if (c.l % 2 == 0) out.push_back(c);
  }
  return PhaseShiftSet(std::move(out));
}

PhaseShiftSet PhaseShiftSet::odd_part() const {
  std::vector<Channel> out;
  for (const Channel& c : channels_) {
    if (c.l % 2 == 1) out.push_back(c);
  }
  return PhaseShiftSet(std::move(out));
}

void check_admissible(std::span<const cplx> shifted, std::span<const int> ls) {
  if (shifted.size() != ls.size()) {
    std::ostringstream os;
    os << "need |T| = |S|, got " << shifted.size() << " vs " << ls.size();
    throw DegeneracyError(os.str());
  }
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    const cplx L = shifted[i];
    for (int l : ls) {
      if (std::abs(L - static_cast<double>(l)) <= kAdmissibleGap) {
        std::ostringstream os;
        os << "shifted momentum " << L << " coincides with physical l = " << l;
        throw DegeneracyError(os.str());
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      const cplx M = shifted[j];
      if (std::abs(L * (L + 1.0) - M * (M + 1.0)) <= kAdmissibleGap) {
        std::ostringstream os;
        os << "shifted momenta " << M << " and " << L << " have equal L(L+1)";
        throw DegeneracyError(os.str());
      }
    }
  }
}

}  // namespace ctinv
