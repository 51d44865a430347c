#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctinv {

using cplx = std::complex<double>;

enum class Parity { Even, Odd, Mixed };

const char* to_string(Parity p);

/// One physical partial wave: angular momentum l and its (complex) phase shift.
struct Channel {
  int l = 0;
  cplx delta;
};

/// Elasticity eta = |exp(2 i delta)| = exp(-2 Im delta).
double elasticity(cplx delta);

/// Inverts eta = |exp(2 i delta)|: delta = re_delta - (i/2) ln eta.
cplx delta_from_elasticity(double re_delta, double eta);

/// Physical channels with strictly increasing, non-negative l.
class PhaseShiftSet {
 public:
  PhaseShiftSet() = default;
  explicit PhaseShiftSet(std::vector<Channel> channels);

  std::size_t size() const noexcept { return channels_.size(); }
  bool empty() const noexcept { return channels_.empty(); }
  const std::vector<Channel>& channels() const noexcept { return channels_; }
  const Channel& operator[](std::size_t i) const { return channels_[i]; }

  std::vector<int> ls() const;
  std::vector<cplx> deltas() const;
  bool all_real(double tol = 0.0) const;

  /// Parity of the l values. Throws InputError on an empty set.
  Parity parity() const;
  PhaseShiftSet even_part() const;
  PhaseShiftSet odd_part() const;

 private:
  std::vector<Channel> channels_;
};

/// Shifted angular momenta L, paired index-wise with the source channels.
class ShiftedMomentumSet {
 public:
  ShiftedMomentumSet() = default;
  explicit ShiftedMomentumSet(std::vector<cplx> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<cplx> values_;
};

/// Minimum separation required between L and l, and between distinct
/// L(L+1) values.
inline constexpr double kAdmissibleGap = 1e-8;

/// Throws DegeneracyError unless |T| = |S|, L != l for every pair, and the
/// values L(L+1) are pairwise distinct.
void check_admissible(std::span<const cplx> shifted, std::span<const int> ls);

enum class ResidualForm { SMatrix, Tangent };

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double fd_step = 1e-7;
  int max_halvings = 30;
  double pole_guard = 1e-4;
  /// Extra perturbed starts; 0 disables multi-start.
  int multistart = 0;
  double multistart_radius = 0.1;
  std::uint64_t seed = 0;
  /// Explicit starting point, paired with the channels (regression mode).
  std::optional<std::vector<cplx>> initial;
  ResidualForm form = ResidualForm::Tangent;
};

/// A distinct root found by multi-start.
struct Root {
  ShiftedMomentumSet solution;
  double residual_norm = 0.0;
  double distance_from_start = 0.0;
};

struct SolveReport {
  ShiftedMomentumSet solution;
  ShiftedMomentumSet start;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Zero phase shifts: the exact root T = S is excluded, so the report
  /// carries the representative T = S - kZeroLimitOffset instead.
  bool zero_limit = false;
  std::vector<std::string> diagnostics;
  /// Condition estimates of M_cos at accepted iterates (general method only).
  std::vector<double> condition_history;
  std::vector<Root> alternatives;
};

inline constexpr double kZeroLimitOffset = 1e-6;
/// Sets whose phase shifts are all smaller than this count as zero.
inline constexpr double kNegligiblePhaseShift = 1e-8;

}  // namespace ctinv
