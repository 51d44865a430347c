#pragma once

// Forward problem: regular solution of
//
//   psi'' = (q(x) + l(l+1)/x^2 - 1) psi
//
// by Numerov integration, and phase shifts from matching to
// psi ~ cos(delta) u_l - sin(delta) v_l beyond the potential.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctinv/potential.hpp"
#include "ctinv/types.hpp"

namespace ctinv::forward {

using PotentialFn = std::function<cplx(double x)>;

inline constexpr double kStartX = 1e-3;
inline constexpr double kMaxStep = 0.01;

struct WaveSample {
  int l = 0;
  double x0 = kStartX;
  double h = kMaxStep;
  /// psi at x0 + i h.
  std::vector<cplx> psi;

  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
  double x_max() const { return x(psi.size() - 1); }
};

/// Integrates from kStartX to x_max with step h (<= kMaxStep), seeded with
/// the small-x expansion psi = x^{l+1} (1 + (q(0) - 1) x^2 / (2 (2l + 3))).
WaveSample integrate_radial(const PotentialFn& q, int l, double x_max, double h = kMaxStep);

/// Sampled potential: the spline of the curve; the integration ends at the
/// last point of `grid` with h = min(grid spacing, kMaxStep).
WaveSample integrate_radial(const PotentialCurve& q, int l, const RadialGrid& grid);

struct MatchPair {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct PhaseResult {
  int l = 0;
  cplx delta;
  double eta = 1.0;
  MatchPair used;
  int node_shifts = 0;
};

/// Minimum separation of the matching points.
inline constexpr double kMinMatchSeparation = 0.5;
/// |u1 v2 - u2 v1| below this counts as a node of the 2x2 match.
inline constexpr double kNodeThreshold = 0.05;
inline constexpr double kNodeShift = 0.25;
inline constexpr int kMaxNodeShifts = 4;

/// Default pair is (x_max - 2, x_max). On a near-node match the inner point
/// moves inward by kNodeShift, at most kMaxNodeShifts times. Re delta is
/// reported in (-pi/2, pi/2].
PhaseResult extract_phase_shift(const WaveSample& wave, int l,
                                std::optional<MatchPair> pair = std::nullopt);

struct ForwardResult {
  std::vector<PhaseResult> channels;

  PhaseShiftSet as_set() const;
};

ForwardResult phase_shifts(const PotentialFn& q, std::span<const int> ls, double x_max,
                           double h = kMaxStep);
ForwardResult phase_shifts(const PotentialCurve& q, std::span<const int> ls,
                           const RadialGrid& grid);

/// Re delta difference folded into [0, pi/2] (phase shifts are defined mod pi).
double phase_difference(double a, double b);

/// Model potentials for synthetic data. Strengths may be complex
/// (Im < 0 absorbs).
struct Model {
  enum class Kind { Gaussian, WoodsSaxon, SquareWell };
  Kind kind = Kind::Gaussian;
  cplx depth = -1.0;
  /// Gaussian width, Woods-Saxon radius, or well radius.
  double range = 1.0;
  /// Woods-Saxon diffuseness.
  double diffuseness = 0.5;

  cplx operator()(double x) const;
  std::string describe() const;
};

Model::Kind parse_model_kind(const std::string& name);

}  // namespace ctinv::forward
