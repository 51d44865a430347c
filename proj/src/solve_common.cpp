#include "solve_common.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ctinv/error.hpp"
#include "ctinv/semianalytic.hpp"

namespace ctinv::detail {

namespace {

std::vector<cplx> to_vector(const Eigen::VectorXcd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXcd to_eigen(std::span<const cplx> v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

double max_distance(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Roots are sets; compare after sorting.
bool same_root(std::vector<cplx> a, std::vector<cplx> b) {
  auto key = [](cplx u, cplx v) {
    return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  return max_distance(a, b) < 1e-6;
}

}  // namespace

SolveReport drive_solver(const PhaseShiftSet& set, const ChannelResidual& residual,
                         const SolverOptions& options,
                         const std::function<void(const Eigen::VectorXcd&)>& on_accept) {
  if (set.empty()) throw InputError("cannot invert an empty channel set");
  if (set.size() > semianalytic::kMaxChannels) {
    std::ostringstream os;
    os << "at most " << semianalytic::kMaxChannels << " channels supported, got " << set.size();
    throw RangeError(os.str());
  }
  const std::vector<int> ls = set.ls();

  SolveReport report;
  std::vector<cplx> start;
  if (options.initial) {
    if (options.initial->size() != set.size()) {
      throw InputError("initial guess size does not match the channel count");
    }
    start = *options.initial;
    report.diagnostics.push_back("started from supplied initial values (regression mode)");
  } else {
    start = semianalytic::canonical_start(set);
  }
  report.start = ShiftedMomentumSet(start);

  // Below kNegligiblePhaseShift the roots would sit inside the admissibility
  // gap around S (L - l ~ 2 delta / pi), so such sets take the limit branch.
  bool all_zero = true;
  for (const Channel& c : set.channels()) all_zero = all_zero && std::abs(c.delta) < kNegligiblePhaseShift;
  if (all_zero) {
    // The exact root is T = S, which the kernel ansatz excludes.
    std::vector<cplx> limit;
    for (int l : ls) limit.emplace_back(static_cast<double>(l) - kZeroLimitOffset, 0.0);
    report.solution = ShiftedMomentumSet(limit);
    report.zero_limit = true;
    report.converged = true;
    report.residual_norm = residual(limit).cwiseAbs().maxCoeff();
    report.diagnostics.push_back("all phase shifts vanish (|delta| < 1e-8): returning the T -> S limit representative");
    return report;
  }

  const ResidualFn fn = [&](const Eigen::VectorXcd& x) {
    const std::vector<cplx> t = to_vector(x);
    return residual(t);
  };

  NewtonOutcome main = damped_newton(fn, to_eigen(start), options, on_accept);
  report.solution = ShiftedMomentumSet(to_vector(main.x));
  report.residual_norm = main.residual_norm;
  report.iterations = main.iterations;
  report.converged = main.converged;
  report.diagnostics.insert(report.diagnostics.end(), main.diagnostics.begin(),
                            main.diagnostics.end());
  if (report.converged) check_admissible(report.solution.values(), ls);

  if (options.multistart > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool real = set.all_real() && std::all_of(start.begin(), start.end(), [](cplx z) {
                        return z.imag() == 0.0;
                      });
    SolverOptions quiet = options;
    quiet.multistart = 0;
    for (int s = 0; s < options.multistart; ++s) {
      std::vector<cplx> perturbed = start;
      for (cplx& z : perturbed) {
        if (real) {
          z += options.multistart_radius * (2.0 * unit(rng) - 1.0);
        } else {
          const double r = options.multistart_radius * std::sqrt(unit(rng));
          z += std::polar(r, 2.0 * 3.141592653589793 * unit(rng));
        }
      }
      // Independent branch: no state shared with the other starts.
      NewtonOutcome branch = damped_newton(fn, to_eigen(perturbed), quiet);
      if (!branch.converged) continue;
      std::vector<cplx> root = to_vector(branch.x);
      try {
        check_admissible(root, ls);
      } catch (const Error&) {
        continue;
      }
      const bool known = std::any_of(report.alternatives.begin(), report.alternatives.end(),
                                     [&](const Root& r) { return same_root(r.solution.values(), root); });
      if (known) continue;
      report.alternatives.push_back({ShiftedMomentumSet(root), branch.residual_norm,
                                     max_distance(root, start)});
    }
    std::sort(report.alternatives.begin(), report.alternatives.end(),
              [](const Root& a, const Root& b) { return a.distance_from_start < b.distance_from_start; });
    std::ostringstream os;
    os << "multi-start: " << options.multistart << " starts, " << report.alternatives.size()
       << " distinct roots";
    report.diagnostics.push_back(os.str());
  }
  return report;
}

}  // namespace ctinv::detail
