#include "ctinv/generalct.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctinv/error.hpp"
#include "ctinv/semianalytic.hpp"
#include "solve_common.hpp"

namespace ctinv::generalct {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kPoleFloor = 1e-12;

// i^n for integer n, exact.
cplx i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

MMatrixPair build_m_matrices(std::span<const int> ls, std::span<const cplx> shifted) {
  check_admissible(shifted, ls);
  const auto n = static_cast<Eigen::Index>(ls.size());
  MMatrixPair m{Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n)};
  for (Eigen::Index r = 0; r < n; ++r) {
    const double l = ls[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < n; ++c) {
      const cplx L = shifted[static_cast<std::size_t>(c)];
      const cplx den = L * (L + 1.0) - l * (l + 1.0);
      const cplx arg = (l - L) * kHalfPi;
      m.m_sin(r, c) = std::sin(arg) / den;
      m.m_cos(r, c) = std::cos(arg) / den;
    }
  }
  return m;
}

ReactancePair reactance(std::span<const int> ls, std::span<const cplx> shifted) {
  const MMatrixPair m = build_m_matrices(ls, shifted);
  const auto n = static_cast<Eigen::Index>(ls.size());
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m.m_cos);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxCondition)) {
    std::ostringstream os;
    os << "M_cos ill-conditioned (condition estimate " << condition << ")";
    throw ConditioningError(os.str(), condition);
  }

  // K^+_l = i^l  sum_L [M_sin]_lL z+_L  with  M_cos z+ = (i^{-l'})_l'
  // K^-_l = i^-l sum_L [M_sin]_lL z-_L  with  M_cos z- = (i^{l'})_l'
  Eigen::VectorXcd rhs_plus(n), rhs_minus(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    rhs_plus[k] = i_power(-ls[static_cast<std::size_t>(k)]);
    rhs_minus[k] = i_power(ls[static_cast<std::size_t>(k)]);
  }
  const Eigen::VectorXcd z_plus = lu.solve(rhs_plus);
  const Eigen::VectorXcd z_minus = lu.solve(rhs_minus);

  ReactancePair out;
  out.condition = condition;
  out.solve_residual = std::max((m.m_cos * z_plus - rhs_plus).cwiseAbs().maxCoeff(),
                                (m.m_cos * z_minus - rhs_minus).cwiseAbs().maxCoeff());
  const Eigen::VectorXcd s_plus = m.m_sin * z_plus;
  const Eigen::VectorXcd s_minus = m.m_sin * z_minus;
  out.k_plus.resize(n);
  out.k_minus.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int l = ls[static_cast<std::size_t>(k)];
    out.k_plus[k] = i_power(l) * s_plus[k];
    out.k_minus[k] = i_power(-l) * s_minus[k];
  }
  return out;
}

Eigen::VectorXcd residual_general(std::span<const int> ls, std::span<const cplx> shifted,
                                  std::span<const cplx> deltas, ResidualForm form) {
  if (deltas.size() != ls.size()) throw InputError("one phase shift per channel required");
  const ReactancePair k = reactance(ls, shifted);
  const auto n = static_cast<Eigen::Index>(ls.size());
  Eigen::VectorXcd out(n);
  const cplx i(0.0, 1.0);
  for (Eigen::Index r = 0; r < n; ++r) {
    const cplx delta = deltas[static_cast<std::size_t>(r)];
    const cplx kp = k.k_plus[r];
    const cplx km = k.k_minus[r];
    if (form == ResidualForm::SMatrix) {
      const cplx den = 1.0 - i * km;
      if (std::abs(den) < kPoleFloor) throw PoleError("1 - i K^- vanishes");
      out[r] = std::exp(2.0 * i * delta) - (1.0 + i * kp) / den;
    } else {
      const cplx den = 2.0 + i * (kp - km);
      if (std::abs(den) < kPoleFloor) throw PoleError("2 + i (K^+ - K^-) vanishes");
      out[r] = semianalytic::checked_tan(delta) - (kp + km) / den;
    }
  }
  return out;
}

SolveReport solve_general(const PhaseShiftSet& set, const SolverOptions& options) {
  const std::vector<int> ls = set.ls();
  const std::vector<cplx> deltas = set.deltas();
  const ResidualForm form = options.form;
  std::vector<double> history;
  SolveReport report = detail::drive_solver(
      set, [&](std::span<const cplx> t) { return residual_general(ls, t, deltas, form); },
      options, [&](const Eigen::VectorXcd& x) {
        const std::vector<cplx> t(x.data(), x.data() + x.size());
        try {
          history.push_back(reactance(ls, t).condition);
        } catch (const ConditioningError& e) {
          history.push_back(e.condition());
        }
      });
  report.condition_history = std::move(history);
  if (report.zero_limit) {
    report.condition_history.push_back(reactance(ls, report.solution.values()).condition);
  }
  return report;
}

ApproximateReport solve_approximate(const PhaseShiftSet& set, const SolverOptions& options) {
  ApproximateReport out;
  out.even_set = set.even_part();
  out.odd_set = set.odd_part();

  auto half_options = [&](int parity) {
    SolverOptions o = options;
    if (options.initial) {
      if (options.initial->size() != set.size()) {
        throw InputError("initial guess size does not match the channel count");
      }
      std::vector<cplx> part;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i].l % 2 == parity) part.push_back((*options.initial)[i]);
      }
      o.initial = std::move(part);
    }
    return o;
  };
  if (!out.even_set.empty()) out.even = semianalytic::solve_parity(out.even_set, half_options(0));
  if (!out.odd_set.empty()) out.odd = semianalytic::solve_parity(out.odd_set, half_options(1));
  return out;
}

cplx combine_spin_orbit(cplx delta_plus, cplx delta_minus, int l) {
  if (l < 0) throw InputError("angular momentum must be non-negative");
  return ((l + 1.0) * delta_plus + static_cast<double>(l) * delta_minus) / (2.0 * l + 1.0);
}

}  // namespace ctinv::generalct
