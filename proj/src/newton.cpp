#include "ctinv/newton.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "ctinv/error.hpp"

namespace ctinv {

namespace {

constexpr int kMaxRestarts = 4;

bool finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

std::optional<Eigen::VectorXcd> try_eval(const ResidualFn& residual, const Eigen::VectorXcd& x,
                                         std::string* why = nullptr) {
  try {
    Eigen::VectorXcd f = residual(x);
    if (!finite(f)) {
      if (why) *why = "non-finite residual";
      return std::nullopt;
    }
    return f;
  } catch (const Error& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
}

double norm_inf(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

bool is_real(const Eigen::VectorXcd& v) { return v.imag().cwiseAbs().maxCoeff() == 0.0; }

// Deterministic perturbation; stays on the real axis for real points so that
// real problems keep real iterates.
Eigen::VectorXcd perturb(const Eigen::VectorXcd& x, int attempt) {
  const double radius = 1e-3 * std::pow(4.0, attempt);
  const bool real = is_real(x);
  Eigen::VectorXcd out = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double sign = (j + attempt) % 2 == 0 ? 1.0 : -1.0;
    if (real) {
      out[j] += sign * radius * (1.0 + 0.1 * static_cast<double>(j));
    } else {
      const double angle = 2.399963229728653 * static_cast<double>(j + 1 + attempt);
      out[j] += radius * std::polar(1.0, angle);
    }
  }
  return out;
}

Eigen::MatrixXcd jacobian(const ResidualFn& residual, const Eigen::VectorXcd& x,
                          const Eigen::VectorXcd& fx, double step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXcd jac(fx.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = step * std::max(1.0, std::abs(x[j]));
    Eigen::VectorXcd probe = x;
    probe[j] += h;
    if (auto f = try_eval(residual, probe)) {
      jac.col(j) = (*f - fx) / h;
      continue;
    }
    probe[j] = x[j] - h;
    if (auto f = try_eval(residual, probe)) {
      jac.col(j) = (fx - *f) / h;
      continue;
    }
    jac.col(j).setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  return jac;
}

}  // namespace

NewtonOutcome damped_newton(const ResidualFn& residual, Eigen::VectorXcd start,
                            const SolverOptions& options,
                            const std::function<void(const Eigen::VectorXcd&)>& on_accept) {
  NewtonOutcome out;
  out.x = start;
  out.residual_norm = std::numeric_limits<double>::infinity();

  Eigen::VectorXcd x = start;
  int restarts = 0;
  std::string why;
  std::optional<Eigen::VectorXcd> fx = try_eval(residual, x, &why);
  while (!fx && restarts < kMaxRestarts) {
    out.diagnostics.push_back("start rejected (" + why + "), restarting from perturbed point");
    x = perturb(start, restarts++);
    fx = try_eval(residual, x, &why);
  }
  if (!fx) {
    out.diagnostics.push_back("no admissible starting point near the initial guess");
    return out;
  }

  double fnorm = norm_inf(*fx);
  out.x = x;
  out.residual_norm = fnorm;
  if (on_accept) on_accept(x);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (fnorm < options.tol) {
      out.converged = true;
      break;
    }
    out.iterations = iter + 1;

    const Eigen::MatrixXcd jac = jacobian(residual, x, *fx, options.fd_step);
    Eigen::VectorXcd step;
    bool step_ok = jac.allFinite();
    if (step_ok) {
      step = jac.fullPivLu().solve(-*fx);
      step_ok = finite(step);
    }

    bool accepted = false;
    if (step_ok) {
      double lambda = 1.0;
      for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
        const Eigen::VectorXcd trial = x + lambda * step;
        auto ft = try_eval(residual, trial);
        if (!ft) continue;  // pole guard or degeneracy: retreat along the step
        const double tnorm = norm_inf(*ft);
        if (tnorm < fnorm) {
          x = trial;
          fx = std::move(ft);
          fnorm = tnorm;
          accepted = true;
          break;
        }
      }
    }

    if (accepted) {
      if (fnorm < out.residual_norm) {
        out.x = x;
        out.residual_norm = fnorm;
      }
      if (on_accept) on_accept(x);
      continue;
    }

    if (restarts >= kMaxRestarts) {
      out.diagnostics.push_back("line search failed; restart budget exhausted");
      break;
    }
    std::ostringstream os;
    os << "line search failed at iteration " << iter + 1 << " (|F| = " << fnorm
       << "), restarting from perturbed best iterate";
    out.diagnostics.push_back(os.str());
    std::optional<Eigen::VectorXcd> fr;
    while (!fr && restarts < kMaxRestarts) {
      x = perturb(out.x, restarts++);
      fr = try_eval(residual, x);
    }
    if (!fr) break;
    fx = std::move(fr);
    fnorm = norm_inf(*fx);
  }

  if (!out.converged && out.residual_norm < options.tol) out.converged = true;
  if (!out.converged) {
    std::ostringstream os;
    os << "no convergence: best |F|_inf = " << out.residual_norm << " after " << out.iterations
       << " iterations";
    out.diagnostics.push_back(os.str());
  }
  return out;
}

}  // namespace ctinv
