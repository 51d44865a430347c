#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctinv/types.hpp"

namespace ctinv {

using ResidualFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct NewtonOutcome {
  Eigen::VectorXcd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> diagnostics;
};

/// Damped Newton for a holomorphic residual F: C^n -> C^n.
///
/// The Jacobian is built by forward differences with step fd_step (backward
/// when the forward point is rejected). A trial point is rejected when the
/// residual throws a ctinv::Error (pole guard, degeneracy, conditioning) or
/// fails to reduce the infinity norm; the step is then halved, up to
/// max_halvings times. A start that cannot be evaluated, or an iteration that
/// stalls, triggers a restart from a small deterministic perturbation of the
/// best point seen so far. `on_accept` runs on every accepted iterate.
NewtonOutcome damped_newton(const ResidualFn& residual, Eigen::VectorXcd start,
                            const SolverOptions& options,
                            const std::function<void(const Eigen::VectorXcd&)>& on_accept = {});

}  // namespace ctinv
