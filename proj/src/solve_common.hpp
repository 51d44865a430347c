#pragma once

// Driver shared by the parity-pure and general solvers: start selection,
// zero-phase-shift limit, damped Newton, multi-start bookkeeping.

#include <functional>
#include <span>
#include <vector>

#include "ctinv/newton.hpp"
#include "ctinv/types.hpp"

namespace ctinv::detail {

using ChannelResidual =
    std::function<Eigen::VectorXcd(std::span<const cplx> shifted)>;

SolveReport drive_solver(const PhaseShiftSet& set, const ChannelResidual& residual,
                         const SolverOptions& options,
                         const std::function<void(const Eigen::VectorXcd&)>& on_accept = {});

}  // namespace ctinv::detail
