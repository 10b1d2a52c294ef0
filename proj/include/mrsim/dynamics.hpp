#pragma once

// Time-dependent propagation under H_static + H_control(t). Piecewise-constant
// micro-steps with the Hamiltonian frozen at the step midpoint; each step is a
// Krylov (Lanczos) exponential action. Units: H in MHz, t in us, phase = H*t
// (optionally 2*pi*H*t under the "cycles" convention).

#include <functional>
#include <optional>
#include <vector>

#include "mrsim/basis.hpp"
#include "mrsim/controls.hpp"
#include "mrsim/interaction.hpp"
#include "mrsim/rydberg.hpp"
#include "mrsim/sparse.hpp"

namespace mrsim {

struct TrajectoryRecord {
    std::vector<double> times_us;
    std::vector<std::int64_t> tracked_configs;   // basis indices of the population columns
    Eigen::MatrixXd populations;                 // n_tracked x n_times
    std::vector<double> fidelity_series;         // empty when no target was given
    QutritState final_state;
    double final_fidelity = -1.0;                // -1 when no target
    double peak_fidelity = -1.0;
    std::int64_t total_steps = 0;
};

struct PropagateOptions {
    double dt_max_us = 0.05;
    int n_output = 200;
    std::vector<std::int64_t> tracked_configs;
    const QutritState* fidelity_target = nullptr;  // not owned
    int krylov_dim = 30;
    double krylov_tol = 1e-13;
    double phase_per_mhz_us = 1.0;                 // 2*pi under the cycles convention
};

// exp(-i * scale * H * dt) |v> by Lanczos; exact up to krylov tolerance.
Eigen::VectorXcd krylov_expm_apply(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply_h,
    const Eigen::VectorXcd& v, double dt_scaled, int krylov_dim, double tol);

TrajectoryRecord propagate(const QutritState& initial, const SparseOperator& static_op,
                           const ControlSchedule& schedule, const PropagateOptions& opts = {});

struct ProtocolResult {
    TrajectoryRecord trajectory;
    double final_fidelity = 0.0;
    double peak_fidelity = 0.0;
};

// Propagates the given initial state under H_Rydberg + H_control(t), recording
// fidelity against the ideal superposition-of-paths target at every output step.
ProtocolResult run_adiabatic_protocol(const InteractionTable& table, const Geometry& geometry,
                                      const ControlSchedule& schedule, const QutritState& initial,
                                      const PropagateOptions& opts = {},
                                      const RydbergOptions& ryd_opts = {});

}  // namespace mrsim
