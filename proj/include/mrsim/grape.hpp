#pragma once

// Piecewise-constant pulse optimization maximizing the state-transfer fidelity
// F = |<target|psi(T)>|^2.  Gradients are exact: each slice propagator is
// diagonalized densely and dU/du follows from the divided-difference formula on
// the eigenbasis, contracted with forward and adjoint states.  The optimizer is
// a projected L-BFGS ascent with backtracking, so accepted iterates are
// monotone and bounds are respected exactly.

#include <optional>
#include <utility>
#include <vector>

#include "mrsim/basis.hpp"
#include "mrsim/controls.hpp"
#include "mrsim/interaction.hpp"

namespace mrsim {

struct GrapeProblem {
    Eigen::MatrixXcd static_op;  // dense static Hamiltonian, MHz
    PulseGrid grid;              // channel layout + initial values
    QutritState initial;
    QutritState target;
    Eigen::VectorXd lower;       // per-channel bounds, MHz
    Eigen::VectorXd upper;
    int max_iter = 500;
    double target_fidelity = 0.9999;
};

struct GrapeResult {
    PulseGrid grid;                        // optimized controls
    std::vector<double> fidelity_history;  // accepted iterates, nondecreasing
    double final_fidelity = 0.0;
    bool converged = false;
    int iterations = 0;
    QutritState final_state;               // forward propagation under the result
};

double grape_fidelity(const GrapeProblem& problem, const PulseGrid& grid,
                      QutritState* final_state = nullptr);

// dF/du for every (channel, slice); same shape as grid.values.
Eigen::MatrixXd grape_gradient(const GrapeProblem& problem, const PulseGrid& grid,
                               double* fidelity_out = nullptr);

// Gradient with bound-blocked components zeroed (ascent direction components
// pointing out of the feasible box at active bounds).
double projected_gradient_norm(const GrapeProblem& problem, const PulseGrid& grid);

GrapeResult grape_optimize(const GrapeProblem& problem);

struct PrepareOptions {
    int max_iter = 500;
    double target_fidelity = 0.9999;
    double rabi_lo_mhz = 0.0, rabi_hi_mhz = 10.0;
    double det_lo_mhz = -50.0, det_hi_mhz = 50.0;
    unsigned seed = 12345;
    std::int64_t dense_cap_dim = 729;
    std::optional<QutritState> target;  // default: solver ground state
};

// Wires grape_optimize from |00...0> to the interacting ground state with the
// four global channels; returns the propagated final state (what the pulses
// actually produce), not the solver vector.
std::pair<QutritState, GrapeResult> prepare_ground_state(const InteractionTable& table,
                                                         const Geometry& geometry,
                                                         double duration_us, int n_slices,
                                                         const PrepareOptions& opts = {});

}  // namespace mrsim
