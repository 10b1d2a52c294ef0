#pragma once

// Eigensolvers: dense full diagonalization for small chains, restarted Lanczos
// for the ground state when the dense path would be prohibitive.

#include <utility>

#include "mrsim/basis.hpp"
#include "mrsim/sparse.hpp"

namespace mrsim {

struct SpectrumReport {
    int n_sites = 0;
    Eigen::VectorXd eigenvalues;  // ascending, MHz
    QutritState ground_vector;
    double gap = 0.0;             // E1 - E0
    int ground_degeneracy = 1;    // dimension of the lowest eigenspace
};

// Full diagonalization. dim above dense_cap_dim -> resource error pointing at
// iterative_ground_state. Default cap 3^6.
SpectrumReport dense_spectrum(const SparseOperator& op, std::int64_t dense_cap_dim = 729);

struct IterativeOptions {
    double tol = 1e-8;        // residual ||Hv - E0 v||
    int max_restarts = 500;
    int krylov_dim = 40;
    unsigned seed = 12345;    // start-vector seed, for reproducibility
};

// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
// Deterministic for a fixed seed; throws a numerical error (carrying the best
// residual reached) if max_restarts is exhausted.
std::pair<double, QutritState> iterative_ground_state(const SparseOperator& op,
                                                      const IterativeOptions& opts = {});

// Two-column "index,energy_mhz" text, 12 significant digits.
std::string spectrum_export(const SpectrumReport& report);

}  // namespace mrsim
