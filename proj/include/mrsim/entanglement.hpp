#pragma once

// Reduced-density-matrix diagnostics: von Neumann and Renyi-2 entropies
// (natural log), magnetization-sector block structure, and half-chain scaling
// tables.

#include <functional>
#include <map>
#include <vector>

#include "mrsim/basis.hpp"

namespace mrsim {

// -Tr rho ln rho over the eigenvalues, 0 ln 0 = 0, eigenvalues below 1e-12
// dropped.  Rejects non-Hermitian input or trace off 1 by more than 1e-8.
double von_neumann(const Eigen::MatrixXcd& rdm);

// -ln Tr rho^2; equals S1 for flat spectra.
double renyi2(const Eigen::MatrixXcd& rdm);

struct BlockReport {
    int n_a = 0;
    std::map<int, double> block_weights;  // M_A in [-n_a, n_a] -> trace weight
    double offdiag_leakage = 0.0;         // max |entry| connecting different M_A blocks
};

// Partition the 3^{n_a} indices by subsystem magnetization.
BlockReport block_decompose(const Eigen::MatrixXcd& rdm, int n_a);

struct EntanglementReport {
    int n_sites = 0;
    int first = 0, len = 0;  // subsystem range
    Eigen::MatrixXcd rdm;
    double s1 = 0.0, s2 = 0.0;
    BlockReport blocks;
};

EntanglementReport analyze_bipartition(const QutritState& state, int first, int len);

// Half-chain cut at floor(n/2).
EntanglementReport half_chain_report(const QutritState& state);

struct ScalingEntry {
    int n = 0;
    double s1 = 0.0, s2 = 0.0;
    double fidelity = 1.0;  // overlap of the supplied state with the ideal path state
};

// family(n) -> (state, fidelity tag); entropies at the floor(n/2) cut.
std::vector<ScalingEntry> scaling_study(
    const std::vector<int>& n_list,
    const std::function<std::pair<QutritState, double>(int)>& family);

// Independent oracle: S1/S2 of the ideal path state from the path-counting
// Schmidt weights, no state vector involved.
double ideal_entropy_oracle_s1(int n);
double ideal_entropy_oracle_s2(int n);

}  // namespace mrsim
