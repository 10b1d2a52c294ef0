#pragma once

// Motzkin lattice paths, the equal-superposition path state, and the
// frustration-free projector Hamiltonian with boundary penalties.
//
// A configuration is read as a path: Up raises the height by 1, Flat keeps it,
// Down lowers it.  Valid Motzkin paths start and end at height 0 and never go
// negative.

#include <cstdint>
#include <vector>

#include "mrsim/basis.hpp"
#include "mrsim/sparse.hpp"

namespace mrsim {

enum class PathClass { Motzkin, InverseMotzkin, Other };

struct MotzkinPath {
    BasisConfig steps;
    std::vector<int> heights;  // h_0 .. h_N with h_0 = 0
};

// Exact count via the recurrence M_{n+1} = M_n + sum_k M_k M_{n-1-k}.
// Throws ResourceError on uint64 overflow (far beyond the simulated sizes).
std::uint64_t motzkin_number(int n);

std::vector<int> path_heights(const BasisConfig& config);
bool is_motzkin(const BasisConfig& config);
PathClass classify(const BasisConfig& config);
BasisConfig mirror(const BasisConfig& config);  // Up <-> Down

// All valid paths of length n in ascending encode() order (DFS with height
// pruning: height < 0 or height > remaining steps cannot recover).
std::vector<MotzkinPath> enumerate_paths(int n);

// Equal superposition of all valid paths, amplitude 1/sqrt(M_n).
QutritState build_motzkin_state(int n);

// Two-site blocks in the ordered basis {uu,u0,ud,0u,00,0d,du,d0,dd}:
// rank-1 projectors onto (|u0>-|0u>)/sqrt2, (|d0>-|0d>)/sqrt2, (|00>-|ud>)/sqrt2,
// and their expanded sum Pi with entries +-1 (Pi = 2*(U+D+F)).
Eigen::Matrix<std::complex<double>, 9, 9> projector_u();
Eigen::Matrix<std::complex<double>, 9, 9> projector_d();
Eigen::Matrix<std::complex<double>, 9, 9> projector_f();
Eigen::Matrix<std::complex<double>, 9, 9> two_site_pi();

// Diagonal boundary penalty: [site 0 = Down] + [site n-1 = Up].
SparseOperator boundary_projector(int n);

// H = (1/2) sum_i Pi_{i,i+1} + boundary; positive semidefinite with the
// Motzkin state as its unique zero-energy ground state.
SparseOperator build_motzkin_hamiltonian(int n);

// Half-chain Schmidt weights of the ideal Motzkin state from path counting:
// p_h = L_h(m) * L_h(n-m) / M_n where L_h(k) counts non-negative prefix paths
// of length k from height 0 to height h, and the cut is at m = floor(n/2).
// Serves as an independent oracle for the entanglement entropies.
std::vector<double> half_chain_height_weights(int n);

// L_h table: counts of non-negative paths of length k from height 0 to h,
// h = 0..k.
std::vector<std::uint64_t> prefix_path_counts(int k);

}  // namespace mrsim
