#pragma once

// Product basis of an N-site qutrit (spin-1) chain.
//
// Site labels: Up (Sz=+1), Flat (Sz=0), Down (Sz=-1), stored as digits 0/1/2.
// A configuration maps to an integer index by base-3 positional encoding with
// site 0 as the most significant digit.  All public site indices are 0-based.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mrsim/errors.hpp"

namespace mrsim {

enum class SiteLabel : int { Up = 0, Flat = 1, Down = 2 };

inline int sz_of(SiteLabel s) {
    switch (s) {
        case SiteLabel::Up: return +1;
        case SiteLabel::Flat: return 0;
        case SiteLabel::Down: return -1;
    }
    return 0;
}

inline char label_char(SiteLabel s) {
    switch (s) {
        case SiteLabel::Up: return 'u';
        case SiteLabel::Flat: return '0';
        case SiteLabel::Down: return 'd';
    }
    return '?';
}

using BasisConfig = std::vector<SiteLabel>;

inline std::int64_t pow3(int n) {
    std::int64_t p = 1;
    for (int i = 0; i < n; ++i) p *= 3;
    return p;
}

std::int64_t encode(const BasisConfig& config);
BasisConfig decode(std::int64_t index, int n);
int total_magnetization(const BasisConfig& config);
std::string config_string(const BasisConfig& config);
BasisConfig config_from_string(const std::string& s);

// Sum of Sz over a site range [first, first+len) of the decoded index.
int range_magnetization(std::int64_t index, int n, int first, int len);

struct QutritState {
    int n_sites = 0;
    Eigen::VectorXcd amplitudes;

    QutritState() = default;
    explicit QutritState(int n) : n_sites(n), amplitudes(Eigen::VectorXcd::Zero(pow3(n))) {}
    QutritState(int n, Eigen::VectorXcd amps) : n_sites(n), amplitudes(std::move(amps)) {}

    std::int64_t dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
    void normalize();
};

// Basis state |config>.
QutritState basis_state(const BasisConfig& config);

std::complex<double> overlap(const QutritState& a, const QutritState& b);
double fidelity(const QutritState& state, const QutritState& target);

// Reduced density matrix over the contiguous site range [first, first+len).
// Rejects empty and full-chain subsystems.
Eigen::MatrixXcd partial_trace(const QutritState& state, int first, int len);

}  // namespace mrsim
