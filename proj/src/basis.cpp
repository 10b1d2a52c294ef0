#include "mrsim/basis.hpp"

#include <cmath>

namespace mrsim {

std::int64_t encode(const BasisConfig& config) {
    std::int64_t idx = 0;
    for (SiteLabel s : config) idx = 3 * idx + static_cast<int>(s);
    return idx;
}

BasisConfig decode(std::int64_t index, int n) {
    if (index < 0 || index >= pow3(n)) throw DomainError("decode: index out of range for n=" + std::to_string(n));
    BasisConfig config(n, SiteLabel::Up);
    for (int i = n - 1; i >= 0; --i) {
        config[i] = static_cast<SiteLabel>(index % 3);
        index /= 3;
    }
    return config;
}

int total_magnetization(const BasisConfig& config) {
    int m = 0;
    for (SiteLabel s : config) m += sz_of(s);
    return m;
}

std::string config_string(const BasisConfig& config) {
    std::string s;
    s.reserve(config.size());
    for (SiteLabel l : config) s.push_back(label_char(l));
    return s;
}

BasisConfig config_from_string(const std::string& s) {
    BasisConfig config;
    config.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case 'u': config.push_back(SiteLabel::Up); break;
            case '0': case 'f': config.push_back(SiteLabel::Flat); break;
            case 'd': config.push_back(SiteLabel::Down); break;
            default: throw DomainError(std::string("config_from_string: bad label '") + c + "'");
        }
    }
    return config;
}

int range_magnetization(std::int64_t index, int n, int first, int len) {
    // digit i has place value 3^(n-1-i)
    int m = 0;
    for (int i = first; i < first + len; ++i) {
        const int digit = static_cast<int>((index / pow3(n - 1 - i)) % 3);
        m += sz_of(static_cast<SiteLabel>(digit));
    }
    return m;
}

void QutritState::normalize() {
    const double nrm = amplitudes.norm();
    if (nrm <= 0.0) throw NumericalError("normalize: zero state");
    amplitudes /= nrm;
}

QutritState basis_state(const BasisConfig& config) {
    QutritState st(static_cast<int>(config.size()));
    st.amplitudes[encode(config)] = 1.0;
    return st;
}

std::complex<double> overlap(const QutritState& a, const QutritState& b) {
    if (a.dim() != b.dim()) throw DomainError("overlap: dimension mismatch");
    return a.amplitudes.dot(b.amplitudes);  // conjugates the left argument
}

double fidelity(const QutritState& state, const QutritState& target) {
    const std::complex<double> ov = overlap(target, state);
    return std::norm(ov);
}

Eigen::MatrixXcd partial_trace(const QutritState& state, int first, int len) {
    const int n = state.n_sites;
    if (len <= 0 || len >= n || first < 0 || first + len > n)
        throw DomainError("partial_trace: subsystem must be a nonempty proper contiguous range");
    const std::int64_t dl = pow3(first);            // sites left of A
    const std::int64_t da = pow3(len);              // subsystem A
    const std::int64_t dr = pow3(n - first - len);  // sites right of A
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
    // index = (l * da + a) * dr + r
    for (std::int64_t l = 0; l < dl; ++l)
        for (std::int64_t a = 0; a < da; ++a) {
            const std::int64_t base_a = (l * da + a) * dr;
            for (std::int64_t b = 0; b < da; ++b) {
                const std::int64_t base_b = (l * da + b) * dr;
                std::complex<double> acc = 0.0;
                for (std::int64_t r = 0; r < dr; ++r)
                    acc += state.amplitudes[base_a + r] * std::conj(state.amplitudes[base_b + r]);
                rho(a, b) += acc;
            }
        }
    return rho;
}

}  // namespace mrsim
