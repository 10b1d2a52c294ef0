#include "mrsim/motzkin.hpp"

#include <cmath>

namespace mrsim {

std::uint64_t motzkin_number(int n) {
    if (n < 0) throw DomainError("motzkin_number: n must be >= 0");
    std::vector<std::uint64_t> m(static_cast<size_t>(n) + 1, 0);
    m[0] = 1;
    for (int k = 0; k < n; ++k) {
        // M_{k+1} = M_k + sum_{j=0}^{k-1} M_j M_{k-1-j}
        std::uint64_t acc = m[static_cast<size_t>(k)];
        for (int j = 0; j <= k - 1; ++j) {
            std::uint64_t prod = 0, next = 0;
            if (__builtin_mul_overflow(m[static_cast<size_t>(j)], m[static_cast<size_t>(k - 1 - j)], &prod) ||
                __builtin_add_overflow(acc, prod, &next))
                throw ResourceError("motzkin_number: uint64 overflow at n=" + std::to_string(k + 1));
            acc = next;
        }
        m[static_cast<size_t>(k) + 1] = acc;
    }
    return m[static_cast<size_t>(n)];
}

std::vector<int> path_heights(const BasisConfig& config) {
    std::vector<int> h(config.size() + 1, 0);
    for (size_t i = 0; i < config.size(); ++i) h[i + 1] = h[i] + sz_of(config[i]);
    return h;
}

bool is_motzkin(const BasisConfig& config) {
    int h = 0;
    for (SiteLabel s : config) {
        h += sz_of(s);
        if (h < 0) return false;
    }
    return h == 0;
}

BasisConfig mirror(const BasisConfig& config) {
    BasisConfig out = config;
    for (SiteLabel& s : out) {
        if (s == SiteLabel::Up) s = SiteLabel::Down;
        else if (s == SiteLabel::Down) s = SiteLabel::Up;
    }
    return out;
}

PathClass classify(const BasisConfig& config) {
    if (is_motzkin(config)) return PathClass::Motzkin;
    if (is_motzkin(mirror(config))) return PathClass::InverseMotzkin;
    return PathClass::Other;
}

namespace {

void enumerate_dfs(int n, BasisConfig& partial, int height, std::vector<MotzkinPath>& out) {
    const int remaining = n - static_cast<int>(partial.size());
    if (height < 0 || height > remaining) return;  // cannot return to 0
    if (remaining == 0) {
        if (height == 0) out.push_back({partial, path_heights(partial)});
        return;
    }
    for (SiteLabel s : {SiteLabel::Up, SiteLabel::Flat, SiteLabel::Down}) {
        partial.push_back(s);
        enumerate_dfs(n, partial, height + sz_of(s), out);
        partial.pop_back();
    }
}

}  // namespace

std::vector<MotzkinPath> enumerate_paths(int n) {
    if (n < 1) throw DomainError("enumerate_paths: n must be >= 1");
    if (n > 20) throw ResourceError("enumerate_paths: n too large for explicit enumeration");
    std::vector<MotzkinPath> out;
    BasisConfig partial;
    partial.reserve(static_cast<size_t>(n));
    enumerate_dfs(n, partial, 0, out);  // label order Up,Flat,Down = ascending encode
    return out;
}

QutritState build_motzkin_state(int n) {
    const auto paths = enumerate_paths(n);
    QutritState st(n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(paths.size()));
    for (const MotzkinPath& p : paths) st.amplitudes[encode(p.steps)] = amp;
    return st;
}

namespace {

Eigen::Matrix<std::complex<double>, 9, 9> rank_one(int ket_a, int ket_b) {
    // projector onto (|a> - |b>)/sqrt2 for two-site basis indices a, b
    Eigen::Matrix<std::complex<double>, 9, 9> m = Eigen::Matrix<std::complex<double>, 9, 9>::Zero();
    m(ket_a, ket_a) = 0.5;
    m(ket_b, ket_b) = 0.5;
    m(ket_a, ket_b) = -0.5;
    m(ket_b, ket_a) = -0.5;
    return m;
}

constexpr int kUF = 3 * 0 + 1;  // |u0>
constexpr int kFU = 3 * 1 + 0;  // |0u>
constexpr int kDF = 3 * 2 + 1;  // |d0>
constexpr int kFD = 3 * 1 + 2;  // |0d>
constexpr int kFF = 3 * 1 + 1;  // |00>
constexpr int kUD = 3 * 0 + 2;  // |ud>

}  // namespace

Eigen::Matrix<std::complex<double>, 9, 9> projector_u() { return rank_one(kUF, kFU); }
Eigen::Matrix<std::complex<double>, 9, 9> projector_d() { return rank_one(kDF, kFD); }
Eigen::Matrix<std::complex<double>, 9, 9> projector_f() { return rank_one(kFF, kUD); }

Eigen::Matrix<std::complex<double>, 9, 9> two_site_pi() {
    return 2.0 * (projector_u() + projector_d() + projector_f());
}

SparseOperator boundary_projector(int n) {
    if (n < 1) throw DomainError("boundary_projector: n must be >= 1");
    const std::int64_t dim = pow3(n);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    const std::int64_t msd = pow3(n - 1);
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        const int first = static_cast<int>(idx / msd);
        const int last = static_cast<int>(idx % 3);
        double v = 0.0;
        if (first == static_cast<int>(SiteLabel::Down)) v += 1.0;
        if (last == static_cast<int>(SiteLabel::Up)) v += 1.0;
        diag[idx] = v;
    }
    return SparseOperator::from_diagonal(diag);
}

SparseOperator build_motzkin_hamiltonian(int n) {
    if (n < 2) throw DomainError("build_motzkin_hamiltonian: n must be >= 2");
    const auto pi = two_site_pi();
    std::vector<SparseOperator> bonds;
    std::vector<const SparseOperator*> parts;
    std::vector<std::complex<double>> coeffs;
    bonds.reserve(static_cast<size_t>(n));
    for (int i = 0; i + 1 < n; ++i) {
        bonds.push_back(embed_two_site(pi, i, i + 1, n));
        coeffs.push_back(0.5);
    }
    bonds.push_back(boundary_projector(n));
    coeffs.push_back(1.0);
    for (const SparseOperator& b : bonds) parts.push_back(&b);
    return SparseOperator::sum(parts, coeffs);
}

std::vector<std::uint64_t> prefix_path_counts(int k) {
    // L[h] after j steps: paths of length j from height 0 to h staying >= 0
    std::vector<std::uint64_t> L(static_cast<size_t>(k) + 1, 0);
    L[0] = 1;
    for (int j = 0; j < k; ++j) {
        std::vector<std::uint64_t> next(L.size(), 0);
        for (int h = 0; h <= j; ++h) {
            if (!L[static_cast<size_t>(h)]) continue;
            const std::uint64_t c = L[static_cast<size_t>(h)];
            next[static_cast<size_t>(h) + 1] += c;       // Up
            next[static_cast<size_t>(h)] += c;           // Flat
            if (h > 0) next[static_cast<size_t>(h) - 1] += c;  // Down
        }
        L = std::move(next);
    }
    return L;
}

std::vector<double> half_chain_height_weights(int n) {
    const int m = n / 2;
    const auto left = prefix_path_counts(m);
    const auto right = prefix_path_counts(n - m);  // reversal symmetry: R_h = L_h
    const double total = static_cast<double>(motzkin_number(n));
    const int hmax = std::min(m, n - m);
    std::vector<double> p;
    p.reserve(static_cast<size_t>(hmax) + 1);
    for (int h = 0; h <= hmax; ++h)
        p.push_back(static_cast<double>(left[static_cast<size_t>(h)]) *
                    static_cast<double>(right[static_cast<size_t>(h)]) / total);
    return p;
}

}  // namespace mrsim
