#include "mrsim/sparse.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace mrsim {

SparseOperator SparseOperator::from_triplets(std::int64_t dim, std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets)
        if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim)
            throw DomainError("SparseOperator: triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseOperator op;
    op.dim_ = dim;
    op.row_ptr_.assign(static_cast<size_t>(dim) + 1, 0);
    op.cols_.reserve(triplets.size());
    op.values_.reserve(triplets.size());
    size_t k = 0;
    while (k < triplets.size()) {
        const std::int64_t r = triplets[k].row, c = triplets[k].col;
        std::complex<double> v = 0.0;
        while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) v += triplets[k++].value;
        if (v != std::complex<double>(0.0, 0.0)) {
            op.cols_.push_back(c);
            op.values_.push_back(v);
            ++op.row_ptr_[static_cast<size_t>(r) + 1];
        }
    }
    for (std::int64_t r = 0; r < dim; ++r) op.row_ptr_[static_cast<size_t>(r) + 1] += op.row_ptr_[static_cast<size_t>(r)];
    return op;
}

SparseOperator SparseOperator::identity(std::int64_t dim) {
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(dim));
    for (std::int64_t i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
    return from_triplets(dim, std::move(t));
}

SparseOperator SparseOperator::zero(std::int64_t dim) { return from_triplets(dim, {}); }

SparseOperator SparseOperator::from_diagonal(const Eigen::VectorXd& diag) {
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(diag.size()));
    for (std::int64_t i = 0; i < diag.size(); ++i)
        if (diag[i] != 0.0) t.push_back({i, i, diag[i]});
    return from_triplets(diag.size(), std::move(t));
}

int apply_thread_count() {
    static const int count = [] {
        if (const char* env = std::getenv("MRSIM_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return 1;
    }();
    return count;
}

void SparseOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    if (x.size() != dim_) throw DomainError("apply: dimension mismatch");
    y.resize(dim_);
    auto rows = [&](std::int64_t r0, std::int64_t r1) {
        for (std::int64_t r = r0; r < r1; ++r) {
            std::complex<double> acc = 0.0;
            for (std::int64_t k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k)
                acc += values_[static_cast<size_t>(k)] * x[cols_[static_cast<size_t>(k)]];
            y[r] = acc;
        }
    };
    const int nthreads = apply_thread_count();
    if (nthreads <= 1 || dim_ < 4096) {
        rows(0, dim_);
        return;
    }
    std::vector<std::thread> workers;
    const std::int64_t chunk = (dim_ + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        const std::int64_t r0 = t * chunk, r1 = std::min(dim_, r0 + chunk);
        if (r0 >= r1) break;
        workers.emplace_back(rows, r0, r1);
    }
    for (auto& w : workers) w.join();
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y;
    apply(x, y);
    return y;
}

QutritState SparseOperator::apply(const QutritState& state) const {
    QutritState out(state.n_sites);
    apply(state.amplitudes, out.amplitudes);
    return out;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::int64_t r = 0; r < dim_; ++r)
        for (std::int64_t k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k)
            m(r, cols_[static_cast<size_t>(k)]) = values_[static_cast<size_t>(k)];
    return m;
}

std::complex<double> SparseOperator::entry(std::int64_t row, std::int64_t col) const {
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_) throw DomainError("entry: index out of range");
    const auto begin = cols_.begin() + row_ptr_[static_cast<size_t>(row)];
    const auto end = cols_.begin() + row_ptr_[static_cast<size_t>(row) + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return values_[static_cast<size_t>(it - cols_.begin())];
}

double SparseOperator::inf_norm() const {
    double best = 0.0;
    for (std::int64_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::int64_t k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k)
            s += std::abs(values_[static_cast<size_t>(k)]);
        best = std::max(best, s);
    }
    return best;
}

double SparseOperator::max_hermiticity_violation() const {
    double worst = 0.0;
    for (std::int64_t r = 0; r < dim_; ++r)
        for (std::int64_t k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k) {
            const std::int64_t c = cols_[static_cast<size_t>(k)];
            worst = std::max(worst, std::abs(values_[static_cast<size_t>(k)] - std::conj(entry(c, r))));
        }
    return worst;
}

SparseOperator SparseOperator::scaled(std::complex<double> factor) const {
    SparseOperator out = *this;
    for (auto& v : out.values_) v *= factor;
    return out;
}

SparseOperator SparseOperator::sum(const std::vector<const SparseOperator*>& ops,
                                   const std::vector<std::complex<double>>& coeffs) {
    if (ops.empty() || ops.size() != coeffs.size()) throw DomainError("sum: operand/coefficient mismatch");
    const std::int64_t dim = ops[0]->dim();
    std::vector<Triplet> t;
    for (size_t o = 0; o < ops.size(); ++o) {
        const SparseOperator& a = *ops[o];
        if (a.dim() != dim) throw DomainError("sum: dimension mismatch");
        for (std::int64_t r = 0; r < dim; ++r)
            for (std::int64_t k = a.row_ptr_[static_cast<size_t>(r)]; k < a.row_ptr_[static_cast<size_t>(r) + 1]; ++k)
                t.push_back({r, a.cols_[static_cast<size_t>(k)], coeffs[o] * a.values_[static_cast<size_t>(k)]});
    }
    return from_triplets(dim, std::move(t));
}

double SparseOperator::max_abs_difference(const SparseOperator& a, const SparseOperator& b) {
    if (a.dim() != b.dim()) throw DomainError("max_abs_difference: dimension mismatch");
    double worst = 0.0;
    for (std::int64_t r = 0; r < a.dim(); ++r) {
        for (std::int64_t k = a.row_ptr_[static_cast<size_t>(r)]; k < a.row_ptr_[static_cast<size_t>(r) + 1]; ++k)
            worst = std::max(worst, std::abs(a.values_[static_cast<size_t>(k)] -
                                            b.entry(r, a.cols_[static_cast<size_t>(k)])));
        for (std::int64_t k = b.row_ptr_[static_cast<size_t>(r)]; k < b.row_ptr_[static_cast<size_t>(r) + 1]; ++k)
            worst = std::max(worst, std::abs(b.values_[static_cast<size_t>(k)] -
                                            a.entry(r, b.cols_[static_cast<size_t>(k)])));
    }
    return worst;
}

double SparseOperator::max_commutator_with_diagonal(const Eigen::VectorXd& d) const {
    if (d.size() != dim_) throw DomainError("commutator: dimension mismatch");
    // [A, D]_rc = a_rc (d_c - d_r)
    double worst = 0.0;
    for (std::int64_t r = 0; r < dim_; ++r)
        for (std::int64_t k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k) {
            const std::int64_t c = cols_[static_cast<size_t>(k)];
            worst = std::max(worst, std::abs(values_[static_cast<size_t>(k)]) * std::abs(d[c] - d[r]));
        }
    return worst;
}

SparseOperator embed_two_site(const Eigen::Matrix<std::complex<double>, 9, 9>& op2, int i, int j, int n) {
    if (i == j) throw DomainError("embed_two_site: site collision");
    if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("embed_two_site: site out of range");
    Eigen::Matrix<std::complex<double>, 9, 9> m = op2;
    if (i > j) {
        // reorder so that the first tensor factor is the smaller site index
        Eigen::Matrix<std::complex<double>, 9, 9> swapped;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d)
                        swapped(3 * b + a, 3 * d + c) = op2(3 * a + b, 3 * c + d);
        m = swapped;
        std::swap(i, j);
    }
    const std::int64_t dim = pow3(n);
    // index = ((l * 3 + si) * mid + ?) ... split digits around sites i < j
    const std::int64_t dl = pow3(i), dm = pow3(j - i - 1), dr = pow3(n - j - 1);
    std::vector<Triplet> t;
    for (int si = 0; si < 3; ++si)
        for (int sj = 0; sj < 3; ++sj)
            for (int ti = 0; ti < 3; ++ti)
                for (int tj = 0; tj < 3; ++tj) {
                    const std::complex<double> v = m(3 * si + sj, 3 * ti + tj);
                    if (v == std::complex<double>(0.0, 0.0)) continue;
                    for (std::int64_t l = 0; l < dl; ++l)
                        for (std::int64_t mid = 0; mid < dm; ++mid)
                            for (std::int64_t r = 0; r < dr; ++r) {
                                const std::int64_t row = ((((l * 3 + si) * dm + mid) * 3 + sj) * dr + r);
                                const std::int64_t col = ((((l * 3 + ti) * dm + mid) * 3 + tj) * dr + r);
                                t.push_back({row, col, v});
                            }
                }
    return SparseOperator::from_triplets(dim, std::move(t));
}

}  // namespace mrsim
