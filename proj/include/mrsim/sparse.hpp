#pragma once

// Hermitian sparse operators in canonical CSR form.
//
// Built from coordinate triplets, sorted by (row, col) with duplicates merged,
// so identical inputs always serialize identically.  Application is matrix-free
// with optional row-parallelism for large dimensions.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "mrsim/basis.hpp"
#include "mrsim/errors.hpp"

namespace mrsim {

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    std::complex<double> value;
};

class SparseOperator {
  public:
    SparseOperator() = default;

    static SparseOperator from_triplets(std::int64_t dim, std::vector<Triplet> triplets);
    static SparseOperator identity(std::int64_t dim);
    static SparseOperator zero(std::int64_t dim);
    static SparseOperator from_diagonal(const Eigen::VectorXd& diag);

    std::int64_t dim() const { return dim_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    QutritState apply(const QutritState& state) const;

    Eigen::MatrixXcd to_dense() const;
    std::complex<double> entry(std::int64_t row, std::int64_t col) const;

    // max_i sum_j |a_ij| — cheap upper bound on the spectral norm.
    double inf_norm() const;
    double max_hermiticity_violation() const;
    bool is_hermitian(double tol = 1e-12) const { return max_hermiticity_violation() < tol; }

    SparseOperator scaled(std::complex<double> factor) const;
    static SparseOperator sum(const std::vector<const SparseOperator*>& ops,
                              const std::vector<std::complex<double>>& coeffs);
    static SparseOperator sum(const SparseOperator& a, const SparseOperator& b) {
        return sum({&a, &b}, {1.0, 1.0});
    }
    // max |(A - B)_ij| without densifying.
    static double max_abs_difference(const SparseOperator& a, const SparseOperator& b);

    // commutator check against a diagonal operator: max |[A, diag(d)]_ij|
    double max_commutator_with_diagonal(const Eigen::VectorXd& d) const;

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int64_t>& cols() const { return cols_; }
    const std::vector<std::complex<double>>& values() const { return values_; }

  private:
    std::int64_t dim_ = 0;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int64_t> cols_;
    std::vector<std::complex<double>> values_;
};

// Embed a 9x9 two-site matrix acting on sites (i, j) of an n-site chain,
// identity elsewhere.  The two-site basis is ordered {uu,u0,ud,0u,00,0d,du,d0,dd}
// (row index = 3*label_i + label_j).  Sites are 0-based; i != j; passing j < i
// relabels the matrix accordingly.
SparseOperator embed_two_site(const Eigen::Matrix<std::complex<double>, 9, 9>& op2, int i, int j, int n);

// Number of worker threads for row-parallel apply; reads the MRSIM_THREADS
// environment variable once (default 1).
int apply_thread_count();

}  // namespace mrsim
