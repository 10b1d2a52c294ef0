#include "mrsim/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mrsim/io.hpp"

namespace mrsim {

namespace {

int sites_from_dim(std::int64_t dim) {
    int n = 0;
    std::int64_t d = 1;
    while (d < dim) {
        d *= 3;
        ++n;
    }
    if (d != dim) throw DomainError("operator dimension is not a power of 3");
    return n;
}

}  // namespace

SpectrumReport dense_spectrum(const SparseOperator& op, std::int64_t dense_cap_dim) {
    if (op.dim() > dense_cap_dim) {
        std::ostringstream msg;
        msg << "dense_spectrum: dimension " << op.dim() << " exceeds cap " << dense_cap_dim
            << "; use iterative_ground_state";
        throw ResourceError(msg.str());
    }
    SpectrumReport rep;
    rep.n_sites = sites_from_dim(op.dim());

    Eigen::MatrixXcd dense = op.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    if (solver.info() != Eigen::Success) throw NumericalError("dense_spectrum: eigensolver failed");

    rep.eigenvalues = solver.eigenvalues();
    rep.ground_vector.n_sites = rep.n_sites;
    rep.ground_vector.amplitudes = solver.eigenvectors().col(0);
    rep.gap = op.dim() > 1 ? rep.eigenvalues[1] - rep.eigenvalues[0] : 0.0;

    const double deg_tol = 1e-8 * std::max(1.0, op.inf_norm());
    rep.ground_degeneracy = 1;
    while (rep.ground_degeneracy < rep.eigenvalues.size() &&
           rep.eigenvalues[rep.ground_degeneracy] - rep.eigenvalues[0] < deg_tol)
        ++rep.ground_degeneracy;
    return rep;
}

std::pair<double, QutritState> iterative_ground_state(const SparseOperator& op,
                                                      const IterativeOptions& opts) {
    const std::int64_t dim = op.dim();
    const int n_sites = sites_from_dim(dim);
    if (!op.is_hermitian(1e-10)) throw DomainError("iterative_ground_state: operator not Hermitian");

    // mt19937 output is fully specified, so the start vector (and hence the
    // whole run) is reproducible across platforms.
    std::mt19937 rng(opts.seed);
    auto unit_double = [&rng]() { return rng() / 4294967296.0 - 0.5; };
    Eigen::VectorXcd v(dim);
    for (std::int64_t i = 0; i < dim; ++i) v[i] = std::complex<double>(unit_double(), unit_double());
    v.normalize();

    const int m_max = static_cast<int>(std::min<std::int64_t>(opts.krylov_dim, dim));
    Eigen::MatrixXcd basis(dim, m_max);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    double best_residual = std::numeric_limits<double>::infinity();
    double theta = 0.0;

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        int m = 0;
        basis.col(0) = v;
        Eigen::VectorXcd w(dim);
        for (int j = 0; j < m_max; ++j) {
            op.apply(basis.col(j), w);
            alpha[j] = w.dot(basis.col(j)).real();
            w -= alpha[j] * basis.col(j);
            if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
            // full reorthogonalization (twice) keeps the basis clean
            for (int pass = 0; pass < 2; ++pass)
                for (int k = 0; k <= j; ++k) w -= basis.col(k).dot(w) * basis.col(k);
            m = j + 1;
            const double b = w.norm();
            if (j + 1 < m_max) {
                beta[j] = b;
                if (b < 1e-14) break;  // happy breakdown: exact invariant subspace
                basis.col(j + 1) = w / b;
            }
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            tri(j, j) = alpha[j];
            if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
        theta = small.eigenvalues()[0];
        v = basis.leftCols(m) * small.eigenvectors().col(0).cast<std::complex<double>>();
        v.normalize();

        op.apply(v, w);
        const double residual = (w - theta * v).norm();
        best_residual = std::min(best_residual, residual);
        if (residual < opts.tol) {
            QutritState state;
            state.n_sites = n_sites;
            state.amplitudes = v;
            return {theta, state};
        }
    }

    std::ostringstream msg;
    msg << "iterative_ground_state: no convergence in " << opts.max_restarts
        << " restarts; best residual " << best_residual;
    throw NumericalError(msg.str());
}

std::string spectrum_export(const SpectrumReport& report) {
    std::ostringstream out;
    out << "index,energy_mhz\n";
    for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
        out << i << "," << fmt12(report.eigenvalues[i]) << "\n";
    return out.str();
}

}  // namespace mrsim
