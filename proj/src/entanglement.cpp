#include "mrsim/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mrsim/motzkin.hpp"

namespace mrsim {

namespace {

constexpr double kEigClip = 1e-12;

void check_density_matrix(const Eigen::MatrixXcd& rdm) {
    if (rdm.rows() != rdm.cols() || rdm.rows() == 0) throw DomainError("density matrix must be square");
    const double herm = (rdm - rdm.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-8) throw DomainError("density matrix not Hermitian");
    const double tr = rdm.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) throw DomainError("density matrix trace differs from 1");
}

}  // namespace

double von_neumann(const Eigen::MatrixXcd& rdm) {
    check_density_matrix(rdm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rdm, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()[k];
        if (lam > kEigClip) s -= lam * std::log(lam);
    }
    return s;
}

double renyi2(const Eigen::MatrixXcd& rdm) {
    check_density_matrix(rdm);
    // Tr rho^2 is the squared Frobenius norm for Hermitian rho
    return -std::log(rdm.squaredNorm());
}

BlockReport block_decompose(const Eigen::MatrixXcd& rdm, int n_a) {
    if (rdm.rows() != pow3(n_a)) throw DomainError("block_decompose: size is not 3^n_a");
    BlockReport rep;
    rep.n_a = n_a;
    for (int m = -n_a; m <= n_a; ++m) rep.block_weights[m] = 0.0;

    const std::int64_t dim = rdm.rows();
    std::vector<int> mag(dim);
    for (std::int64_t a = 0; a < dim; ++a) mag[a] = range_magnetization(a, n_a, 0, n_a);

    for (std::int64_t a = 0; a < dim; ++a) {
        rep.block_weights[mag[a]] += rdm(a, a).real();
        for (std::int64_t b = 0; b < dim; ++b)
            if (mag[a] != mag[b]) rep.offdiag_leakage = std::max(rep.offdiag_leakage, std::abs(rdm(a, b)));
    }
    return rep;
}

EntanglementReport analyze_bipartition(const QutritState& state, int first, int len) {
    EntanglementReport rep;
    rep.n_sites = state.n_sites;
    rep.first = first;
    rep.len = len;
    rep.rdm = partial_trace(state, first, len);
    rep.s1 = von_neumann(rep.rdm);
    rep.s2 = renyi2(rep.rdm);
    rep.blocks = block_decompose(rep.rdm, len);
    return rep;
}

EntanglementReport half_chain_report(const QutritState& state) {
    const int cut = state.n_sites / 2;
    if (cut < 1) throw DomainError("half_chain_report: need at least 2 sites");
    return analyze_bipartition(state, 0, cut);
}

std::vector<ScalingEntry> scaling_study(
    const std::vector<int>& n_list,
    const std::function<std::pair<QutritState, double>(int)>& family) {
    std::vector<ScalingEntry> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        auto [state, fid] = family(n);
        const EntanglementReport rep = half_chain_report(state);
        rows.push_back({n, rep.s1, rep.s2, fid});
    }
    return rows;
}

double ideal_entropy_oracle_s1(int n) {
    double s = 0.0;
    for (double p : half_chain_height_weights(n))
        if (p > kEigClip) s -= p * std::log(p);
    return s;
}

double ideal_entropy_oracle_s2(int n) {
    double q = 0.0;
    for (double p : half_chain_height_weights(n)) q += p * p;
    return -std::log(q);
}

}  // namespace mrsim
