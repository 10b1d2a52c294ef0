#include "mrsim/grape.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "mrsim/rydberg.hpp"
#include "mrsim/spectra.hpp"

namespace mrsim {

namespace {

struct SliceEig {
    Eigen::VectorXd lam;
    Eigen::MatrixXcd vec;
};

SliceEig slice_eig(const GrapeProblem& p, const std::vector<Eigen::MatrixXcd>& channel_ops,
                   const Eigen::MatrixXd& values, int k) {
    Eigen::MatrixXcd h = p.static_op;
    for (Eigen::Index c = 0; c < values.rows(); ++c) h += values(c, k) * channel_ops[c];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("grape: slice eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXcd step_forward(const SliceEig& e, const Eigen::VectorXcd& psi, double dt) {
    const std::complex<double> mi(0.0, -1.0);
    Eigen::VectorXcd w = e.vec.adjoint() * psi;
    for (Eigen::Index a = 0; a < w.size(); ++a) w[a] *= std::exp(mi * (dt * e.lam[a]));
    return e.vec * w;
}

// G_ab = (e^{-i la dt} - e^{-i lb dt}) / (-i dt (la - lb)), diagonal limit e^{-i la dt}
Eigen::MatrixXcd divided_difference(const Eigen::VectorXd& lam, double dt) {
    const std::complex<double> mi(0.0, -1.0);
    const Eigen::Index d = lam.size();
    Eigen::VectorXcd ph(d);
    for (Eigen::Index a = 0; a < d; ++a) ph[a] = std::exp(mi * (dt * lam[a]));
    Eigen::MatrixXcd g(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            const double diff = lam[a] - lam[b];
            if (std::abs(diff) < 1e-10)
                g(a, b) = std::exp(mi * (dt * 0.5 * (lam[a] + lam[b])));
            else
                g(a, b) = (ph[a] - ph[b]) / (mi * dt * diff);
        }
    return g;
}

void check_problem(const GrapeProblem& p) {
    const Eigen::Index nc = p.grid.values.rows();
    if (static_cast<Eigen::Index>(p.grid.channels.size()) != nc)
        throw DomainError("grape: channel list and value rows disagree");
    if (p.lower.size() != nc || p.upper.size() != nc)
        throw DomainError("grape: bounds must have one entry per channel");
    for (Eigen::Index c = 0; c < nc; ++c)
        if (p.lower[c] > p.upper[c]) throw DomainError("grape: lower bound above upper bound");
    if (std::abs(p.initial.norm() - 1.0) > 1e-9 || std::abs(p.target.norm() - 1.0) > 1e-9)
        throw DomainError("grape: states must be normalized");
    if (p.static_op.rows() != p.initial.dim() || p.target.dim() != p.initial.dim())
        throw DomainError("grape: dimension mismatch");
}

double fidelity_on_values(const GrapeProblem& p, const std::vector<Eigen::MatrixXcd>& ops,
                          const Eigen::MatrixXd& values, Eigen::VectorXcd* final_psi) {
    Eigen::VectorXcd psi = p.initial.amplitudes;
    const double dt = p.grid.dt_us;
    if (dt > 0.0)
        for (int k = 0; k < p.grid.n_slices; ++k) psi = step_forward(slice_eig(p, ops, values, k), psi, dt);
    if (final_psi) *final_psi = psi;
    return std::norm(p.target.amplitudes.dot(psi));
}

Eigen::MatrixXd gradient_on_values(const GrapeProblem& p, const std::vector<Eigen::MatrixXcd>& ops,
                                   const Eigen::MatrixXd& values, double* fidelity_out) {
    const int S = p.grid.n_slices;
    const double dt = p.grid.dt_us;
    const Eigen::Index nc = values.rows();
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(nc, S);
    if (S == 0 || dt == 0.0) {
        if (fidelity_out) *fidelity_out = std::norm(p.target.amplitudes.dot(p.initial.amplitudes));
        return grad;
    }

    // forward pass: keep every psi_k, recompute eigs on the way back
    std::vector<Eigen::VectorXcd> psi(S + 1);
    psi[0] = p.initial.amplitudes;
    for (int k = 0; k < S; ++k) psi[k + 1] = step_forward(slice_eig(p, ops, values, k), psi[k], dt);
    const std::complex<double> ov = p.target.amplitudes.dot(psi[S]);
    if (fidelity_out) *fidelity_out = std::norm(ov);

    const std::complex<double> mi(0.0, -1.0);
    Eigen::VectorXcd chi = p.target.amplitudes;  // (U_S ... U_{k+1})^dag target
    for (int k = S - 1; k >= 0; --k) {
        const SliceEig e = slice_eig(p, ops, values, k);
        const Eigen::MatrixXcd g = divided_difference(e.lam, dt);
        const Eigen::VectorXcd z = e.vec.adjoint() * chi;
        const Eigen::VectorXcd w = e.vec.adjoint() * psi[k];
        for (Eigen::Index c = 0; c < nc; ++c) {
            const Eigen::MatrixXcd m = e.vec.adjoint() * ops[c] * e.vec;
            const std::complex<double> inner = (mi * dt) * (z.adjoint() * g.cwiseProduct(m) * w)(0, 0);
            grad(c, k) = 2.0 * std::real(std::conj(ov) * inner);
        }
        // chi <- U_k^dag chi
        Eigen::VectorXcd zz = z;
        for (Eigen::Index a = 0; a < zz.size(); ++a) zz[a] *= std::exp(-mi * (dt * e.lam[a]));
        chi = e.vec * zz;
    }
    return grad;
}

Eigen::MatrixXd clip_values(const GrapeProblem& p, Eigen::MatrixXd v) {
    for (Eigen::Index c = 0; c < v.rows(); ++c)
        for (Eigen::Index k = 0; k < v.cols(); ++k)
            v(c, k) = std::min(p.upper[c], std::max(p.lower[c], v(c, k)));
    return v;
}

}  // namespace

double grape_fidelity(const GrapeProblem& problem, const PulseGrid& grid, QutritState* final_state) {
    check_problem(problem);
    const auto ops = channel_operators_dense(grid.channels, problem.initial.n_sites);
    Eigen::VectorXcd psi;
    const double f = fidelity_on_values(problem, ops, grid.values, final_state ? &psi : nullptr);
    if (final_state) {
        final_state->n_sites = problem.initial.n_sites;
        final_state->amplitudes = psi;
    }
    return f;
}

Eigen::MatrixXd grape_gradient(const GrapeProblem& problem, const PulseGrid& grid, double* fidelity_out) {
    check_problem(problem);
    const auto ops = channel_operators_dense(grid.channels, problem.initial.n_sites);
    return gradient_on_values(problem, ops, grid.values, fidelity_out);
}

double projected_gradient_norm(const GrapeProblem& problem, const PulseGrid& grid) {
    const Eigen::MatrixXd g = grape_gradient(problem, grid);
    double acc = 0.0;
    for (Eigen::Index c = 0; c < g.rows(); ++c)
        for (Eigen::Index k = 0; k < g.cols(); ++k) {
            const double v = grid.values(c, k);
            const bool blocked_lo = v <= problem.lower[c] + 1e-12 && g(c, k) < 0.0;
            const bool blocked_hi = v >= problem.upper[c] - 1e-12 && g(c, k) > 0.0;
            if (!blocked_lo && !blocked_hi) acc += g(c, k) * g(c, k);
        }
    return std::sqrt(acc);
}

GrapeResult grape_optimize(const GrapeProblem& problem) {
    check_problem(problem);
    const auto ops = channel_operators_dense(problem.grid.channels, problem.initial.n_sites);

    GrapeResult res;
    res.grid = problem.grid;
    res.grid.values = clip_values(problem, problem.grid.values);

    Eigen::MatrixXd x = res.grid.values;
    double f = 0.0;
    Eigen::MatrixXd g = gradient_on_values(problem, ops, x, &f);
    res.fidelity_history.push_back(f);

    struct Pair {
        Eigen::MatrixXd s, y;
        double rho;
    };
    std::deque<Pair> pairs;
    const int memory = 10;
    auto dot = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return (a.array() * b.array()).sum();
    };

    int it = 0;
    for (; it < problem.max_iter && f < problem.target_fidelity; ++it) {
        // ascent direction from the two-loop recursion (maximize f)
        Eigen::MatrixXd d;
        if (pairs.empty()) {
            d = 1e-3 * g;
        } else {
            Eigen::MatrixXd q = g;
            std::vector<double> a(pairs.size());
            for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
                a[i] = pairs[i].rho * dot(pairs[i].s, q);
                q -= a[i] * pairs[i].y;
            }
            const Pair& last = pairs.back();
            q *= dot(last.s, last.y) / dot(last.y, last.y);
            for (size_t i = 0; i < pairs.size(); ++i) {
                const double b = pairs[i].rho * dot(pairs[i].y, q);
                q += (a[i] - b) * pairs[i].s;
            }
            d = q;
        }

        double step = 1.0;
        bool accepted = false;
        bool first_trial_hit = false;
        Eigen::MatrixXd xn, gn;
        double fn = f;
        for (int ls = 0; ls < 50; ++ls) {
            xn = clip_values(problem, x + step * d);
            const double trial = fidelity_on_values(problem, ops, xn, nullptr);
            if (!std::isfinite(trial)) throw NumericalError("grape: non-finite fidelity in line search");
            const double gain = dot(g, xn - x);
            if (trial >= f + 1e-4 * gain || trial > f) {
                fn = trial;
                accepted = true;
                first_trial_hit = ls == 0;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || fn <= f) break;  // stalled; keep the best-so-far iterate
        if (first_trial_hit) {
            // the unit step was not even a stretch; grow it while fidelity keeps
            // improving so badly scaled directions cannot creep (clipping makes
            // this terminate once the bounds saturate)
            for (int ex = 0; ex < 40; ++ex) {
                const Eigen::MatrixXd xe = clip_values(problem, x + (2.0 * step) * d);
                const double trial = fidelity_on_values(problem, ops, xe, nullptr);
                if (!(trial > fn)) break;
                step *= 2.0;
                xn = xe;
                fn = trial;
            }
        }

        gn = gradient_on_values(problem, ops, xn, nullptr);
        Eigen::MatrixXd s = xn - x, y = gn - g;
        const double sy = dot(s, y), ss = dot(s, s);
        // curvature pairs in minimize-(-f) convention: flip both signs, sy invariant
        if (-sy > 1e-12 * ss) {
            pairs.push_back({std::move(s), -y, -1.0 / sy});
            if (static_cast<int>(pairs.size()) > memory) pairs.pop_front();
        }
        x = std::move(xn);
        f = fn;
        g = std::move(gn);
        res.fidelity_history.push_back(f);
    }

    res.grid.values = x;
    res.iterations = it;
    Eigen::VectorXcd psi;
    res.final_fidelity = fidelity_on_values(problem, ops, x, &psi);
    res.final_state.n_sites = problem.initial.n_sites;
    res.final_state.amplitudes = psi;
    res.converged = res.final_fidelity >= problem.target_fidelity;
    return res;
}

std::pair<QutritState, GrapeResult> prepare_ground_state(const InteractionTable& table,
                                                         const Geometry& geometry,
                                                         double duration_us, int n_slices,
                                                         const PrepareOptions& opts) {
    const int n = geometry.n_sites;
    const SparseOperator h = build_rydberg_hamiltonian(table, geometry);
    if (h.dim() > opts.dense_cap_dim)
        throw ResourceError("prepare_ground_state: dimension beyond the dense pulse-optimization cap");

    GrapeProblem p;
    p.static_op = h.to_dense();
    p.initial = basis_state(BasisConfig(n, SiteLabel::Flat));
    if (opts.target) {
        p.target = *opts.target;
    } else if (h.inf_norm() == 0.0) {
        // zero Hamiltonian: every state is a ground state; the one already in
        // hand is the canonical pick
        p.target = p.initial;
    } else {
        p.target = dense_spectrum(h, opts.dense_cap_dim).ground_vector;
    }
    p.max_iter = opts.max_iter;
    p.target_fidelity = opts.target_fidelity;

    p.grid = PulseGrid::uniform(n_slices, n_slices > 0 ? duration_us / n_slices : 0.0);
    p.lower.resize(4);
    p.upper.resize(4);
    p.lower << opts.rabi_lo_mhz, opts.rabi_lo_mhz, opts.det_lo_mhz, opts.det_lo_mhz;
    p.upper << opts.rabi_hi_mhz, opts.rabi_hi_mhz, opts.det_hi_mhz, opts.det_hi_mhz;

    // seeded start: Rabi channels near 0.5 MHz, detunings near 0 (mt19937 is
    // bit-reproducible across platforms)
    std::mt19937 rng(opts.seed);
    auto unit = [&rng]() { return 2.0 * (rng() / 4294967296.0) - 1.0; };
    for (int k = 0; k < n_slices; ++k) {
        p.grid.values(0, k) = 0.5 + 0.1 * unit();
        p.grid.values(1, k) = 0.5 + 0.1 * unit();
        p.grid.values(2, k) = 0.1 * unit();
        p.grid.values(3, k) = 0.1 * unit();
    }

    GrapeResult res = grape_optimize(p);
    return {res.final_state, res};
}

}  // namespace mrsim
