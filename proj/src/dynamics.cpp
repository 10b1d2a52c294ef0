#include "mrsim/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mrsim/motzkin.hpp"
#include "mrsim/rydberg.hpp"

namespace mrsim {

Eigen::VectorXcd krylov_expm_apply(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply_h,
    const Eigen::VectorXcd& v, double dt_scaled, int krylov_dim, double tol) {
    const double vnorm = v.norm();
    if (vnorm == 0.0 || dt_scaled == 0.0) return v;
    const std::int64_t dim = v.size();
    const int m_cap = static_cast<int>(std::min<std::int64_t>(std::max(krylov_dim, 2), dim));
    const std::complex<double> mi(0.0, -1.0);

    Eigen::MatrixXcd basis(dim, m_cap);
    Eigen::VectorXd alpha(m_cap), beta(m_cap);
    basis.col(0) = v / vnorm;
    Eigen::VectorXcd w(dim);
    Eigen::VectorXcd y;
    int m = 0;

    for (int j = 0; j < m_cap; ++j) {
        apply_h(basis.col(j), w);
        alpha[j] = basis.col(j).dot(w).real();
        w -= alpha[j] * basis.col(j);
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k <= j; ++k) w -= basis.col(k).dot(w) * basis.col(k);
        m = j + 1;
        const double b = w.norm();

        // Ritz exponential on the current subspace; y = exp(-i dt T) e1
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            tri(k, k) = alpha[k];
            if (k + 1 < m) tri(k, k + 1) = tri(k + 1, k) = beta[k];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
        const Eigen::VectorXd& lam = small.eigenvalues();
        const Eigen::MatrixXd& u = small.eigenvectors();
        Eigen::VectorXcd phases(m);
        for (int k = 0; k < m; ++k) phases[k] = std::exp(mi * (dt_scaled * lam[k]));
        y = u.cast<std::complex<double>>() * (phases.cwiseProduct(u.row(0).transpose().cast<std::complex<double>>()));

        if (b < 1e-14) break;                          // happy breakdown: subspace is invariant
        const double err = b * std::abs(y[m - 1]) * std::abs(dt_scaled);
        if (err < tol) break;
        if (j + 1 < m_cap) {
            beta[j] = b;
            basis.col(j + 1) = w / b;
        }
    }
    return vnorm * (basis.leftCols(m) * y);
}

TrajectoryRecord propagate(const QutritState& initial, const SparseOperator& static_op,
                           const ControlSchedule& schedule, const PropagateOptions& opts) {
    const int n = initial.n_sites;
    if (static_op.dim() != initial.dim()) throw DomainError("propagate: operator/state dimension mismatch");
    if (std::abs(initial.norm() - 1.0) > 1e-9) throw DomainError("propagate: initial state not normalized");
    if (opts.fidelity_target && opts.fidelity_target->dim() != initial.dim())
        throw DomainError("propagate: fidelity target dimension mismatch");
    if (opts.dt_max_us <= 0.0) throw DomainError("propagate: dt_max must be positive");

    const double T = schedule.duration_us;
    const int n_out = std::max(1, opts.n_output);
    const double scale = opts.phase_per_mhz_us;

    const SparseOperator h_const = SparseOperator::sum(static_op, control_rabi_operator(schedule, n));
    const double h_const_norm = h_const.inf_norm();

    std::vector<double> out_times(n_out + 1);
    for (int k = 0; k <= n_out; ++k) out_times[k] = T * k / n_out;

    std::vector<double> bounds = out_times;
    for (double b : schedule.ramp_breakpoints())
        if (b > 1e-12 && b < T - 1e-12) bounds.push_back(b);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [](double a, double c) { return std::abs(a - c) < 1e-12; }),
                 bounds.end());

    TrajectoryRecord rec;
    rec.times_us = out_times;
    rec.tracked_configs = opts.tracked_configs;
    rec.populations.resize(static_cast<Eigen::Index>(rec.tracked_configs.size()), n_out + 1);
    if (opts.fidelity_target) rec.fidelity_series.assign(n_out + 1, 0.0);

    Eigen::VectorXcd psi = initial.amplitudes;
    auto record_at = [&](int out_idx) {
        for (size_t c = 0; c < rec.tracked_configs.size(); ++c)
            rec.populations(static_cast<Eigen::Index>(c), out_idx) = std::norm(psi[rec.tracked_configs[c]]);
        if (opts.fidelity_target)
            rec.fidelity_series[out_idx] = std::norm(opts.fidelity_target->amplitudes.dot(psi));
    };
    record_at(0);

    size_t out_next = 1;
    for (size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double t0 = bounds[seg], t1 = bounds[seg + 1];
        double dmax = 0.0;
        for (double te : {t0, t1}) {
            const Eigen::VectorXd d = control_detuning_diagonal(schedule, te, n);
            if (d.size() > 0) dmax = std::max(dmax, d.cwiseAbs().maxCoeff());
        }
        const double hnorm = (h_const_norm + dmax) * scale;
        const double dt_eff = hnorm > 0.0 ? std::min(opts.dt_max_us, 0.5 / hnorm) : opts.dt_max_us;
        if (dt_eff < 1e-12) throw NumericalError("propagate: step size underflow");
        const int n_steps = std::max(1, static_cast<int>(std::ceil((t1 - t0) / dt_eff - 1e-12)));
        const double dt = (t1 - t0) / n_steps;

        for (int s = 0; s < n_steps; ++s) {
            const double tm = t0 + (s + 0.5) * dt;
            const Eigen::VectorXd diag = control_detuning_diagonal(schedule, tm, n);
            auto apply_h = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
                h_const.apply(x, y);
                y.array() += x.array() * diag.array().cast<std::complex<double>>();
            };
            psi = krylov_expm_apply(apply_h, psi, scale * dt, opts.krylov_dim, opts.krylov_tol);
            ++rec.total_steps;
        }

        const double norm_now = psi.norm();
        if (!std::isfinite(norm_now)) {
            std::ostringstream msg;
            msg << "propagate: non-finite amplitudes at t = " << t1 << " us (step " << rec.total_steps << ")";
            throw NumericalError(msg.str());
        }
        while (out_next < out_times.size() && out_times[out_next] <= t1 + 1e-9)
            record_at(static_cast<int>(out_next++));
    }
    while (out_next < out_times.size()) record_at(static_cast<int>(out_next++));

    rec.final_state.n_sites = n;
    rec.final_state.amplitudes = psi;
    if (opts.fidelity_target) {
        rec.final_fidelity = rec.fidelity_series.back();
        rec.peak_fidelity = *std::max_element(rec.fidelity_series.begin(), rec.fidelity_series.end());
    }
    return rec;
}

ProtocolResult run_adiabatic_protocol(const InteractionTable& table, const Geometry& geometry,
                                      const ControlSchedule& schedule, const QutritState& initial,
                                      const PropagateOptions& opts, const RydbergOptions& ryd_opts) {
    const int n = initial.n_sites;
    if (n < 2) throw DomainError("run_adiabatic_protocol: requires n >= 2 (no pair interactions below that)");
    if (geometry.n_sites != n) throw DomainError("run_adiabatic_protocol: geometry/state size mismatch");

    const SparseOperator h = build_rydberg_hamiltonian(table, geometry, ryd_opts);
    const QutritState target = build_motzkin_state(n);

    PropagateOptions local = opts;
    local.fidelity_target = &target;
    if (local.tracked_configs.empty()) {
        // all path and mirrored-path configs, plus wherever the initial state peaks
        for (std::int64_t idx = 0; idx < pow3(n); ++idx)
            if (classify(decode(idx, n)) != PathClass::Other) local.tracked_configs.push_back(idx);
        Eigen::Index peak = 0;
        initial.amplitudes.cwiseAbs().maxCoeff(&peak);
        if (std::find(local.tracked_configs.begin(), local.tracked_configs.end(),
                      static_cast<std::int64_t>(peak)) == local.tracked_configs.end())
            local.tracked_configs.push_back(peak);
    }

    ProtocolResult res;
    res.trajectory = propagate(initial, h, schedule, local);
    res.final_fidelity = res.trajectory.final_fidelity;
    res.peak_fidelity = res.trajectory.peak_fidelity;
    return res;
}

}  // namespace mrsim
