#include "mrsim/rydberg.hpp"

#include <cmath>

namespace mrsim {

namespace {

double angular_factor(double theta_deg) {
    const double c = std::cos(theta_deg * M_PI / 180.0);
    return 3.0 * c * c - 1.0;
}

}  // namespace

double pair_dipole_coupling(const InteractionTable& table, const Geometry& geom, int i, int j, ExchangeChannel ch) {
    if (i == j) throw DomainError("pair_dipole_coupling: i != j required");
    const double r = geom.pair_distance(i, j);
    const double r3 = r * r * r;
    return kKappaDip * table.c3(ch) * angular_factor(geom.pair_angle_deg(i, j)) / r3 * 1e3;
}

double pair_vdw_shift(const InteractionTable& table, const Geometry& geom, int i, int j, VdwChannel ch) {
    if (i == j) throw DomainError("pair_vdw_shift: i != j required");
    const double r = geom.pair_distance(i, j);
    const double r6 = std::pow(r, 6);
    return kKappaVdw * table.c6(ch) / r6 * 1e3;
}

ForsterCouplings pair_forster(const InteractionTable& table, const Geometry& geom, int i, int j) {
    if (!table.forster_c6_ghz2_um6 || !table.forster_detuning_mhz) return {0.0, 0.0, false};
    const double delta = *table.forster_detuning_mhz;
    if (delta == 0.0) throw NumericalError("pair_forster: zero Foerster detuning");
    const double th = geom.pair_angle_deg(i, j) * M_PI / 180.0;
    const double s2c2 = std::sin(th) * std::sin(th) * std::cos(th) * std::cos(th);
    const double r6 = std::pow(geom.pair_distance(i, j), 6);
    // C6F is GHz^2 um^6; 1e6 converts GHz^2 -> MHz^2 before dividing by Delta[MHz].
    const double v = 9.0 * s2c2 * (1e6 * (*table.forster_c6_ghz2_um6) / r6) / delta;
    return {v, v, true};
}

SparseOperator build_rydberg_hamiltonian(const InteractionTable& table, const Geometry& geom,
                                         const RydbergOptions& opts) {
    if (geom.n_sites < 2) throw DomainError("build_rydberg_hamiltonian: n_sites >= 2 required");
    table.validate();
    geom.validate();
    const int n = geom.n_sites;
    const std::int64_t dim = pow3(n);
    constexpr int U = 0, F = 1, D = 2;

    std::vector<Triplet> trips;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (opts.cutoff_bonds && (j - i) > *opts.cutoff_bonds) continue;
            const double ju0 = pair_dipole_coupling(table, geom, i, j, ExchangeChannel::U0);
            const double jd0 = pair_dipole_coupling(table, geom, i, j, ExchangeChannel::D0);
            const double j00 = pair_dipole_coupling(table, geom, i, j, ExchangeChannel::OO);
            const double vu0 = pair_vdw_shift(table, geom, i, j, VdwChannel::U0);
            const double vd0 = pair_vdw_shift(table, geom, i, j, VdwChannel::D0);
            const double vuu = pair_vdw_shift(table, geom, i, j, VdwChannel::UU);
            const double vdd = pair_vdw_shift(table, geom, i, j, VdwChannel::DD);
            const double v00 = pair_vdw_shift(table, geom, i, j, VdwChannel::OO);
            const ForsterCouplings vf = pair_forster(table, geom, i, j);

            const std::int64_t pi = pow3(n - 1 - i), pj = pow3(n - 1 - j);
            for (std::int64_t idx = 0; idx < dim; ++idx) {
                const int si = static_cast<int>((idx / pi) % 3);
                const int sj = static_cast<int>((idx / pj) % 3);
                auto moved = [&](int ti, int tj) { return idx + (ti - si) * pi + (tj - sj) * pj; };

                // diagonal vdW shifts (mixed channels on both orderings)
                if (si == U && sj == U) diag[idx] += vuu;
                if (si == D && sj == D) diag[idx] += vdd;
                if (si == F && sj == F) diag[idx] += v00;
                if ((si == U && sj == F) || (si == F && sj == U)) diag[idx] += vu0;
                if ((si == D && sj == F) || (si == F && sj == D)) diag[idx] += vd0;
                if (vf.present && ((si == U && sj == D) || (si == D && sj == U))) diag[idx] += vf.diag_mhz;

                // exchange: one ordering seeds entry + conjugate, so no double count
                if (si == U && sj == F) {
                    trips.push_back({moved(F, U), idx, ju0});
                    trips.push_back({idx, moved(F, U), ju0});
                }
                if (si == D && sj == F) {
                    trips.push_back({moved(F, D), idx, jd0});
                    trips.push_back({idx, moved(F, D), jd0});
                }
                if (si == F && sj == F) {
                    trips.push_back({moved(U, D), idx, j00});
                    trips.push_back({idx, moved(U, D), j00});
                    trips.push_back({moved(D, U), idx, j00});
                    trips.push_back({idx, moved(D, U), j00});
                }
                if (vf.present && si == U && sj == D) {
                    trips.push_back({moved(D, U), idx, vf.ofd_mhz});
                    trips.push_back({idx, moved(D, U), vf.ofd_mhz});
                }
            }
        }
    }
    for (std::int64_t idx = 0; idx < dim; ++idx)
        if (diag[idx] != 0.0) trips.push_back({idx, idx, diag[idx]});
    return SparseOperator::from_triplets(dim, std::move(trips));
}

MotzkinComparison compare_to_motzkin(const InteractionTable& table, const Geometry& geom) {
    if (geom.n_sites != 2) throw DomainError("compare_to_motzkin: two-site geometry required");
    MotzkinComparison cmp;
    cmp.rydberg_block = build_rydberg_hamiltonian(table, geom).to_dense();
    cmp.motzkin_block = 0.5 * two_site_pi();

    constexpr double kZero = 1e-12;
    constexpr int kUD = 2, kFF = 4, kDU = 6;  // two-site M=0 sector indices
    for (int r : {kUD, kFF, kDU})
        for (int c : {kUD, kFF, kDU})
            if (std::abs(cmp.rydberg_block(r, c)) > kZero && std::abs(cmp.motzkin_block(r, c)) <= kZero)
                cmp.extra_entries.emplace_back(r, c);
    for (int d = 0; d < 9; ++d) {
        if (d == kUD || d == kFF || d == kDU) continue;  // M=0 diagonal handled above
        const double diff = std::real(cmp.rydberg_block(d, d) - cmp.motzkin_block(d, d));
        if (std::abs(diff) > kZero) cmp.diagonal_mismatches.emplace_back(d, diff);
    }
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            if (std::abs(cmp.motzkin_block(r, c)) > kZero && std::abs(cmp.rydberg_block(r, c)) <= kZero)
                cmp.missing_entries.emplace_back(r, c);
    return cmp;
}

FineTuneReport check_fine_tuning(const InteractionTable& table, const Geometry& geom, double tolerance) {
    Geometry pair = geom;
    if (pair.n_sites < 2) pair.n_sites = 2;
    const double j00 = pair_dipole_coupling(table, pair, 0, 1, ExchangeChannel::OO);
    const double ju0 = pair_dipole_coupling(table, pair, 0, 1, ExchangeChannel::U0);
    const double jd0 = pair_dipole_coupling(table, pair, 0, 1, ExchangeChannel::D0);
    const double v00 = pair_vdw_shift(table, pair, 0, 1, VdwChannel::OO);
    const double vu0 = pair_vdw_shift(table, pair, 0, 1, VdwChannel::U0);
    const double vd0 = pair_vdw_shift(table, pair, 0, 1, VdwChannel::D0);
    const ForsterCouplings vf = pair_forster(table, pair, 0, 1);

    auto rel = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale == 0.0) return 0.0;
        return std::abs(a - b) / scale;
    };
    FineTuneReport rep;
    rep.tolerance = tolerance;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        const double r = rel(lhs, rhs);
        rep.conditions.push_back({name, lhs, rhs, r, r < tolerance});
    };
    add("J00 = -V00", j00, -v00);
    add("V00 = Vdiag", v00, vf.diag_mhz);
    add("Vdiag = Vofd", vf.diag_mhz, vf.ofd_mhz);
    add("Jd0 = Vd0", jd0, vd0);
    add("Ju0 = Vu0", ju0, vu0);
    rep.all_pass = true;
    for (const auto& c : rep.conditions) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

}  // namespace mrsim
