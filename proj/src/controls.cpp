#include "mrsim/controls.hpp"

#include <algorithm>
#include <cmath>

namespace mrsim {

double Ramp::at(double t) const {
    if (knots.empty()) return 0.0;
    if (t <= knots.front().first) return knots.front().second;
    if (t >= knots.back().first) return knots.back().second;
    for (size_t k = 1; k < knots.size(); ++k) {
        if (t <= knots[k].first) {
            const auto& [t0, v0] = knots[k - 1];
            const auto& [t1, v1] = knots[k];
            if (t1 == t0) return v1;
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    return knots.back().second;
}

double Ramp::max_rate() const {
    double rate = 0.0;
    for (size_t k = 1; k < knots.size(); ++k) {
        const double dt = knots[k].first - knots[k - 1].first;
        if (dt > 0.0) rate = std::max(rate, std::abs(knots[k].second - knots[k - 1].second) / dt);
    }
    return rate;
}

std::vector<double> Ramp::breakpoints() const {
    std::vector<double> b;
    for (const auto& [t, v] : knots) b.push_back(t);
    return b;
}

double ControlSchedule::max_ramp_rate() const {
    double rate = 0.0;
    for (const auto& [key, ramp] : detuning_ramps) rate = std::max(rate, ramp.max_rate());
    return rate;
}

std::vector<double> ControlSchedule::ramp_breakpoints() const {
    std::vector<double> b{0.0, duration_us};
    for (const auto& [key, ramp] : detuning_ramps)
        for (double t : ramp.breakpoints())
            if (t > 0.0 && t < duration_us) b.push_back(t);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double a, double c) { return std::abs(a - c) < 1e-12; }), b.end());
    return b;
}

Eigen::VectorXd control_detuning_diagonal(const ControlSchedule& schedule, double t, int n) {
    const std::int64_t dim = pow3(n);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    for (const auto& [key, ramp] : schedule.detuning_ramps) {
        const auto& [site, level] = key;
        if (site < 0 || site >= n) throw DomainError("control schedule: site out of range");
        const double value = ramp.at(t);
        if (value == 0.0) continue;
        const std::int64_t place = pow3(n - 1 - site);
        const int target = (level == static_cast<int>(Level::Up)) ? 0 : 2;
        for (std::int64_t idx = 0; idx < dim; ++idx)
            if (static_cast<int>((idx / place) % 3) == target) diag[idx] += value;
    }
    return diag;
}

SparseOperator control_rabi_operator(const ControlSchedule& schedule, int n) {
    const std::int64_t dim = pow3(n);
    std::vector<Triplet> trips;
    for (const auto& [key, omega] : schedule.rabi_mhz) {
        const auto& [site, tr] = key;
        if (site < 0 || site >= n) throw DomainError("control schedule: site out of range");
        if (omega == 0.0) continue;
        const std::int64_t place = pow3(n - 1 - site);
        const int other = (tr == static_cast<int>(Transition::U0)) ? 0 : 2;  // level coupled to Flat
        for (std::int64_t idx = 0; idx < dim; ++idx) {
            const int s = static_cast<int>((idx / place) % 3);
            if (s == other) {
                const std::int64_t flat = idx + (1 - other) * place;
                trips.push_back({flat, idx, omega / 2.0});
                trips.push_back({idx, flat, omega / 2.0});
            }
        }
    }
    return SparseOperator::from_triplets(dim, std::move(trips));
}

SparseOperator build_control_hamiltonian(const ControlSchedule& schedule, double t, int n) {
    if (t < 0.0 || t > schedule.duration_us + 1e-12)
        throw DomainError("build_control_hamiltonian: t outside schedule window");
    const SparseOperator rabi = control_rabi_operator(schedule, n);
    const SparseOperator det = SparseOperator::from_diagonal(control_detuning_diagonal(schedule, t, n));
    return SparseOperator::sum(rabi, det);
}

std::string ControlChannel::name() const {
    static const char* kinds[] = {"omega_u0", "omega_d0", "delta_up", "delta_down"};
    std::string base = kinds[kind];
    if (site < 0) return base + "[all]";
    return base + "[site" + std::to_string(site) + "]";
}

PulseGrid PulseGrid::uniform(int n_slices, double dt_us) {
    PulseGrid g;
    g.n_slices = n_slices;
    g.dt_us = dt_us;
    g.channels = {{-1, 0}, {-1, 1}, {-1, 2}, {-1, 3}};
    g.values = Eigen::MatrixXd::Zero(4, n_slices);
    return g;
}

PulseGrid PulseGrid::from_schedule(const ControlSchedule& schedule, int n_sites, int n_slices) {
    PulseGrid g;
    g.n_slices = n_slices;
    g.dt_us = schedule.duration_us / n_slices;
    for (int site = 0; site < n_sites; ++site)
        for (int kind = 0; kind < 4; ++kind) g.channels.push_back({site, kind});
    g.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.channels.size()), n_slices);
    for (size_t c = 0; c < g.channels.size(); ++c) {
        const ControlChannel& ch = g.channels[c];
        for (int s = 0; s < n_slices; ++s) {
            const double tmid = (s + 0.5) * g.dt_us;
            double v = 0.0;
            if (ch.kind <= 1) {
                const auto it = schedule.rabi_mhz.find({ch.site, ch.kind});
                v = it == schedule.rabi_mhz.end() ? 0.0 : it->second;
            } else {
                const auto it = schedule.detuning_ramps.find({ch.site, ch.kind - 2});
                v = it == schedule.detuning_ramps.end() ? 0.0 : it->second.at(tmid);
            }
            g.values(static_cast<Eigen::Index>(c), s) = v;
        }
    }
    return g;
}

namespace {

void add_channel_triplets(const ControlChannel& ch, double value, int n, std::vector<Triplet>& trips) {
    if (value == 0.0) return;
    const std::int64_t dim = pow3(n);
    const int site_lo = ch.site < 0 ? 0 : ch.site;
    const int site_hi = ch.site < 0 ? n - 1 : ch.site;
    for (int site = site_lo; site <= site_hi; ++site) {
        const std::int64_t place = pow3(n - 1 - site);
        if (ch.kind <= 1) {
            const int other = ch.kind == 0 ? 0 : 2;
            for (std::int64_t idx = 0; idx < dim; ++idx) {
                const int s = static_cast<int>((idx / place) % 3);
                if (s == other) {
                    const std::int64_t flat = idx + (1 - other) * place;
                    trips.push_back({flat, idx, value / 2.0});
                    trips.push_back({idx, flat, value / 2.0});
                }
            }
        } else {
            const int target = ch.kind == 2 ? 0 : 2;
            for (std::int64_t idx = 0; idx < dim; ++idx)
                if (static_cast<int>((idx / place) % 3) == target) trips.push_back({idx, idx, value});
        }
    }
}

}  // namespace

SparseOperator build_microwave_hamiltonian(const PulseGrid& grid, int slice, int n) {
    if (slice < 0 || slice >= grid.n_slices) throw DomainError("build_microwave_hamiltonian: slice out of range");
    std::vector<Triplet> trips;
    for (size_t c = 0; c < grid.channels.size(); ++c)
        add_channel_triplets(grid.channels[c], grid.values(static_cast<Eigen::Index>(c), slice), n, trips);
    return SparseOperator::from_triplets(pow3(n), std::move(trips));
}

std::vector<Eigen::MatrixXcd> channel_operators_dense(const std::vector<ControlChannel>& channels, int n) {
    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(channels.size());
    for (const ControlChannel& ch : channels) {
        std::vector<Triplet> trips;
        add_channel_triplets(ch, 1.0, n, trips);
        ops.push_back(SparseOperator::from_triplets(pow3(n), std::move(trips)).to_dense());
    }
    return ops;
}

CoherenceBudget coherence_budget(int n, double lifetime_us, double protocol_time_us) {
    if (n < 1 || lifetime_us <= 0.0 || protocol_time_us < 0.0)
        throw DomainError("coherence_budget: positive inputs required");
    CoherenceBudget b;
    b.tau_eff_us = lifetime_us / n;
    b.error_estimate = 1.0 - std::exp(-protocol_time_us / b.tau_eff_us);
    b.exceeds_ten_percent = b.error_estimate > 0.10;
    return b;
}

AdiabaticityReport adiabaticity_report(const ControlSchedule& schedule, double min_interaction_scale_mhz) {
    AdiabaticityReport r;
    r.max_ramp_rate_mhz_per_us = schedule.max_ramp_rate();
    r.min_interaction_scale_mhz = min_interaction_scale_mhz;
    r.pass = r.max_ramp_rate_mhz_per_us < min_interaction_scale_mhz;
    return r;
}

}  // namespace mrsim
