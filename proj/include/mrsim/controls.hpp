#pragma once

// Time-dependent single-site controls: constant Rabi drives on the 0<->up and
// 0<->down transitions plus per-site, per-level detuning ramps
//   H_c(t) = sum_i sum_{a in {up,down}} Omega_i^a/2 (|0><a| + h.c.) + delta_i^a(t) |a><a|_i.
// The piecewise-constant PulseGrid variant carries the optimizer's controls.

#include <map>
#include <vector>

#include "mrsim/basis.hpp"
#include "mrsim/sparse.hpp"

namespace mrsim {

// piecewise-linear function of time given by sorted (t, value) knots
struct Ramp {
    std::vector<std::pair<double, double>> knots;

    static Ramp constant(double value) { return Ramp{{{0.0, value}}}; }
    static Ramp linear(double t0, double v0, double t1, double v1) { return Ramp{{{t0, v0}, {t1, v1}}}; }

    double at(double t) const;
    double max_rate() const;  // max |dv/dt| over segments
    std::vector<double> breakpoints() const;
};

enum class Transition { U0 = 0, D0 = 1 };  // 0<->up, 0<->down
enum class Level { Up = 0, Down = 1 };

struct ControlSchedule {
    double duration_us = 0.0;
    std::map<std::pair<int, int>, double> rabi_mhz;         // (site, Transition) -> Omega
    std::map<std::pair<int, int>, Ramp> detuning_ramps;     // (site, Level) -> delta(t)

    void set_rabi(int site, Transition tr, double omega) { rabi_mhz[{site, static_cast<int>(tr)}] = omega; }
    void set_detuning(int site, Level lv, Ramp ramp) { detuning_ramps[{site, static_cast<int>(lv)}] = std::move(ramp); }
    double max_ramp_rate() const;
    std::vector<double> ramp_breakpoints() const;  // within [0, duration], sorted unique
};

SparseOperator build_control_hamiltonian(const ControlSchedule& schedule, double t, int n);

// Detuning part only, as a diagonal vector (the Rabi part is time-independent
// for a ControlSchedule; propagation assembles H(t) = H_static + H_rabi + diag).
Eigen::VectorXd control_detuning_diagonal(const ControlSchedule& schedule, double t, int n);
SparseOperator control_rabi_operator(const ControlSchedule& schedule, int n);

struct ControlChannel {
    int site = -1;  // -1 = uniform across all sites
    int kind = 0;   // 0 = Rabi u0, 1 = Rabi d0, 2 = detuning up, 3 = detuning down
    std::string name() const;
};

struct PulseGrid {
    int n_slices = 0;
    double dt_us = 0.0;
    std::vector<ControlChannel> channels;
    Eigen::MatrixXd values;  // n_channels x n_slices, MHz

    double duration() const { return n_slices * dt_us; }
    static PulseGrid uniform(int n_slices, double dt_us);  // the 4 global channels, zeros
    // sample a ControlSchedule at slice midpoints onto per-site channels
    static PulseGrid from_schedule(const ControlSchedule& schedule, int n_sites, int n_slices);
};

SparseOperator build_microwave_hamiltonian(const PulseGrid& grid, int slice, int n);
// dense channel generator ops for the optimizer
std::vector<Eigen::MatrixXcd> channel_operators_dense(const std::vector<ControlChannel>& channels, int n);

struct CoherenceBudget {
    double tau_eff_us;
    double error_estimate;  // 1 - exp(-T/tau_eff)
    bool exceeds_ten_percent;
};
CoherenceBudget coherence_budget(int n, double lifetime_us, double protocol_time_us);

struct AdiabaticityReport {
    double max_ramp_rate_mhz_per_us;
    double min_interaction_scale_mhz;
    bool pass;  // rate < scale
};
AdiabaticityReport adiabaticity_report(const ControlSchedule& schedule, double min_interaction_scale_mhz);

}  // namespace mrsim
