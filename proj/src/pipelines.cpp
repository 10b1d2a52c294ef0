#include "mrsim/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <sstream>

#include "mrsim/entanglement.hpp"
#include "mrsim/io.hpp"
#include "mrsim/motzkin.hpp"
#include "mrsim/rydberg.hpp"
#include "mrsim/spectra.hpp"

namespace mrsim {

namespace {

RydbergOptions ryd_options(const RunConfig& cfg) {
    RydbergOptions o;
    o.cutoff_bonds = cfg.cutoff_bonds;
    return o;
}

std::string n_suffix(int n, bool multi) { return multi ? "_N" + std::to_string(n) : ""; }

void write_resolved_config(const RunConfig& cfg) {
    ensure_directory(cfg.output_dir);
    write_text_file(cfg.output_dir + "/config.resolved", resolved_json(cfg).dump(2) + "\n");
}

class RunTimer {
  public:
    explicit RunTimer(const RunConfig& cfg) : cfg_(cfg), start_(std::chrono::steady_clock::now()) {
        const std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        started_at_ = buf;
    }
    void finish(const nlohmann::json& summary) const {
        write_text_file(cfg_.output_dir + "/summary.json", summary.dump(2) + "\n");
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        nlohmann::json meta;
        meta["started_at_utc"] = started_at_;
        meta["wall_seconds"] = wall;
        write_text_file(cfg_.output_dir + "/run_meta.json", meta.dump(2) + "\n");
    }

  private:
    const RunConfig& cfg_;
    std::chrono::steady_clock::time_point start_;
    std::string started_at_;
};

QutritState solver_ground_state(const RunConfig& cfg, const SparseOperator& h) {
    if (h.dim() <= cfg.solver.dense_cap_dim) return dense_spectrum(h, cfg.solver.dense_cap_dim).ground_vector;
    IterativeOptions opts;
    opts.tol = cfg.solver.tol;
    opts.max_restarts = cfg.solver.max_restarts;
    opts.seed = cfg.seed;
    return iterative_ground_state(h, opts).second;
}

nlohmann::json finetune_json(const FineTuneReport& rep) {
    nlohmann::json out;
    out["tolerance"] = rep.tolerance;
    out["all_pass"] = rep.all_pass;
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : rep.conditions)
        conds.push_back({{"name", c.name},
                         {"lhs_mhz", c.lhs_mhz},
                         {"rhs_mhz", c.rhs_mhz},
                         {"residual", c.residual},
                         {"pass", c.pass}});
    out["conditions"] = conds;
    return out;
}

std::string finetune_csv(const FineTuneReport& rep) {
    std::ostringstream out;
    out << "condition,lhs_mhz,rhs_mhz,residual,pass\n";
    for (const auto& c : rep.conditions)
        out << c.name << "," << fmt12(c.lhs_mhz) << "," << fmt12(c.rhs_mhz) << ","
            << fmt12(c.residual) << "," << (c.pass ? 1 : 0) << "\n";
    return out.str();
}

std::string pulses_csv(const PulseGrid& grid) {
    std::ostringstream out;
    out << "slice,t_mid_us";
    for (const auto& ch : grid.channels) out << "," << ch.name();
    out << "\n";
    for (int k = 0; k < grid.n_slices; ++k) {
        out << k << "," << fmt12((k + 0.5) * grid.dt_us);
        for (Eigen::Index c = 0; c < grid.values.rows(); ++c) out << "," << fmt12(grid.values(c, k));
        out << "\n";
    }
    return out.str();
}

std::string state_csv(const QutritState& state) {
    std::ostringstream out;
    out << "index,config,re,im\n";
    for (std::int64_t i = 0; i < state.dim(); ++i)
        out << i << "," << config_string(decode(i, state.n_sites)) << ","
            << fmt12(state.amplitudes[i].real()) << "," << fmt12(state.amplitudes[i].imag()) << "\n";
    return out.str();
}

std::string trajectory_csv(const TrajectoryRecord& rec, int n) {
    std::ostringstream out;
    out << "time_us";
    if (!rec.fidelity_series.empty()) out << ",fidelity";
    for (std::int64_t idx : rec.tracked_configs) out << ",pop_" << config_string(decode(idx, n));
    out << "\n";
    for (size_t t = 0; t < rec.times_us.size(); ++t) {
        out << fmt12(rec.times_us[t]);
        if (!rec.fidelity_series.empty()) out << "," << fmt12(rec.fidelity_series[t]);
        for (Eigen::Index c = 0; c < rec.populations.rows(); ++c)
            out << "," << fmt12(rec.populations(c, static_cast<Eigen::Index>(t)));
        out << "\n";
    }
    return out.str();
}

std::string rdm_csv(const Eigen::MatrixXcd& rdm, int n_a) {
    std::ostringstream out;
    out << "row_config,col_config,abs_value\n";
    for (Eigen::Index r = 0; r < rdm.rows(); ++r)
        for (Eigen::Index c = 0; c < rdm.cols(); ++c)
            out << config_string(decode(r, n_a)) << "," << config_string(decode(c, n_a)) << ","
                << fmt12(std::abs(rdm(r, c))) << "\n";
    return out.str();
}

}  // namespace

FlattenResult flatten_detunings(const InteractionTable& table, const Geometry& geometry) {
    const int n = geometry.n_sites;
    const SparseOperator h = build_rydberg_hamiltonian(table, geometry);
    const auto paths = enumerate_paths(n);

    // variables: Up detunings on sites 0..n-2, Down detunings on sites 1..n-1,
    // plus one free offset column
    std::vector<std::pair<int, int>> vars;
    for (int i = 0; i < n - 1; ++i) vars.push_back({i, static_cast<int>(Level::Up)});
    for (int i = 1; i < n; ++i) vars.push_back({i, static_cast<int>(Level::Down)});

    const int rows = static_cast<int>(paths.size());
    const int nv = static_cast<int>(vars.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, nv + 1);
    Eigen::VectorXd b(rows);
    for (int r = 0; r < rows; ++r) {
        const BasisConfig& cfg = paths[r].steps;
        const std::int64_t idx = encode(cfg);
        b[r] = -h.entry(idx, idx).real();
        for (int v = 0; v < nv; ++v) {
            const auto [site, lv] = vars[v];
            const SiteLabel want = lv == static_cast<int>(Level::Up) ? SiteLabel::Up : SiteLabel::Down;
            if (cfg[site] == want) a(r, v) = 1.0;
        }
        a(r, nv) = -1.0;  // common offset
    }

    const Eigen::VectorXd x = a.completeOrthogonalDecomposition().solve(b);
    FlattenResult res;
    for (int v = 0; v < nv; ++v) res.detunings[vars[v]] = x[v];
    res.residual_mhz = (a * x - b).norm();
    return res;
}

ControlSchedule build_protocol_schedule(const RunConfig& cfg, int n) {
    const double T = cfg.protocol.duration_us;
    ControlSchedule s;
    s.duration_us = T;
    s.set_rabi(0, Transition::D0, cfg.protocol.rabi_mhz);
    s.set_rabi(n - 1, Transition::U0, cfg.protocol.rabi_mhz);
    s.set_detuning(0, Level::Down, Ramp::linear(0.0, 0.0, T, cfg.protocol.delta_max_mhz));
    s.set_detuning(n - 1, Level::Up, Ramp::linear(0.0, 0.0, T, cfg.protocol.delta_max_mhz));
    if (cfg.protocol.compensation == "vdw-flatten") {
        const FlattenResult fl = flatten_detunings(cfg.table, cfg.geometry_for(n));
        for (const auto& [key, value] : fl.detunings)
            if (std::abs(value) > 1e-12)
                s.set_detuning(key.first, static_cast<Level>(key.second), Ramp::linear(0.0, 0.0, T, value));
    }
    return s;
}

InitialStateResult protocol_initial_state(const RunConfig& cfg, int n) {
    std::string kind = cfg.protocol.initial_state;
    if (kind == "auto") kind = n <= 3 ? "grape" : "ground-state";

    InitialStateResult res;
    res.kind = kind;
    if (kind == "grape") {
        PrepareOptions opts;
        opts.max_iter = cfg.grape.max_iter;
        opts.target_fidelity = cfg.grape.target_fidelity;
        opts.rabi_lo_mhz = cfg.grape.rabi_bounds_mhz[0];
        opts.rabi_hi_mhz = cfg.grape.rabi_bounds_mhz[1];
        opts.det_lo_mhz = cfg.grape.detuning_bounds_mhz[0];
        opts.det_hi_mhz = cfg.grape.detuning_bounds_mhz[1];
        opts.seed = cfg.seed;
        opts.dense_cap_dim = cfg.solver.dense_cap_dim;
        auto [state, grape] = prepare_ground_state(cfg.table, cfg.geometry_for(n), cfg.grape.duration_us,
                                                   cfg.grape.n_slices, opts);
        res.state = state;
        res.grape = std::move(grape);
    } else {
        const SparseOperator h = build_rydberg_hamiltonian(cfg.table, cfg.geometry_for(n), ryd_options(cfg));
        res.state = solver_ground_state(cfg, h);
    }
    res.state.normalize();
    return res;
}

ProtocolChainResult run_protocol_chain(const RunConfig& cfg, int n) {
    if (n < 2) throw ConfigError("protocol requires n >= 2 (n_list contains " + std::to_string(n) + ")");
    ProtocolChainResult chain;
    chain.schedule = build_protocol_schedule(cfg, n);
    chain.initial = protocol_initial_state(cfg, n);
    PropagateOptions opts;
    opts.dt_max_us = cfg.protocol.dt_max_us;
    opts.n_output = cfg.protocol.n_output;
    opts.phase_per_mhz_us = cfg.phase_scale();
    chain.protocol = run_adiabatic_protocol(cfg.table, cfg.geometry_for(n), chain.schedule,
                                            chain.initial.state, opts, ryd_options(cfg));
    return chain;
}

double min_interaction_scale_mhz(const InteractionTable& table, const Geometry& geometry) {
    double scale = std::numeric_limits<double>::infinity();
    for (ExchangeChannel ch : {ExchangeChannel::U0, ExchangeChannel::D0, ExchangeChannel::OO})
        scale = std::min(scale, std::abs(pair_dipole_coupling(table, geometry, 0, 1, ch)));
    return scale;
}

void run_spectrum(const RunConfig& cfg) {
    const RunTimer timer(cfg);
    write_resolved_config(cfg);
    const bool multi = cfg.n_list.size() > 1;

    nlohmann::json summary;
    summary["command"] = "spectrum";
    summary["experiment"] = cfg.experiment;
    for (int n : cfg.n_list) {
        const SparseOperator h = build_rydberg_hamiltonian(cfg.table, cfg.geometry_for(n), ryd_options(cfg));
        const SpectrumReport rep = dense_spectrum(h, cfg.solver.dense_cap_dim);
        write_text_file(cfg.output_dir + "/spectrum" + n_suffix(n, multi) + ".csv", spectrum_export(rep));
        summary["per_n"][std::to_string(n)] = {{"e0_mhz", rep.eigenvalues[0]},
                                               {"gap_mhz", rep.gap},
                                               {"ground_degeneracy", rep.ground_degeneracy},
                                               {"n_levels", rep.eigenvalues.size()}};
    }
    const FineTuneReport ft = check_fine_tuning(cfg.table, cfg.geometry_for(2), 1e-9);
    write_text_file(cfg.output_dir + "/finetune.csv", finetune_csv(ft));
    summary["finetune"] = finetune_json(ft);
    timer.finish(summary);
}

void run_prepare(const RunConfig& cfg) {
    const RunTimer timer(cfg);
    write_resolved_config(cfg);
    const bool multi = cfg.n_list.size() > 1;

    nlohmann::json summary;
    summary["command"] = "prepare";
    summary["experiment"] = cfg.experiment;
    for (int n : cfg.n_list) {
        PrepareOptions opts;
        opts.max_iter = cfg.grape.max_iter;
        opts.target_fidelity = cfg.grape.target_fidelity;
        opts.rabi_lo_mhz = cfg.grape.rabi_bounds_mhz[0];
        opts.rabi_hi_mhz = cfg.grape.rabi_bounds_mhz[1];
        opts.det_lo_mhz = cfg.grape.detuning_bounds_mhz[0];
        opts.det_hi_mhz = cfg.grape.detuning_bounds_mhz[1];
        opts.seed = cfg.seed;
        opts.dense_cap_dim = cfg.solver.dense_cap_dim;
        auto [state, res] = prepare_ground_state(cfg.table, cfg.geometry_for(n), cfg.grape.duration_us,
                                                 cfg.grape.n_slices, opts);

        write_text_file(cfg.output_dir + "/pulses" + n_suffix(n, multi) + ".csv", pulses_csv(res.grid));
        write_text_file(cfg.output_dir + "/state" + n_suffix(n, multi) + ".csv", state_csv(state));
        std::ostringstream hist;
        hist << "iteration,fidelity\n";
        for (size_t i = 0; i < res.fidelity_history.size(); ++i)
            hist << i << "," << fmt12(res.fidelity_history[i]) << "\n";
        write_text_file(cfg.output_dir + "/grape_history" + n_suffix(n, multi) + ".csv", hist.str());

        summary["per_n"][std::to_string(n)] = {{"f_gs", res.final_fidelity},
                                               {"converged", res.converged},
                                               {"iterations", res.iterations}};
    }
    timer.finish(summary);
}

void run_protocol(const RunConfig& cfg) {
    const RunTimer timer(cfg);
    for (int n : cfg.n_list)
        if (n < 2) throw ConfigError("protocol requires n >= 2 (n_list contains " + std::to_string(n) + ")");
    write_resolved_config(cfg);
    const bool multi = cfg.n_list.size() > 1;

    nlohmann::json summary;
    summary["command"] = "protocol";
    summary["experiment"] = cfg.experiment;
    std::ostringstream entropy;
    entropy << "n,s1,s2,final_fidelity,peak_fidelity\n";

    for (int n : cfg.n_list) {
        const ProtocolChainResult chain = run_protocol_chain(cfg, n);
        const TrajectoryRecord& rec = chain.protocol.trajectory;
        write_text_file(cfg.output_dir + "/trajectory" + n_suffix(n, multi) + ".csv",
                        trajectory_csv(rec, n));
        write_text_file(cfg.output_dir + "/pulses" + n_suffix(n, multi) + ".csv",
                        pulses_csv(PulseGrid::from_schedule(chain.schedule, n, cfg.protocol.n_output)));

        const EntanglementReport ent = half_chain_report(rec.final_state);
        write_text_file(cfg.output_dir + "/rdm" + n_suffix(n, multi) + ".csv", rdm_csv(ent.rdm, ent.len));
        entropy << n << "," << fmt12(ent.s1) << "," << fmt12(ent.s2) << ","
                << fmt12(chain.protocol.final_fidelity) << "," << fmt12(chain.protocol.peak_fidelity)
                << "\n";

        double negative_weight = 0.0;
        for (const auto& [m, w] : ent.blocks.block_weights)
            if (m < 0) negative_weight += w;

        const AdiabaticityReport ad =
            adiabaticity_report(chain.schedule, min_interaction_scale_mhz(cfg.table, cfg.geometry_for(n)));
        const CoherenceBudget cb = coherence_budget(n, cfg.lifetime_us, cfg.protocol.duration_us);

        nlohmann::json jn = {{"final_fidelity", chain.protocol.final_fidelity},
                             {"peak_fidelity", chain.protocol.peak_fidelity},
                             {"s1", ent.s1},
                             {"s2", ent.s2},
                             {"negative_block_weight", negative_weight},
                             {"initial_state", chain.initial.kind},
                             {"total_steps", rec.total_steps},
                             {"adiabaticity",
                              {{"max_ramp_rate_mhz_per_us", ad.max_ramp_rate_mhz_per_us},
                               {"min_interaction_scale_mhz", ad.min_interaction_scale_mhz},
                               {"pass", ad.pass}}},
                             {"coherence",
                              {{"tau_eff_us", cb.tau_eff_us},
                               {"error_estimate", cb.error_estimate},
                               {"exceeds_ten_percent", cb.exceeds_ten_percent}}}};
        if (chain.initial.grape) jn["grape_f_gs"] = chain.initial.grape->final_fidelity;
        summary["per_n"][std::to_string(n)] = jn;
    }
    write_text_file(cfg.output_dir + "/entropy.csv", entropy.str());
    timer.finish(summary);
}

void run_scaling(const RunConfig& cfg) {
    const RunTimer timer(cfg);
    for (int n : cfg.n_list)
        if (n < 2) throw ConfigError("scaling requires n >= 2 (n_list contains " + std::to_string(n) + ")");
    write_resolved_config(cfg);

    nlohmann::json summary;
    summary["command"] = "scaling";
    summary["experiment"] = cfg.experiment;
    std::ostringstream entropy;
    entropy << "family,n,s1,s2,fidelity\n";

    const auto ideal_family = [](int n) { return std::pair(build_motzkin_state(n), 1.0); };
    const auto raw_family = [&cfg](int n) {
        const SparseOperator h = build_rydberg_hamiltonian(cfg.table, cfg.geometry_for(n), ryd_options(cfg));
        QutritState gs = solver_ground_state(cfg, h);
        return std::pair(gs, fidelity(gs, build_motzkin_state(n)));
    };
    const auto effective_family = [&cfg](int n) {
        const ProtocolChainResult chain = run_protocol_chain(cfg, n);
        return std::pair(chain.protocol.trajectory.final_state, chain.protocol.final_fidelity);
    };

    const std::vector<std::pair<std::string, std::function<std::pair<QutritState, double>(int)>>>
        families = {{"ideal", ideal_family}, {"effective", effective_family}, {"raw", raw_family}};
    for (const auto& [name, family] : families) {
        const auto rows = scaling_study(cfg.n_list, family);
        nlohmann::json table = nlohmann::json::array();
        for (const auto& row : rows) {
            entropy << name << "," << row.n << "," << fmt12(row.s1) << "," << fmt12(row.s2) << ","
                    << fmt12(row.fidelity) << "\n";
            table.push_back({{"n", row.n}, {"s1", row.s1}, {"s2", row.s2}, {"fidelity", row.fidelity}});
        }
        summary["families"][name] = table;
    }
    write_text_file(cfg.output_dir + "/entropy.csv", entropy.str());
    timer.finish(summary);
}

}  // namespace mrsim
