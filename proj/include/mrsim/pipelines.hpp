#pragma once

// End-to-end runs behind the CLI subcommands.  Each run owns one output
// directory: config.resolved, the numeric CSV exports, summary.json
// (deterministic), and run_meta.json (timestamps, segregated so reruns stay
// byte-identical elsewhere).

#include <map>
#include <optional>
#include <string>

#include "mrsim/config.hpp"
#include "mrsim/controls.hpp"
#include "mrsim/dynamics.hpp"
#include "mrsim/grape.hpp"

namespace mrsim {

// Least-squares compensation: per-site detunings on the non-penalty channels
// (Up on sites 0..n-2, Down on sites 1..n-1) that flatten the interacting
// diagonal over the path configurations up to a common offset.  Minimum-norm
// solution; residual is the remaining spread in MHz (L2 over path configs).
struct FlattenResult {
    std::map<std::pair<int, int>, double> detunings;  // (site, Level as int) -> MHz
    double residual_mhz = 0.0;
};
FlattenResult flatten_detunings(const InteractionTable& table, const Geometry& geometry);

// Boundary penalty ramps + edge drives + optional compensation ramps.
ControlSchedule build_protocol_schedule(const RunConfig& cfg, int n);

// The configured initial-state policy ("auto": pulse-optimized for n <= 3,
// solver ground state above).
struct InitialStateResult {
    QutritState state;
    std::string kind;  // "grape" | "ground-state"
    std::optional<GrapeResult> grape;
};
InitialStateResult protocol_initial_state(const RunConfig& cfg, int n);

struct ProtocolChainResult {
    ProtocolResult protocol;
    InitialStateResult initial;
    ControlSchedule schedule;
};
ProtocolChainResult run_protocol_chain(const RunConfig& cfg, int n);

// Smallest nearest-neighbor exchange magnitude, the yardstick for ramp rates.
double min_interaction_scale_mhz(const InteractionTable& table, const Geometry& geometry);

void run_spectrum(const RunConfig& cfg);
void run_prepare(const RunConfig& cfg);
void run_protocol(const RunConfig& cfg);
void run_scaling(const RunConfig& cfg);

}  // namespace mrsim
