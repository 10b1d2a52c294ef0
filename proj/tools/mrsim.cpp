// mrsim: qutrit-chain simulator for dipolar Rydberg arrays.
//
// Subcommands:
//   spectrum  - diagonalize the chain Hamiltonian per configured N, export levels
//   prepare   - pulse-optimized ground-state preparation from |00...0>
//   protocol  - adiabatic boundary-ramp protocol + entanglement analysis
//   scaling   - half-chain entropy scaling for ideal / effective / raw states
//
// Exit codes: 0 success, 2 configuration error, 3 numerical/convergence error,
// 4 resource cap.  MRSIM_THREADS overrides the matvec worker count.

#include <clocale>
#include <cstdio>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrsim/config.hpp"
#include "mrsim/errors.hpp"
#include "mrsim/pipelines.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string output_dir;
    std::vector<int> n_override;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "JSON run configuration")->required();
    cmd->add_option("-o,--output-dir", args.output_dir, "override output_dir from the config");
    cmd->add_option("-n,--n", args.n_override, "override n_list (repeatable)");
}

mrsim::RunConfig load(const CommonArgs& args) {
    mrsim::RunConfig cfg = mrsim::load_config_file(args.config_path);
    if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
    if (!args.n_override.empty()) {
        for (int n : args.n_override)
            if (n < 1) throw mrsim::ConfigError("config: field n_list entries must be integers >= 1");
        cfg.n_list = args.n_override;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"qutrit-chain simulator for dipolar Rydberg arrays"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, prepare_args, protocol_args, scaling_args;
    add_common(app.add_subcommand("spectrum", "diagonalize and export energy levels"), spectrum_args);
    add_common(app.add_subcommand("prepare", "pulse-optimized ground-state preparation"), prepare_args);
    add_common(app.add_subcommand("protocol", "adiabatic boundary-ramp protocol"), protocol_args);
    add_common(app.add_subcommand("scaling", "entropy scaling study"), scaling_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("spectrum")) mrsim::run_spectrum(load(spectrum_args));
        if (app.got_subcommand("prepare")) mrsim::run_prepare(load(prepare_args));
        if (app.got_subcommand("protocol")) mrsim::run_protocol(load(protocol_args));
        if (app.got_subcommand("scaling")) mrsim::run_scaling(load(scaling_args));
    } catch (const mrsim::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mrsim::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mrsim::ResourceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const mrsim::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "error: out of memory\n");
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
