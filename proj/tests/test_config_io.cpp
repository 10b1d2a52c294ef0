#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mrsim/config.hpp"
#include "mrsim/io.hpp"

using namespace mrsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "mrsim_cli_tests";

json fixture_json(const char* name) {
    std::ifstream in(std::string(MRSIM_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    return json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path write_temp_config(const json& j, const char* name) {
    fs::create_directories(kWork);
    const fs::path p = kWork / name;
    std::ofstream out(p);
    out << j.dump(2);
    return p;
}

// run the CLI through the shell; returns the exit code, captures stderr
int run_cli(const std::string& args, const fs::path& err_file = {}) {
    std::string cmd = std::string(MRSIM_CLI_PATH) + " " + args;
    if (!err_file.empty()) cmd += " 2>" + err_file.string();
    else cmd += " 2>/dev/null";
    cmd += " >/dev/null";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("fixtures parse and defaults are filled in") {
    const RunConfig cfg = parse_config(fixture_json("rb87_adiabatic.json"));
    CHECK(cfg.table.c3_ghz_um3.at("00") == doctest::Approx(-27.512));
    CHECK(cfg.spacing_um == doctest::Approx(7.0));
    CHECK(cfg.n_list == std::vector<int>{2, 3, 4});
    CHECK(cfg.protocol.duration_us == doctest::Approx(10.0));
    CHECK(cfg.protocol.compensation == "vdw-flatten");
    CHECK(cfg.solver.dense_cap_dim == 729);
    CHECK(cfg.seed == 12345u);
    CHECK(!cfg.table.forster_c6_ghz2_um6.has_value());

    const RunConfig cs = parse_config(fixture_json("cs133_finetune.json"));
    REQUIRE(cs.table.forster_c6_ghz2_um6.has_value());
    CHECK(*cs.table.forster_detuning_mhz == doctest::Approx(-223.2));
    const Geometry g3 = cs.geometry_for(3);
    CHECK(g3.n_sites == 3);
    CHECK(g3.pair_distance(0, 2) == doctest::Approx(2.0 * 8.69));
}

TEST_CASE("missing fields are reported with their full path") {
    json j = fixture_json("rb87_adiabatic.json");
    j["interactions"]["c3_ghz_um3"].erase("00");
    CHECK_THROWS_WITH_AS((void)parse_config(j),
                         doctest::Contains("interactions.c3_ghz_um3.00"), ConfigError);

    json j2 = fixture_json("rb87_adiabatic.json");
    j2.erase("geometry");
    CHECK_THROWS_WITH_AS((void)parse_config(j2), doctest::Contains("geometry"), ConfigError);

    json j3 = fixture_json("rb87_adiabatic.json");
    j3["n_list"] = json::array();
    CHECK_THROWS_WITH_AS((void)parse_config(j3), doctest::Contains("n_list"), ConfigError);

    json j4 = fixture_json("rb87_adiabatic.json");
    j4["geometry"]["spacing_um"] = -1.0;
    CHECK_THROWS_AS((void)parse_config(j4), ConfigError);

    json j5 = fixture_json("rb87_adiabatic.json");
    j5["protocol"]["compensation"] = "nonsense";
    CHECK_THROWS_WITH_AS((void)parse_config(j5), doctest::Contains("compensation"), ConfigError);
}

TEST_CASE("resolving a config is idempotent") {
    const RunConfig cfg = parse_config(fixture_json("cs133_finetune.json"));
    const json r1 = resolved_json(cfg);
    const RunConfig cfg2 = parse_config(r1);
    const json r2 = resolved_json(cfg2);
    CHECK(r1.dump(2) == r2.dump(2));
}

TEST_CASE("numeric formatting is fixed at 12 significant digits") {
    CHECK(fmt12(1.0) == "1.00000000000e+00");
    CHECK(fmt12(-0.5) == "-5.00000000000e-01");
    CHECK(fmt12(12345.6789) == "1.23456789000e+04");
    CHECK(fmt12(0.0) == "0.00000000000e+00");
}

TEST_CASE("cli: cesium spectrum run matches the golden files byte for byte") {
    const fs::path out = kWork / "cs_spec";
    fs::remove_all(out);
    const int code = run_cli("spectrum " + std::string(MRSIM_FIXTURE_DIR) + "/cs133_finetune.json -o " + out.string());
    REQUIRE(code == 0);
    for (const char* f : {"spectrum_N2.csv", "spectrum_N3.csv", "finetune.csv"}) {
        INFO(f);
        CHECK(slurp(out / f) == slurp(fs::path(MRSIM_GOLDEN_DIR) / f));
    }
    CHECK(fs::exists(out / "config.resolved"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "run_meta.json"));
    const json summary = json::parse(slurp(out / "summary.json"));
    CHECK(summary["command"] == "spectrum");
    CHECK(summary["per_n"]["2"]["e0_mhz"].get<double>() < -30.0);
}

TEST_CASE("cli: reruns are byte-identical and thread count does not change results") {
    const fs::path out1 = kWork / "rb_spec_a";
    const fs::path out2 = kWork / "rb_spec_b";
    fs::remove_all(out1);
    fs::remove_all(out2);
    const std::string fixture = std::string(MRSIM_FIXTURE_DIR) + "/rb87_adiabatic.json";
    REQUIRE(run_cli("spectrum " + fixture + " -o " + out1.string()) == 0);
    // override the worker count through the environment on the second run
    std::string cmd = "MRSIM_THREADS=4 " + std::string(MRSIM_CLI_PATH) + " spectrum " + fixture +
                      " -o " + out2.string() + " >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    // config.resolved embeds the output directory, so compare the numeric files only
    for (const char* f : {"spectrum_N2.csv", "spectrum_N3.csv", "spectrum_N4.csv", "finetune.csv",
                          "summary.json"}) {
        INFO(f);
        CHECK(slurp(out1 / f) == slurp(out2 / f));
    }
    // the rubidium two-site ground energy lands near the reference -50.3 MHz
    const std::string spec2 = slurp(out1 / "spectrum_N2.csv");
    CHECK(spec2.find("-5.12147") != std::string::npos);
}

TEST_CASE("cli: two-site protocol reports its fidelity above the floor") {
    json j = fixture_json("rb87_adiabatic.json");
    j["n_list"] = {2};
    const fs::path cfg = write_temp_config(j, "rb_n2.json");
    const fs::path out = kWork / "rb_protocol";
    fs::remove_all(out);
    REQUIRE(run_cli("protocol " + cfg.string() + " -o " + out.string()) == 0);
    const json summary = json::parse(slurp(out / "summary.json"));
    const json& pn = summary["per_n"]["2"];
    CHECK(pn["final_fidelity"].get<double>() >= 0.97);
    CHECK(pn["initial_state"] == "grape");
    CHECK(pn["grape_f_gs"].get<double>() >= 0.999);
    CHECK(pn["adiabaticity"]["pass"].get<bool>());
    CHECK(fs::exists(out / "trajectory.csv"));
    CHECK(fs::exists(out / "pulses.csv"));
    CHECK(fs::exists(out / "rdm.csv"));
    CHECK(fs::exists(out / "entropy.csv"));
}

TEST_CASE("cli: a single-site protocol is refused as a config error") {
    json j = fixture_json("rb87_adiabatic.json");
    j["n_list"] = {1};
    const fs::path cfg = write_temp_config(j, "rb_n1.json");
    const fs::path err = kWork / "n1.err";
    CHECK(run_cli("protocol " + cfg.string() + " -o " + (kWork / "n1_out").string(), err) == 2);
    CHECK(slurp(err).find("requires n >= 2") != std::string::npos);
}

TEST_CASE("cli: malformed config exits 2 and names the missing field") {
    json j = fixture_json("rb87_adiabatic.json");
    j["interactions"]["c3_ghz_um3"].erase("00");
    const fs::path cfg = write_temp_config(j, "rb_broken.json");
    const fs::path err = kWork / "broken.err";
    CHECK(run_cli("spectrum " + cfg.string() + " -o " + (kWork / "broken_out").string(), err) == 2);
    CHECK(slurp(err).find("interactions.c3_ghz_um3.00") != std::string::npos);
}

TEST_CASE("cli: a nonexistent config path is a config error") {
    CHECK(run_cli(std::string("spectrum /definitely/not/here.json -o ") + (kWork / "x").string()) == 2);
}

TEST_CASE("cli: zero-iteration pulse budget reports converged=false") {
    json j = fixture_json("rb87_adiabatic.json");
    j["n_list"] = {2};
    j["grape"]["max_iter"] = 0;
    const fs::path cfg = write_temp_config(j, "rb_budget0.json");
    const fs::path out = kWork / "rb_budget0";
    fs::remove_all(out);
    REQUIRE(run_cli("prepare " + cfg.string() + " -o " + out.string()) == 0);
    const json summary = json::parse(slurp(out / "summary.json"));
    CHECK(!summary["per_n"]["2"]["converged"].get<bool>());
    const double f = summary["per_n"]["2"]["f_gs"].get<double>();
    CHECK(f >= 0.0);
    CHECK(f < 0.999);  // the unoptimized seeded pulse is nowhere near target
}

TEST_CASE("cli: scaling emits one block per family with growing entropies") {
    json j = fixture_json("rb87_adiabatic.json");
    j["n_list"] = {2, 4};
    const fs::path cfg = write_temp_config(j, "rb_scaling.json");
    const fs::path out = kWork / "rb_scaling";
    fs::remove_all(out);
    REQUIRE(run_cli("scaling " + cfg.string() + " -o " + out.string()) == 0);
    const json summary = json::parse(slurp(out / "summary.json"));
    for (const char* fam : {"ideal", "effective", "raw"}) {
        INFO(fam);
        REQUIRE(summary["families"].contains(fam));
        const auto& rows = summary["families"][fam];
        REQUIRE(rows.size() == 2);
        CHECK(rows[0]["n"].get<int>() == 2);
        CHECK(rows[1]["n"].get<int>() == 4);
        CHECK(rows[1]["fidelity"].is_number());
    }
    // entropy growth holds for the clean and the protocol-produced states;
    // the raw ground state is allowed to dip (boundary weight shifts at small n)
    for (const char* fam : {"ideal", "effective"}) {
        INFO(fam);
        const auto& rows = summary["families"][fam];
        CHECK(rows[1]["s1"].get<double>() > rows[0]["s1"].get<double>());
    }
    const std::string entropy = slurp(out / "entropy.csv");
    CHECK(entropy.rfind("family,n,s1,s2,fidelity", 0) == 0);
}
