#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mrsim/motzkin.hpp"
#include "mrsim/rydberg.hpp"
#include "mrsim/spectra.hpp"

using namespace mrsim;

TEST_CASE("dense diagonalization of a known diagonal operator") {
    Eigen::VectorXd d(3);
    d << 3.0, 1.0, 2.0;
    const SpectrumReport rep = dense_spectrum(SparseOperator::from_diagonal(d));
    REQUIRE(rep.eigenvalues.size() == 3);
    CHECK(rep.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(rep.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(rep.eigenvalues[2] == doctest::Approx(3.0));
    CHECK(rep.gap == doctest::Approx(1.0));
    CHECK(rep.ground_degeneracy == 1);
    CHECK(std::abs(rep.ground_vector.amplitudes[1]) == doctest::Approx(1.0));
    CHECK(rep.n_sites == 1);
}

TEST_CASE("degenerate lowest eigenspace is counted, identity is fully degenerate") {
    Eigen::VectorXd d(3);
    d << 0.0, 0.0, 1.0;
    CHECK(dense_spectrum(SparseOperator::from_diagonal(d)).ground_degeneracy == 2);
    const SpectrumReport id = dense_spectrum(SparseOperator::identity(9));
    CHECK(id.ground_degeneracy == 9);
    CHECK(id.gap == doctest::Approx(0.0));
}

TEST_CASE("eigenvalue sum equals the trace") {
    for (int n : {2, 3}) {
        const SparseOperator h = build_rydberg_hamiltonian(rb87_table(), rb87_geometry(n));
        const SpectrumReport rep = dense_spectrum(h);
        double trace = 0.0;
        for (std::int64_t i = 0; i < h.dim(); ++i) trace += h.entry(i, i).real();
        CHECK(rep.eigenvalues.sum() == doctest::Approx(trace).epsilon(1e-9));
    }
}

TEST_CASE("two-site ground state reproduces the calibration energy and amplitudes") {
    const SpectrumReport rep = dense_spectrum(build_rydberg_hamiltonian(rb87_table(), rb87_geometry(2)));
    CHECK(rep.eigenvalues[0] == doctest::Approx(-51.21).epsilon(2e-4));
    // within 10% of the reference -50.3 MHz
    CHECK(std::abs(rep.eigenvalues[0] - (-50.3)) < 0.1 * 50.3);
    const auto idx = [](const char* s) { return encode(config_from_string(s)); };
    const Eigen::VectorXcd& v = rep.ground_vector.amplitudes;
    // global phase fixed by comparing moduli against (0.67, 0.53, 0.53)
    CHECK(std::abs(v[idx("00")]) == doctest::Approx(0.67).epsilon(0.03));
    CHECK(std::abs(v[idx("ud")]) == doctest::Approx(0.53).epsilon(0.04));
    CHECK(std::abs(v[idx("du")]) == doctest::Approx(0.53).epsilon(0.04));
    // nothing outside the zero-magnetization triple
    double outside = 0.0;
    for (std::int64_t i = 0; i < 9; ++i)
        if (i != idx("00") && i != idx("ud") && i != idx("du")) outside += std::norm(v[i]);
    CHECK(outside < 1e-16);
}

TEST_CASE("three- and four-site ground energies stay within ten percent of reference") {
    const double reference[] = {-72.3, -109.1};
    const double measured[] = {-73.4925, -110.8976};  // regression-locked
    for (int n : {3, 4}) {
        const SpectrumReport rep = dense_spectrum(build_rydberg_hamiltonian(rb87_table(), rb87_geometry(n)));
        CHECK(std::abs(rep.eigenvalues[0] - reference[n - 3]) < 0.1 * std::abs(reference[n - 3]));
        CHECK(rep.eigenvalues[0] == doctest::Approx(measured[n - 3]).epsilon(1e-5));
    }
}

TEST_CASE("ground state lives in the zero-magnetization sector") {
    for (int n : {2, 3, 4}) {
        const SpectrumReport rep = dense_spectrum(build_rydberg_hamiltonian(rb87_table(), rb87_geometry(n)));
        double off_sector = 0.0;
        for (std::int64_t i = 0; i < pow3(n); ++i)
            if (total_magnetization(decode(i, n)) != 0) off_sector += std::norm(rep.ground_vector.amplitudes[i]);
        CHECK(std::sqrt(off_sector) < 1e-8);
    }
}

TEST_CASE("iterative and dense ground energies agree across both parameter sets") {
    for (int n = 2; n <= 5; ++n) {
        for (const auto& [table, geom] : {std::pair{rb87_table(), rb87_geometry(n)},
                                          std::pair{cs133_table(), cs133_geometry(n)}}) {
            const SparseOperator h = build_rydberg_hamiltonian(table, geom);
            const SpectrumReport dense = dense_spectrum(h);
            const auto [e0, vec] = iterative_ground_state(h);
            CHECK(std::abs(e0 - dense.eigenvalues[0]) < 1e-6);
            // eigenvector agreement up to phase (spectra here are nondegenerate)
            CHECK(std::abs(std::abs(overlap(vec, dense.ground_vector)) - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("iterative solver finds the frustration-free zero mode at six sites") {
    const SparseOperator h = build_motzkin_hamiltonian(6);
    const auto [e0, vec] = iterative_ground_state(h);
    CHECK(std::abs(e0) < 1e-8);
    CHECK(fidelity(vec, build_motzkin_state(6)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("iterative solver is deterministic for a fixed seed") {
    const SparseOperator h = build_rydberg_hamiltonian(rb87_table(), rb87_geometry(4));
    const auto [e0a, va] = iterative_ground_state(h);
    const auto [e0b, vb] = iterative_ground_state(h);
    CHECK(e0a == e0b);
    CHECK((va.amplitudes - vb.amplitudes).norm() == 0.0);
}

TEST_CASE("dense path refuses oversized operators and names the alternative") {
    const SparseOperator big = SparseOperator::identity(2187);
    CHECK_THROWS_WITH_AS((void)dense_spectrum(big),
                         doctest::Contains("iterative_ground_state"), ResourceError);
    CHECK_NOTHROW((void)dense_spectrum(big, 2187));  // explicit cap override
}

TEST_CASE("iterative solver rejects non-hermitian input") {
    const SparseOperator skew = SparseOperator::from_triplets(9, {{0, 1, 1.0}});
    CHECK_THROWS_AS((void)iterative_ground_state(skew), DomainError);
}

TEST_CASE("export emits a header and one row per eigenvalue") {
    Eigen::VectorXd d(3);
    d << 3.0, 1.0, 2.0;
    const std::string text = spectrum_export(dense_spectrum(SparseOperator::from_diagonal(d)));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,energy_mhz");
    int rows = 0;
    double prev = -1e300;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stoi(line.substr(0, comma)) == rows);
        const double e = std::stod(line.substr(comma + 1));
        CHECK(e >= prev);
        prev = e;
        ++rows;
    }
    CHECK(rows == 3);
}
