#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mrsim/basis.hpp"

using namespace mrsim;

TEST_CASE("encode is base-3 with site 0 most significant") {
    CHECK(encode({SiteLabel::Up}) == 0);
    CHECK(encode({SiteLabel::Flat}) == 1);
    CHECK(encode({SiteLabel::Down}) == 2);
    // d,0,u -> 2*9 + 1*3 + 0 = 21
    CHECK(encode({SiteLabel::Down, SiteLabel::Flat, SiteLabel::Up}) == 21);
    CHECK(encode({SiteLabel::Up, SiteLabel::Up, SiteLabel::Up}) == 0);
    CHECK(encode({SiteLabel::Down, SiteLabel::Down, SiteLabel::Down}) == 26);
}

TEST_CASE("decode round-trips every index for n up to 4") {
    for (int n = 1; n <= 4; ++n)
        for (std::int64_t idx = 0; idx < pow3(n); ++idx) {
            const BasisConfig c = decode(idx, n);
            REQUIRE(static_cast<int>(c.size()) == n);
            CHECK(encode(c) == idx);
        }
}

TEST_CASE("decode rejects out-of-range indices") {
    CHECK_THROWS_AS(decode(-1, 2), DomainError);
    CHECK_THROWS_AS(decode(9, 2), DomainError);
}

TEST_CASE("magnetization counts up minus down") {
    CHECK(total_magnetization({SiteLabel::Up, SiteLabel::Down}) == 0);
    CHECK(total_magnetization({SiteLabel::Up, SiteLabel::Up, SiteLabel::Flat}) == 2);
    CHECK(total_magnetization({SiteLabel::Down, SiteLabel::Down}) == -2);
    CHECK(range_magnetization(encode({SiteLabel::Up, SiteLabel::Down, SiteLabel::Up}), 3, 0, 2) == 0);
    CHECK(range_magnetization(encode({SiteLabel::Up, SiteLabel::Down, SiteLabel::Up}), 3, 2, 1) == 1);
}

TEST_CASE("config strings use u/0/d and parse back") {
    const BasisConfig c{SiteLabel::Up, SiteLabel::Flat, SiteLabel::Down};
    CHECK(config_string(c) == "u0d");
    CHECK(config_from_string("u0d") == c);
    CHECK(config_from_string("ufd") == c);  // 'f' accepted for the flat level
    CHECK_THROWS_AS(config_from_string("uxd"), DomainError);
}

TEST_CASE("basis states are unit vectors with a single nonzero amplitude") {
    const QutritState s = basis_state({SiteLabel::Flat, SiteLabel::Down});
    CHECK(s.n_sites == 2);
    CHECK(s.dim() == 9);
    CHECK(s.amplitudes[encode({SiteLabel::Flat, SiteLabel::Down})] == std::complex<double>(1.0, 0.0));
    CHECK(s.norm() == doctest::Approx(1.0));
}

TEST_CASE("overlap conjugates the left argument; fidelity is its squared magnitude") {
    QutritState a(1), b(1);
    a.amplitudes << std::complex<double>(0.0, 1.0), 0.0, 0.0;
    b.amplitudes << 1.0, 0.0, 0.0;
    CHECK(overlap(a, b) == std::complex<double>(0.0, -1.0));
    CHECK(fidelity(a, b) == doctest::Approx(1.0));

    QutritState c(1);
    c.amplitudes << 0.0, 1.0, 0.0;
    CHECK(fidelity(a, c) == doctest::Approx(0.0));
}

TEST_CASE("fidelity of a superposition against a two-term target") {
    // 0.65|00> + 0.76|ud> + 0.02|du| against (|00> + |ud>)/sqrt(2):
    // |(0.65 + 0.76)/sqrt(2)|^2 = 0.99405
    QutritState state(2), target(2);
    state.amplitudes.setZero();
    state.amplitudes[encode(config_from_string("00"))] = 0.65;
    state.amplitudes[encode(config_from_string("ud"))] = 0.76;
    state.amplitudes[encode(config_from_string("du"))] = 0.02;
    state.normalize();
    target.amplitudes.setZero();
    target.amplitudes[encode(config_from_string("00"))] = 1.0 / std::sqrt(2.0);
    target.amplitudes[encode(config_from_string("ud"))] = 1.0 / std::sqrt(2.0);
    CHECK(fidelity(state, target) == doctest::Approx(0.994).epsilon(1e-3));
}

TEST_CASE("partial trace of a product state is pure") {
    const QutritState s = basis_state({SiteLabel::Up, SiteLabel::Down, SiteLabel::Flat});
    const Eigen::MatrixXcd rho = partial_trace(s, 1, 1);
    CHECK(rho.rows() == 3);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(rho(2, 2).real() - 1.0) < 1e-12);  // site 1 holds Down
}

TEST_CASE("partial trace of an entangled pair is maximally mixed") {
    QutritState bell(2);
    bell.amplitudes.setZero();
    bell.amplitudes[encode(config_from_string("ud"))] = 1.0 / std::sqrt(2.0);
    bell.amplitudes[encode(config_from_string("00"))] = 1.0 / std::sqrt(2.0);
    const Eigen::MatrixXcd rho = partial_trace(bell, 0, 1);
    CHECK(std::abs(rho(0, 0).real() - 0.5) < 1e-12);  // |u> weight
    CHECK(std::abs(rho(1, 1).real() - 0.5) < 1e-12);  // |0> weight
    CHECK(std::abs(rho(2, 2).real()) < 1e-12);
    CHECK(rho.cwiseAbs().maxCoeff() == doctest::Approx(0.5));
}

TEST_CASE("partial trace matches the two complementary cuts") {
    // random-ish but deterministic state on 3 sites
    QutritState s(3);
    for (std::int64_t i = 0; i < s.dim(); ++i)
        s.amplitudes[i] = std::complex<double>(std::sin(1.0 + 0.7 * static_cast<double>(i)),
                                               std::cos(2.0 + 0.3 * static_cast<double>(i)));
    s.normalize();
    const Eigen::MatrixXcd left = partial_trace(s, 0, 1);
    const Eigen::MatrixXcd right = partial_trace(s, 1, 2);
    // same nonzero eigenvalues on both sides of the cut
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> el(left);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(right);
    Eigen::VectorXd lam_r = er.eigenvalues().tail(3);
    for (int k = 0; k < 3; ++k) CHECK(el.eigenvalues()[k] == doctest::Approx(lam_r[k]).epsilon(1e-10));
}

TEST_CASE("partial trace rejects empty and full ranges") {
    const QutritState s = basis_state({SiteLabel::Up, SiteLabel::Down});
    CHECK_THROWS_AS(partial_trace(s, 0, 0), DomainError);
    CHECK_THROWS_AS(partial_trace(s, 0, 2), DomainError);
    CHECK_THROWS_AS(partial_trace(s, 2, 1), DomainError);
}
