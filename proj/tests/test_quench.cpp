#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "boxgas/errors.hpp"
#include "boxgas/quench.hpp"
#include "boxgas/spectral.hpp"
#include "boxgas/thermo.hpp"
#include "oracles.hpp"

using namespace boxgas;
constexpr double pi = std::numbers::pi;

TEST_CASE("zero-temperature distribution")
{
    TrapConfig cfg{1.0, 1.0, 0.0};
    const auto d = diagonal_distribution(cfg, 64, 1e-4);
    CHECK(d.at(1) == doctest::Approx(0.360253).epsilon(1e-6));
    CHECK(d.at(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.at(3) == doctest::Approx(0.129691).epsilon(1e-5));
    for (int m = 4; m <= 64; m += 2)
        CHECK(d.at(m) == 0.0);
    CHECK(d.even_mass == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed-form distribution equals the thermal average of squared overlaps")
{
    constexpr int m_max = 200;
    constexpr int n_levels = 61;
    Eigen::MatrixXd a2(m_max, n_levels);
    for (int m = 1; m <= m_max; ++m)
        for (int n = 1; n <= n_levels; ++n) {
            const double a = oracle::overlap_quadrature(m, n, 1.0);
            a2(m - 1, n - 1) = a * a;
        }
    for (double T : {0.0, 1.0, 100.0, 1000.0}) {
        TrapConfig cfg{1.0, 1.0, T};
        const auto dist = diagonal_distribution(cfg, m_max, 1e-4);
        const auto p = thermal_occupations(cfg, Trap::Half);
        REQUIRE(p.size() <= static_cast<std::size_t>(n_levels));
        double worst = 0.0;
        for (int m = 1; m <= m_max; ++m) {
            long double s = 0.0L;
            for (std::size_t i = 0; i < p.size(); ++i)
                s += static_cast<long double>(p[i]) * a2(m - 1, static_cast<Eigen::Index>(i));
            worst = std::max(worst, std::abs(static_cast<double>(s) - dist.at(m)));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("parity halves")
{
    for (double T : {0.0, 1.0, 100.0, 1000.0}) {
        TrapConfig cfg{1.0, 1.0, T};
        const auto d = diagonal_distribution(cfg);
        CHECK(std::abs(d.even_mass - 0.5) <= 1e-8);
        CHECK(std::abs(d.odd_mass + d.tail_mass - 0.5) <= 1e-8);
        CHECK(d.tail_mass <= d.tail_bound + 1e-15);
        CHECK(d.tail_mass >= 0.0);
    }
}

TEST_CASE("quench state invariants")
{
    for (double T : {0.0, 1.0, 100.0}) {
        TrapConfig cfg{1.0, 1.0, T};
        const auto s = build_quench_state(cfg, 128, 1e-4);
        const auto& r = s.rho;
        CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(std::abs(r.trace().imag()) <= 1e-15);
        CHECK(std::abs(r.trace().real() + s.tail_mass - 1.0) <= 1e-14);
        CHECK(s.tail_mass <= s.tail_bound + 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);

        const auto d = diagonal_distribution(cfg, 128, 1e-4);
        for (int m = 1; m <= 128; ++m)
            CHECK(std::abs(r(m - 1, m - 1).real() - d.at(m)) <= 1e-14);
        // parity selection: even-odd coherences come only through the even levels of the half trap
        CHECK(std::abs(r(0, 1)) > 0.0);
    }
}

TEST_CASE("zero-temperature state is pure up to truncation")
{
    TrapConfig cfg{1.0, 1.0, 0.0};
    const auto s = build_quench_state(cfg, 2048);
    const double tr = s.rho.trace().real();
    const double purity = s.rho.squaredNorm();
    CHECK(std::abs(purity - tr * tr) <= 1e-12);
    CHECK(1.0 - tr <= 1e-6);
    CHECK(std::abs(purity - 1.0) <= 1e-9);
}

TEST_CASE("truncation errors carry a suggested size")
{
    TrapConfig cfg{1.0, 1.0, 1000.0};
    try {
        (void)diagonal_distribution(cfg, 8);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.suggested_n_max() > 8);
        CHECK_NOTHROW((void)diagonal_distribution(cfg, e.suggested_n_max()));
    }
    CHECK_THROWS_AS((void)build_quench_state(cfg, 8), TruncationError);
    CHECK_THROWS_AS((void)diagonal_distribution(cfg, 2), DomainError);
}

TEST_CASE("dephasing")
{
    TrapConfig cfg{1.0, 1.0, 1.0};
    const auto s = build_quench_state(cfg, 64, 1e-4);
    const auto d = dephase(s);
    CHECK(d.rho.diagonal() == s.rho.diagonal());
    Eigen::MatrixXcd off = d.rho;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dephase(d).rho == d.rho);
    CHECK(mean_energy(d) == doctest::Approx(mean_energy(s)).epsilon(1e-14));
    CHECK(d.rho.squaredNorm() <= s.rho.squaredNorm());
    CHECK(entropy(d.rho) >= entropy(s.rho));
}

TEST_CASE("dephased entropy reproduces the sweep value")
{
    TrapConfig cfg{1.0, 1.0, 1.0};
    const auto s = build_quench_state(cfg, 512);
    const double ds = entropy(dephase(s).rho) - equilibrium_entropy(cfg, Trap::Half);
    const std::vector<double> r{cfg.ratio()};
    const auto sweep = sweep_ratio(cfg, r, 512, 1);
    CHECK(std::abs(ds - sweep.ds_fe[0]) <= 1e-10);
}

TEST_CASE("energy is conserved by the quench")
{
    for (double T : {0.0, 1.0, 100.0, 1000.0}) {
        TrapConfig cfg{1.0, 1.0, T};
        const auto dist = diagonal_distribution(cfg);
        const double e = post_quench_energy(cfg, dist);
        const double e0 = internal_energy(cfg, Trap::Half);
        CHECK(std::abs(e - e0) / e0 <= 1e-8);
    }
    TrapConfig zero{1.0, 1.0, 0.0};
    CHECK(post_quench_energy(zero, diagonal_distribution(zero, 64, 1e-4)) / zero.alpha() ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("occupations do not depend on the truncation")
{
    TrapConfig cfg{1.0, 1.0, 100.0};
    const auto a = diagonal_distribution(cfg, 256);
    const auto b = diagonal_distribution(cfg, 512);
    for (int m = 1; m <= 256; ++m) {
        CHECK(a.at(m) == b.at(m));
        CHECK(std::abs(a.at(m) - b.at(m)) <= a.tail_bound);
    }
    CHECK(post_quench_energy(cfg, a) == doctest::Approx(post_quench_energy(cfg, b)).epsilon(1e-12));
}
