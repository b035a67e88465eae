#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/free_trg.hpp"
#include "ctrg/oracles.hpp"
#include "ctrg/quadrature.hpp"

using namespace ctrg;

TEST_CASE("momentum sums agree with brute force on small tori") {
    for (double m : {0.3, 1.0, 3.0}) {
        CHECK(torus_f0(2, m) * 4.0 == doctest::Approx(-brute_force_logZ(2, m)).epsilon(1e-12));
        CHECK(torus_f1(2, m) * 4.0 == doctest::Approx(brute_force_df(2, m)).epsilon(1e-10));
        CHECK(torus_f0(4, m) * 16.0 == doctest::Approx(-brute_force_logZ(4, m)).epsilon(1e-12));
        CHECK(torus_f1(4, m) * 16.0 == doctest::Approx(brute_force_df(4, m)).epsilon(1e-10));
    }
}

TEST_CASE("finite tori converge to the infinite-lattice integrals") {
    for (double m : {0.5, 1.0}) {
        CHECK(std::abs(torus_f0(1024, m) - exact_f0(m)) < 1e-8);
        CHECK(std::abs(torus_f1(1024, m) - exact_f1(m)) < 1e-8);
    }
}

TEST_CASE("first-order coefficient is six squared variances") {
    for (double m : {0.1, 1.0}) CHECK(exact_f1(m) == doctest::Approx(6.0 * std::pow(link_variance(m), 2)));
}

TEST_CASE("large-mass limit") {
    const double m = 1e3, k = m * m + 4.0;
    CHECK(exact_f0(m) == doctest::Approx(-kLog2Pi + std::log(k)).epsilon(1e-12));
    CHECK(exact_f1(m) == doctest::Approx(6.0 / (k * k)).epsilon(1e-9));
}

TEST_CASE("variance grows like 1/m^2 at small mass") {
    CHECK(link_variance(0.01) > link_variance(0.1));
    CHECK(exact_f1(0.01) > exact_f1(0.1));
}

TEST_CASE("decoupled links") {
    const double m = 1.3;
    const BruteForceResult r = brute_force(2, m, 0.0);
    CHECK(r.links == 8);
    CHECK(r.log_z == doctest::Approx(8.0 * (0.5 * kLog2Pi - 0.5 * std::log(m * m))).epsilon(1e-14));
    CHECK(r.df == doctest::Approx(8.0 * 3.0 / std::pow(m, 4)).epsilon(1e-14));
}

TEST_CASE("one-vertex torus") {
    const double m = 1.0, h = 1e-4;
    // both links couple to themselves through the periodic legs: K = [[4+m^2, -4], [-4, 4+m^2]]
    const double ks = m * m, kd = 8.0 + m * m;
    CHECK(brute_force_logZ(1, m) == doctest::Approx(kLog2Pi - 0.5 * std::log(ks * kd)).epsilon(1e-14));

    const GaussRule r = gauss_hermite(60);
    auto logz = [&](double lambda) {
        double z = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            for (std::size_t j = 0; j < r.nodes.size(); ++j) {
                const double s = r.nodes[i] * std::sqrt(2.0 / ks), d = r.nodes[j] * std::sqrt(2.0 / kd);
                const double x = (s + d) / std::sqrt(2.0), y = (s - d) / std::sqrt(2.0);
                z += r.weights[i] * r.weights[j] * std::exp(-lambda * (std::pow(x, 4) + std::pow(y, 4)));
            }
        return std::log(z);
    };
    const double fd = -(logz(h) - logz(-h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(brute_force_df(1, m)).epsilon(1e-5));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(exact_f1(0.0), InvalidConfig);
    CHECK_THROWS_AS(exact_f0(-1.0), InvalidConfig);
    CHECK_NOTHROW(exact_f0(0.0));
    CHECK_THROWS_AS(brute_force(5, 1.0), InvalidConfig);
}
