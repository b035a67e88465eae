#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/schmidt.hpp"

using namespace ctrg;

TEST_CASE("closed-form spectrum") {
    const SchmidtSpectrum s = schmidt_spectrum(2.0, 1.0, 40);
    CHECK(s.u == 0.5);
    CHECK(s.w[0] == doctest::Approx(std::sqrt(3.0) / 2.0));
    for (std::size_t n = 1; n < 10; ++n) CHECK(s.w[n] / s.w[n - 1] == doctest::Approx(0.5));
    double norm = 0.0;
    for (double w : s.w) norm += w * w;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.entropy == doctest::Approx(entropy_from_coefficients(s.w)).epsilon(1e-12));
}

TEST_CASE("Mehler ratio inverts b/a = 2t/(1+t^2)") {
    for (double b : {-1.5, -0.3, 0.7, 1.9}) {
        const double t = mehler_ratio(2.0, b);
        CHECK(2.0 * t / (1.0 + t * t) == doctest::Approx(b / 2.0).epsilon(1e-14));
    }
    CHECK(mehler_ratio(2.0, 0.0) == 0.0);
}

TEST_CASE("product state") {
    const SchmidtSpectrum s = schmidt_spectrum(1.0, 0.0, 5);
    CHECK(s.w[0] == 1.0);
    CHECK(s.w[1] == 0.0);
    CHECK(s.entropy == 0.0);
}

TEST_CASE("entropy grows without bound as u approaches one") {
    CHECK(schmidt_entropy(0.999) > schmidt_entropy(0.99));
    CHECK(schmidt_entropy(0.99) > schmidt_entropy(0.5));
    CHECK(schmidt_entropy(-0.5) == schmidt_entropy(0.5));
}

TEST_CASE("quadrature SVD reproduces the geometric tower") {
    const std::vector<double> q = quadrature_schmidt(2.0, 1.0, 200);
    const SchmidtSpectrum s = schmidt_spectrum_exact(2.0, 1.0, 20);
    CHECK(s.u == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
    for (std::size_t n = 0; n < 10; ++n) CHECK(std::abs(q[n] - s.w[n]) < 1e-6);
    for (std::size_t n = 1; n < 8; ++n) CHECK(q[n] / q[n - 1] == doctest::Approx(s.u).epsilon(1e-4));
    CHECK(entropy_from_coefficients(q) == doctest::Approx(s.entropy).epsilon(1e-6));

    const std::vector<double> anti = quadrature_schmidt(2.0, -1.0, 200);
    CHECK(anti[3] == doctest::Approx(s.w[3]).epsilon(1e-6));

    const std::vector<double> prod = quadrature_schmidt(1.0, 0.0, 64);
    CHECK(prod[0] == doctest::Approx(1.0));
    CHECK(prod[1] < 1e-10);
}

TEST_CASE("under-resolved grids are reported") {
    CHECK_THROWS_AS(quadrature_schmidt(2.0, 1.99, 16), ResolutionWarning);
    CHECK_THROWS_AS(quadrature_schmidt(1.0, 1.0, 64), NonNormalizable);
}

TEST_CASE("gaussian-SVD basis overlap") {
    CHECK(gaussian_svd_overlap(2.0, 1.0, 0.3, 0.3) == doctest::Approx(std::sqrt(M_PI)));
    CHECK(gaussian_svd_overlap(2.0, 1.0, 0.0, 100.0) < 1e-300);
    CHECK(gaussian_svd_overlap(1e12, 0.0, 0.0, 1.0) < 1e-5);
    CHECK(gaussian_svd_overlap(1e6, 0.0, 0.0, 1.0) < gaussian_svd_overlap(1e2, 0.0, 0.0, 1.0));
    CHECK_THROWS_AS(gaussian_svd_overlap(1.0, 1.0, 0.0, 0.0), NonNormalizable);
}

TEST_CASE("Mehler identity") {
    CHECK(mehler_residual(0.3, -0.7, 0.5, 60) < 1e-12);
    CHECK(mehler_residual(0.3, -0.7, 0.5, 3) > 1e-3);
    CHECK_THROWS_AS(mehler_residual(0.0, 0.0, 1.0, 10), InvalidConfig);
}
