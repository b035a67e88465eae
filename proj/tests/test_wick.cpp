#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ctrg/errors.hpp"
#include "ctrg/wick.hpp"

using namespace ctrg;

namespace {

Mat random_spd(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = g(rng);
    return (1.0 / static_cast<double>(n)) * (a * transpose(a)) + 0.2 * Mat::identity(n);
}

Polynomial4 random_poly(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Polynomial4 p = Polynomial4::zero(n);
    p.c0 = g(rng);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) p.c2(i, j) = p.c2(j, i) = g(rng);
    auto t = std::make_shared<Tensor4>(n);
    for (double& x : t->v) x = g(rng);
    p.c4 = std::make_shared<Tensor4>(symmetrize(*t));
    return p;
}

} // namespace

TEST_CASE("unit kernel moments") {
    const Mat one = Mat::identity(1);
    CHECK(quartic_moment(one, 0, 0, 0, 0) == 3.0);
    CHECK(pair_moment(one, 0, 0) == 1.0);
    CHECK(moment_quadrature(one, {0, 0, 0, 0}) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("moments up to fourth order match quadrature on random kernels") {
    std::mt19937_64 rng(21);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const Mat s = random_spd(n, rng);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int q = 0; q < 5; ++q) {
            const std::size_t i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
            worst = std::max(worst, std::abs(pair_moment(s, i, j) - moment_quadrature(s, {i, j})));
            worst = std::max(worst, std::abs(quartic_moment(s, i, j, k, l) - moment_quadrature(s, {i, j, k, l})));
            CHECK(std::abs(moment_quadrature(s, {i})) < 1e-13);
            CHECK(std::abs(moment_quadrature(s, {i, j, k})) < 1e-12);
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("Wick reduction at zero shift is the gaussian average") {
    std::mt19937_64 rng(22);
    const Mat s = random_spd(3, rng);
    const Polynomial4 p = random_poly(3, rng);
    const WickReduction w = wick_reduce(p, s);
    double expect = p.c0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            expect += p.c2(i, j) * s(i, j);
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l) expect += (*p.c4)(i, j, k, l) * quartic_moment(s, i, j, k, l);
        }
    CHECK(w.r0 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(w.reduced.c4 == p.c4);
}

TEST_CASE("shifted integration matches complex quadrature with a vanishing imaginary part") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 3, m = 2;
        const Mat s = random_spd(n, rng);
        const Polynomial4 p = random_poly(n, rng);
        ShiftMap shift;
        shift.lambda = Mat(n, m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) shift.lambda(i, j) = g(rng);
        for (Backend b : {Backend::Serial, Backend::Parallel}) {
            const Polynomial4 out = integrate_polynomial(p, s, shift, b);
            const std::vector<double> outer{g(rng), g(rng)};
            const std::complex<double> ref = shifted_expectation_quadrature(p, s, shift.lambda, outer);
            CHECK(std::abs(ref.imag()) < 1e-12 * std::max(1.0, std::abs(ref.real())));
            CHECK(out.evaluate(outer) == doctest::Approx(ref.real()).epsilon(1e-11));
        }
    }
}

TEST_CASE("real shift") {
    std::mt19937_64 rng(24);
    const Mat s = random_spd(2, rng);
    Polynomial4 p = Polynomial4::zero(2);
    p.c2(0, 0) = 1.0;
    ShiftMap shift{Mat::identity(2), false};
    const Polynomial4 out = integrate_polynomial(p, s, shift);
    // E[(eta + p)^2] = s00 + p^2
    CHECK(out.evaluate({0.7, 0.0}) == doctest::Approx(s(0, 0) + 0.49).epsilon(1e-14));
}

TEST_CASE("phase bookkeeping") {
    Polynomial4 p = Polynomial4::zero(2);
    p.phase = {1, 0};
    ShiftMap shift{Mat::identity(2), true};
    CHECK_THROWS_AS(integrate_polynomial(p, Mat::identity(2), shift), PhaseBookkeepingError);
    CHECK_THROWS_AS(quartic_moment(Mat::identity(2), 0, 0, 0, 2), InvalidConfig);
}
