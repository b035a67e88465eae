#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ctrg/quadrature.hpp"
#include "ctrg/tensor4.hpp"

using namespace ctrg;

namespace {

Tensor4 random_tensor(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Tensor4 t(n);
    for (double& x : t.v) x = g(rng);
    return t;
}

Mat random_mat(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
}

} // namespace

TEST_CASE("transform4 agrees with the direct sum") {
    std::mt19937_64 rng(11);
    const std::size_t n = 4, p = 3;
    const Tensor4 t = random_tensor(n, rng);
    const Mat m0 = random_mat(n, 2, rng), m = random_mat(n, p, rng);
    for (Backend b : {Backend::Serial, Backend::Parallel}) {
        Tensor4 out(2, p);
        transform4(t, m0, m, 0.5, out, b);
        double err = 0.0;
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t bb = 0; bb < p; ++bb)
                for (std::size_t c = 0; c < p; ++c)
                    for (std::size_t d = 0; d < p; ++d) {
                        double s = 0.0;
                        for (std::size_t i = 0; i < n; ++i)
                            for (std::size_t j = 0; j < n; ++j)
                                for (std::size_t k = 0; k < n; ++k)
                                    for (std::size_t l = 0; l < n; ++l)
                                        s += t(i, j, k, l) * m0(i, a) * m(j, bb) * m(k, c) * m(l, d);
                        err = std::max(err, std::abs(out(a, bb, c, d) - 0.5 * s));
                    }
        CHECK(err < 1e-12);
    }
}

TEST_CASE("parallel transform4 matches the serial reference") {
    std::mt19937_64 rng(12);
    const std::size_t shapes[][2] = {{5, 7}, {16, 16}, {16, 24}, {24, 16}, {24, 24}, {48, 36}};
    for (const auto& s : shapes) {
        const Tensor4 t = random_tensor(s[0], rng);
        const Mat m = random_mat(s[0], s[1], rng);
        Tensor4 a(s[1]), b(s[1]);
        for (double& x : a.v) x = 1.0;
        b.v = a.v;
        transform4(t, m, -1.5, a, Backend::Serial);
        transform4(t, m, -1.5, b, Backend::Parallel);
        double err = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a.v[i] - b.v[i]));
        INFO("n=" << s[0] << " p=" << s[1]);
        CHECK(err < 1e-11 * std::max(1.0, max_abs(a)));
    }
}

TEST_CASE("transform4 with a distinct leading map") {
    std::mt19937_64 rng(13);
    const Tensor4 t = random_tensor(20, rng);
    const Mat m0 = random_mat(20, 6, rng), m = random_mat(20, 18, rng);
    Tensor4 a(6, 18), b(6, 18);
    transform4(t, m0, m, 1.0, a, Backend::Serial);
    transform4(t, m0, m, 1.0, b, Backend::Parallel);
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a.v[i] - b.v[i]));
    CHECK(err < 1e-11 * max_abs(a));
}

TEST_CASE("pair contractions") {
    std::mt19937_64 rng(14);
    const Tensor4 t = random_tensor(9, rng);
    const Mat s = random_mat(9, 9, rng), s1 = random_mat(9, 9, rng);
    const Mat a = contract_pair(t, s, Backend::Serial), b = contract_pair(t, s, Backend::Parallel);
    CHECK(max_abs(a - b) == 0.0);
    double direct = 0.0;
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            for (std::size_t k = 0; k < 9; ++k)
                for (std::size_t l = 0; l < 9; ++l) direct += t(i, j, k, l) * s1(i, j) * s(k, l);
    CHECK(contract_full(t, s1, s) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("symmetrize is a projection") {
    std::mt19937_64 rng(15);
    const Tensor4 s = symmetrize(random_tensor(4, rng));
    CHECK(s(0, 1, 2, 3) == doctest::Approx(s(3, 2, 1, 0)));
    CHECK(s(0, 0, 1, 2) == doctest::Approx(s(1, 0, 2, 0)));
    const Tensor4 ss = symmetrize(s);
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(s.v[i] - ss.v[i]));
    CHECK(err < 1e-15);
}

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly") {
    const GaussRule r = gauss_hermite(12);
    // int t^(2k) exp(-t^2) = Gamma(k + 1/2)
    for (int k = 0; k < 12; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * k);
        CHECK(s == doctest::Approx(std::tgamma(k + 0.5)).epsilon(1e-13));
    }
    const GaussRule big = gauss_hermite(200);
    double norm = 0.0;
    for (double w : big.weights) norm += w;
    CHECK(norm == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    for (std::size_t i = 0; i < big.nodes.size(); ++i) CHECK(std::isfinite(big.scaled_weights[i]));
}
