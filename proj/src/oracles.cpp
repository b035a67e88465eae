#include "ctrg/oracles.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ctrg/errors.hpp"
#include "ctrg/free_trg.hpp"
#include "ctrg/symlin.hpp"

namespace ctrg {

namespace {

// det K(k) = alpha - beta cos k2 with alpha = (4+m^2)^2 - 4(1+cos k1), beta = 4(1+cos k1).
struct Dispersion {
    double alpha, beta;
};

Dispersion dispersion(double m2, double k1) {
    const double c = 1.0 + std::cos(k1);
    const double s = 4.0 + m2;
    return {s * s - 4.0 * c, 4.0 * c};
}

double integrate_bz(double (*g)(double, double), double m2) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate([&](double k) { return g(m2, k); }, 0.0, M_PI, 15, 1e-14, &err);
}

double f0_integrand(double m2, double k1) {
    const Dispersion d = dispersion(m2, k1);
    const double disc = std::max((d.alpha - d.beta) * (d.alpha + d.beta), 0.0);
    return std::log(0.5 * (d.alpha + std::sqrt(disc)));
}

double g0_integrand(double m2, double k1) {
    const Dispersion d = dispersion(m2, k1);
    return (4.0 + m2) / std::sqrt((d.alpha - d.beta) * (d.alpha + d.beta));
}

void check_mass(double mass, bool allow_zero) {
    if (!std::isfinite(mass) || mass < 0.0 || (!allow_zero && mass == 0.0))
        throw InvalidConfig("mass out of range: " + std::to_string(mass));
}

} // namespace

double exact_f0(double mass) {
    check_mass(mass, true);
    return -kLog2Pi + integrate_bz(f0_integrand, mass * mass) / (2.0 * M_PI);
}

double link_variance(double mass) {
    check_mass(mass, false);
    return integrate_bz(g0_integrand, mass * mass) / M_PI;
}

double exact_f1(double mass) {
    const double g = link_variance(mass);
    return 6.0 * g * g;
}

double torus_f0(std::size_t side, double mass) {
    check_mass(mass, false);
    const double m2 = mass * mass, s = 4.0 + m2;
    double acc = 0.0;
    for (std::size_t a = 0; a < side; ++a)
        for (std::size_t b = 0; b < side; ++b) {
            const double k1 = 2.0 * M_PI * a / side, k2 = 2.0 * M_PI * b / side;
            acc += std::log(s * s - 4.0 * (1.0 + std::cos(k1)) * (1.0 + std::cos(k2)));
        }
    return -kLog2Pi + 0.5 * acc / static_cast<double>(side * side);
}

double torus_f1(std::size_t side, double mass) {
    check_mass(mass, false);
    const double m2 = mass * mass, s = 4.0 + m2;
    double g = 0.0;
    for (std::size_t a = 0; a < side; ++a)
        for (std::size_t b = 0; b < side; ++b) {
            const double k1 = 2.0 * M_PI * a / side, k2 = 2.0 * M_PI * b / side;
            g += s / (s * s - 4.0 * (1.0 + std::cos(k1)) * (1.0 + std::cos(k2)));
        }
    g /= static_cast<double>(side * side);
    return 6.0 * g * g;
}

BruteForceResult brute_force(std::size_t side, double mass, double kinetic) {
    check_mass(mass, false);
    const std::size_t L = side, n = 2 * L * L;
    if (L == 0 || n > 32) throw InvalidConfig("brute force supports at most 32 links");
    // horizontal link h(i,j) -> i*L+j, vertical v(i,j) -> L*L + i*L+j
    auto h = [&](std::size_t i, std::size_t j) { return (i % L) * L + (j % L); };
    auto v = [&](std::size_t i, std::size_t j) { return L * L + (i % L) * L + (j % L); };
    Mat k(n, n);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            const std::size_t legs[4] = {v(i, j), h(i, j), v(i, j + L - 1), h(i + L - 1, j)};
            for (int a = 0; a < 4; ++a) {
                const std::size_t p = legs[a], q = legs[(a + 1) % 4];
                k(p, p) += kinetic;
                k(q, q) += kinetic;
                k(p, q) -= kinetic;
                k(q, p) -= kinetic;
                k(p, p) += 0.5 * mass * mass;
            }
        }
    const InverseLogdet il = inv_logdet_sym(SymMatrix(k));
    BruteForceResult r;
    r.links = n;
    r.log_z = 0.5 * static_cast<double>(n) * kLog2Pi - 0.5 * il.logdet;
    r.df = 0.0;
    for (std::size_t l = 0; l < n; ++l) r.df += 3.0 * il.inverse(l, l) * il.inverse(l, l);
    return r;
}

double brute_force_logZ(std::size_t side, double mass, double kinetic) { return brute_force(side, mass, kinetic).log_z; }

double brute_force_df(std::size_t side, double mass, double kinetic) { return brute_force(side, mass, kinetic).df; }

} // namespace ctrg
