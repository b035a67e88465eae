#include "ctrg/schmidt.hpp"

#include <algorithm>
#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/quadrature.hpp"
#include "ctrg/symlin.hpp"

namespace ctrg {

namespace {

void check_kernel(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a > std::abs(b)))
        throw NonNormalizable("kernel needs a > |b|");
}

std::vector<double> nystrom_values(double a, double b, std::size_t n) {
    const GaussRule rule = gauss_hermite(n);
    const double s = std::sqrt(a / (a * a - b * b));
    const double reach = s * rule.nodes.back();
    if (reach < 6.0 / std::sqrt(a - std::abs(b)))
        throw ResolutionWarning("grid of " + std::to_string(n) + " nodes does not cover the kernel support");
    SymMatrix k(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double x = s * rule.nodes[i], y = s * rule.nodes[j];
            const double w = -0.5 * a * (x * x + y * y) + b * x * y;
            k.set(i, j, s * std::sqrt(rule.scaled_weights[i] * rule.scaled_weights[j]) * std::exp(w));
        }
    std::vector<double> v = eig_sym(k).values;
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end(), std::greater<>());
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

} // namespace

double schmidt_entropy(double u) {
    const double u2 = u * u;
    if (u2 == 0.0) return 0.0;
    return -std::log1p(-u2) - u2 * std::log(u2) / (1.0 - u2);
}

double entropy_from_coefficients(const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w)
        if (x != 0.0) s -= x * x * std::log(x * x);
    return s;
}

namespace {

SchmidtSpectrum tower(double u, std::size_t n_max) {
    SchmidtSpectrum out;
    out.u = u;
    const double lead = std::sqrt(1.0 - out.u * out.u);
    double p = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        out.w.push_back(lead * p);
        p *= out.u;
    }
    out.entropy = schmidt_entropy(out.u);
    return out;
}

} // namespace

SchmidtSpectrum schmidt_spectrum(double a, double b, std::size_t n_max) {
    check_kernel(a, b);
    return tower(b / a, n_max);
}

double mehler_ratio(double a, double b) {
    check_kernel(a, b);
    if (b == 0.0) return 0.0;
    return b / (a + std::sqrt((a - b) * (a + b)));
}

SchmidtSpectrum schmidt_spectrum_exact(double a, double b, std::size_t n_max) {
    return tower(mehler_ratio(a, b), n_max);
}

std::vector<double> quadrature_schmidt(double a, double b, std::size_t grid_size) {
    check_kernel(a, b);
    if (grid_size < 8) throw InvalidConfig("grid_size must be at least 8");
    const std::vector<double> full = nystrom_values(a, b, grid_size);
    const std::vector<double> half = nystrom_values(a, b, grid_size / 2);
    if (std::abs(full[0] - half[0]) > 1e-8 * full[0])
        throw ResolutionWarning("top singular value not converged against the half-size grid");
    return full;
}

double gaussian_svd_overlap(double a, double b, double p, double p_prime) {
    if (!(a > b)) throw NonNormalizable("overlap needs a > b");
    const double g = a - b, dp = p - p_prime;
    return std::sqrt(M_PI / g) * std::exp(-dp * dp / (4.0 * g));
}

double mehler_residual(double x, double y, double u, std::size_t terms) {
    if (!(std::abs(u) < 1.0)) throw InvalidConfig("Mehler identity needs |u| < 1");
    // sum u^n H_n(x) H_n(y) / (2^n n!) through h_n = H_n / sqrt(2^n n!)
    double hx0 = 1.0, hx1 = std::sqrt(2.0) * x, hy0 = 1.0, hy1 = std::sqrt(2.0) * y;
    double sum = 0.0, un = 1.0;
    for (std::size_t n = 0; n < terms; ++n) {
        sum += un * hx0 * hy0;
        un *= u;
        const double k = static_cast<double>(n + 1);
        const double hx2 = std::sqrt(2.0 / (k + 1.0)) * x * hx1 - std::sqrt(k / (k + 1.0)) * hx0;
        const double hy2 = std::sqrt(2.0 / (k + 1.0)) * y * hy1 - std::sqrt(k / (k + 1.0)) * hy0;
        hx0 = hx1;
        hx1 = hx2;
        hy0 = hy1;
        hy1 = hy2;
    }
    const double u2 = u * u, d = x - y;
    const double closed = std::exp(2.0 * u / (1.0 + u) * x * y - u2 / (1.0 - u2) * d * d) / std::sqrt(1.0 - u2);
    return std::abs(sum - closed);
}

} // namespace ctrg
