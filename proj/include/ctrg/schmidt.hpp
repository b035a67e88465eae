#pragma once

#include <cstddef>
#include <vector>

namespace ctrg {

// Two-site kernel W(x1, x2) = rho exp(-a (x1^2 + x2^2) / 2 + b x1 x2).
struct SchmidtSpectrum {
    double u = 0.0;
    std::vector<double> w; // w_n = sqrt(1 - u^2) u^n, n = 0..n_max
    double entropy = 0.0;
};

// u = b/a as written for the two-site kernel.
SchmidtSpectrum schmidt_spectrum(double a, double b, std::size_t n_max);

// Ratio of consecutive singular values of the kernel: b/a = 2t/(1+t^2), t = (a - sqrt(a^2-b^2))/b.
double mehler_ratio(double a, double b);
// Same tower with u = mehler_ratio(a, b); this is what a numerical SVD of W returns.
SchmidtSpectrum schmidt_spectrum_exact(double a, double b, std::size_t n_max);

double schmidt_entropy(double u);
// -sum w_n^2 log w_n^2
double entropy_from_coefficients(const std::vector<double>& w);

// Descending singular values of the normalized kernel, Nystrom discretization on a Gauss-Hermite grid.
// Throws ResolutionWarning when the grid misses the kernel support or the top values move against a
// half-size grid.
std::vector<double> quadrature_schmidt(double a, double b, std::size_t grid_size);

// <p, a-b | p', a-b> for the non-orthogonal gaussian-SVD basis.
double gaussian_svd_overlap(double a, double b, double p, double p_prime);

// |partial Hermite-polynomial Mehler sum - closed form| at (x, y, u) with the given number of terms.
double mehler_residual(double x, double y, double u, std::size_t terms);

} // namespace ctrg
