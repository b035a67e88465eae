#include "ctrg/wick.hpp"

#include <algorithm>
#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/quadrature.hpp"

namespace ctrg {

Polynomial4 Polynomial4::zero(std::size_t dim) {
    Polynomial4 p;
    p.c2 = Mat(dim, dim);
    p.phase.assign(dim, 0);
    return p;
}

double Polynomial4::evaluate(const std::vector<double>& w) const {
    const std::size_t n = dim();
    double s = c0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += c2(i, j) * w[i] * w[j];
    if (c4)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const double wijk = w[i] * w[j] * w[k];
                    for (std::size_t l = 0; l < n; ++l) s += (*c4)(i, j, k, l) * wijk * w[l];
                }
    return s;
}

double pair_moment(const Mat& g, std::size_t i, std::size_t j) {
    if (i >= g.rows() || j >= g.cols()) throw InvalidConfig("pair_moment index out of range");
    return g(i, j);
}

double quartic_moment(const Mat& g, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    const std::size_t n = g.rows();
    if (i >= n || j >= n || k >= n || l >= n) throw InvalidConfig("quartic_moment index out of range");
    return g(i, j) * g(k, l) + g(i, k) * g(j, l) + g(i, l) * g(j, k);
}

WickReduction wick_reduce(const Polynomial4& p, const Mat& sigma, bool imaginary, Backend backend) {
    const std::size_t n = p.dim();
    if (sigma.rows() != n || sigma.cols() != n) throw InternalInvariantViolation("wick_reduce: sigma shape");
    const double s2 = imaginary ? -1.0 : 1.0;
    WickReduction out;
    double r0 = p.c0;
    for (std::size_t i = 0; i < n * n; ++i) r0 += p.c2.data()[i] * sigma.data()[i];
    Mat r2 = p.c2;
    if (p.c4) {
        const Mat c = contract_pair(*p.c4, sigma, backend);
        for (std::size_t i = 0; i < n * n; ++i) {
            r0 += 3.0 * c.data()[i] * sigma.data()[i];
            r2.data()[i] += 6.0 * c.data()[i];
        }
    }
    out.r0 = r0;
    out.reduced.c2 = s2 * r2;
    out.reduced.c4 = p.c4;
    out.reduced.phase.assign(n, 0);
    return out;
}

Polynomial4 integrate_polynomial(const Polynomial4& p, const Mat& sigma, const ShiftMap& shift, Backend backend) {
    if (shift.lambda.rows() != p.dim()) throw InternalInvariantViolation("integrate_polynomial: shift shape");
    for (int ph : p.phase)
        if (ph != 0) throw PhaseBookkeepingError("inner indices must be real before integration");
    const WickReduction w = wick_reduce(p, sigma, shift.imaginary, backend);
    const std::size_t k = shift.lambda.cols();
    Polynomial4 out;
    out.c0 = w.r0;
    out.c2 = transpose(shift.lambda) * w.reduced.c2 * shift.lambda;
    if (p.c4) {
        auto t = std::make_shared<Tensor4>(k);
        transform4(*p.c4, shift.lambda, 1.0, *t, backend);
        out.c4 = t;
    }
    out.phase.assign(k, 0);
    return out;
}

namespace {

// Nodes of sigma^{1/2}-transformed tensor grid: w = V diag(sqrt(ev)) sqrt(2) t, weight prod w_i / pi^{d/2}.
template <class F>
void for_each_gaussian_node(const Mat& sigma, std::size_t points, F&& f) {
    const std::size_t d = sigma.rows();
    const SymSpectrum sp = eig_sym(SymMatrix(sigma));
    for (double ev : sp.values)
        if (ev < 0.0) throw InvalidMatrix("covariance is not positive semidefinite");
    const GaussRule rule = gauss_hermite(points);
    std::vector<std::size_t> ctr(d, 0);
    std::vector<double> w(d);
    const double norm = std::pow(M_PI, -0.5 * static_cast<double>(d));
    while (true) {
        double weight = norm;
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t a = 0; a < d; ++a) {
            weight *= rule.weights[ctr[a]];
            const double z = std::sqrt(2.0 * sp.values[a]) * rule.nodes[ctr[a]];
            for (std::size_t i = 0; i < d; ++i) w[i] += sp.vectors(i, a) * z;
        }
        f(w, weight);
        std::size_t a = 0;
        while (a < d && ++ctr[a] == points) ctr[a++] = 0;
        if (a == d) break;
    }
}

} // namespace

std::complex<double> shifted_expectation_quadrature(const Polynomial4& p, const Mat& sigma, const Mat& lambda,
                                                    const std::vector<double>& outer, std::size_t points) {
    const std::size_t d = p.dim();
    std::vector<std::complex<double>> v(d);
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < outer.size(); ++j) s += lambda(i, j) * outer[j];
        v[i] = std::complex<double>(0.0, s);
    }
    std::complex<double> acc = 0.0;
    std::vector<std::complex<double>> x(d);
    for_each_gaussian_node(sigma, points, [&](const std::vector<double>& eta, double weight) {
        for (std::size_t i = 0; i < d; ++i) x[i] = eta[i] + v[i];
        std::complex<double> s = p.c0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) s += p.c2(i, j) * x[i] * x[j];
        if (p.c4)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    for (std::size_t k = 0; k < d; ++k)
                        for (std::size_t l = 0; l < d; ++l) s += (*p.c4)(i, j, k, l) * x[i] * x[j] * x[k] * x[l];
        acc += weight * s;
    });
    return acc;
}

double moment_quadrature(const Mat& sigma, const std::vector<std::size_t>& idx, std::size_t points) {
    double acc = 0.0;
    for_each_gaussian_node(sigma, points, [&](const std::vector<double>& w, double weight) {
        double prod = weight;
        for (std::size_t i : idx) prod *= w[i];
        acc += prod;
    });
    return acc;
}

} // namespace ctrg
