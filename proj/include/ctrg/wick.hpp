#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "ctrg/symlin.hpp"
#include "ctrg/tensor4.hpp"

namespace ctrg {

// c0 + sum c2_ij w_i w_j + sum c4_ijkl w_i w_j w_k w_l. c4 may be null (zero) and is shared between
// polynomials that carry the same quartic part.
struct Polynomial4 {
    double c0 = 0.0;
    Mat c2;
    std::shared_ptr<const Tensor4> c4;
    std::vector<int> phase; // power of i carried by each index, 0 or 1

    std::size_t dim() const { return c2.rows(); }
    static Polynomial4 zero(std::size_t dim);
    double evaluate(const std::vector<double>& w) const;
};

// Inner fields w = eta + (i if imaginary) * lambda * p with eta ~ N(0, sigma).
struct ShiftMap {
    Mat lambda; // dim(w) x dim(p)
    bool imaginary = true;
};

double pair_moment(const Mat& g, std::size_t i, std::size_t j);
double quartic_moment(const Mat& g, std::size_t i, std::size_t j, std::size_t k, std::size_t l);

// Gaussian average over eta with the outer shift left symbolic:
// E[P(eta + s v)] = r0 + v.R2.v + R4.vvvv, s = i or 1. R4 is the input quartic part, shared.
struct WickReduction {
    double r0 = 0.0;
    Polynomial4 reduced; // c0 = 0, c2 = R2, c4 = R4
};
WickReduction wick_reduce(const Polynomial4& p, const Mat& sigma, bool imaginary = true,
                          Backend backend = Backend::Parallel);

// Full integration: the result is a polynomial in the outer fields p.
Polynomial4 integrate_polynomial(const Polynomial4& p, const Mat& sigma, const ShiftMap& shift,
                                 Backend backend = Backend::Parallel);

// Reference path in complex arithmetic: tensor Gauss-Hermite quadrature of E[P(eta + i lambda p)] at a
// given outer point. Exact for these polynomial degrees; used to bound the imaginary residue.
std::complex<double> shifted_expectation_quadrature(const Polynomial4& p, const Mat& sigma, const Mat& lambda,
                                                    const std::vector<double>& outer, std::size_t points = 4);

// E[w_idx0 w_idx1 ...] for w ~ N(0, sigma) by tensor Gauss-Hermite quadrature in the eigenbasis of sigma.
double moment_quadrature(const Mat& sigma, const std::vector<std::size_t>& idx, std::size_t points = 6);

} // namespace ctrg
