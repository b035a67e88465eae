#pragma once

#include <cstddef>
#include <vector>

#include "ctrg/symlin.hpp"

namespace ctrg {

// Dense rank-4 array with shape (n0, n, n, n). Symmetric tensors have n0 == n.
struct Tensor4 {
    std::size_t n0 = 0, n = 0;
    std::vector<double> v;

    Tensor4() = default;
    explicit Tensor4(std::size_t dim) : n0(dim), n(dim), v(dim * dim * dim * dim, 0.0) {}
    Tensor4(std::size_t first, std::size_t dim) : n0(first), n(dim), v(first * dim * dim * dim, 0.0) {}

    std::size_t index(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        return ((a * n + b) * n + c) * n + d;
    }
    double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) { return v[index(a, b, c, d)]; }
    double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const { return v[index(a, b, c, d)]; }
    std::size_t size() const { return v.size(); }
};

enum class Backend { Serial, Parallel };

// out(a,b,c,d) += alpha * sum T(i,j,k,l) M0(i,a) M(j,b) M(k,c) M(l,d).
// T is square with T.n == M.rows() == M0.rows(); out has shape (M0.cols(), M.cols()).
void transform4(const Tensor4& t, const Mat& m0, const Mat& m, double alpha, Tensor4& out,
                Backend backend = Backend::Parallel);
inline void transform4(const Tensor4& t, const Mat& m, double alpha, Tensor4& out,
                       Backend backend = Backend::Parallel) {
    transform4(t, m, m, alpha, out, backend);
}

// C(i,j) = sum_kl T(i,j,k,l) S(k,l)
Mat contract_pair(const Tensor4& t, const Mat& s, Backend backend = Backend::Parallel);

// sum T(i,j,k,l) S1(i,j) S2(k,l)
double contract_full(const Tensor4& t, const Mat& s1, const Mat& s2, Backend backend = Backend::Parallel);

// Average over the 24 index permutations.
Tensor4 symmetrize(const Tensor4& t);

double max_abs(const Tensor4& t);

// Worker count for the parallel kernels: CONTINUUM_TRG_THREADS if set, else OpenMP default.
int kernel_threads();

} // namespace ctrg
