#include "ctrg/tensor4.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Dense>
#include <omp.h>

#include "ctrg/errors.hpp"

namespace ctrg {

int kernel_threads() {
    if (const char* env = std::getenv("CONTINUUM_TRG_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
}

namespace {

void check_shapes(const Tensor4& t, const Mat& m0, const Mat& m, const Tensor4& out) {
    if (t.n0 != t.n || m.rows() != t.n || m0.rows() != t.n)
        throw InternalInvariantViolation("transform4 input shape");
    if (out.n0 != m0.cols() || out.n != m.cols()) throw InternalInvariantViolation("transform4 output shape");
}

void transform_serial(const Tensor4& t, const Mat& m0, const Mat& m, double alpha, Tensor4& out) {
    const std::size_t n = t.n, p = m.cols(), p0 = m0.cols();
    std::vector<double> x1(n * n * n * p, 0.0), x2(n * n * p * p, 0.0), x3(n * p * p * p, 0.0);
    for (std::size_t ijk = 0; ijk < n * n * n; ++ijk)
        for (std::size_t l = 0; l < n; ++l) {
            const double tv = t.v[ijk * n + l];
            for (std::size_t d = 0; d < p; ++d) x1[ijk * p + d] += tv * m(l, d);
        }
    for (std::size_t ij = 0; ij < n * n; ++ij)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t c = 0; c < p; ++c)
                for (std::size_t d = 0; d < p; ++d) x2[(ij * p + c) * p + d] += m(k, c) * x1[(ij * n + k) * p + d];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t b = 0; b < p; ++b)
                for (std::size_t cd = 0; cd < p * p; ++cd)
                    x3[(i * p + b) * p * p + cd] += m(j, b) * x2[(i * n + j) * p * p + cd];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p0; ++a)
            for (std::size_t bcd = 0; bcd < p * p * p; ++bcd)
                out.v[a * p * p * p + bcd] += alpha * m0(i, a) * x3[i * p * p * p + bcd];
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RowMat>;
using MapM = Eigen::Map<RowMat>;

void transform_parallel(const Tensor4& t, const Mat& m0, const Mat& m, double alpha, Tensor4& out) {
    const Eigen::Index n = static_cast<Eigen::Index>(t.n), p = static_cast<Eigen::Index>(m.cols());
    const Eigen::Index p0 = static_cast<Eigen::Index>(m0.cols()), p3 = p * p * p;
    const Eigen::Index budget = Eigen::Index(1) << 25; // doubles held by one slab
    const Eigen::Index nb = std::max<Eigen::Index>(1, std::min(n, budget / std::max<Eigen::Index>(p3, 1)));
    const MapC mm(m.data(), n, p), mm0(m0.data(), n, p0);
    const RowMat mt = mm.transpose();
    std::vector<double> slab(static_cast<std::size_t>(nb * p3));
    const int threads = kernel_threads();
    MapM o(out.v.data(), p0, p3);

    for (Eigen::Index i0 = 0; i0 < n; i0 += nb) {
        const Eigen::Index cnt = std::min(nb, n - i0);
#pragma omp parallel num_threads(threads)
        {
            RowMat x(n * n, p), y(n, p * p);
#pragma omp for schedule(static)
            for (Eigen::Index ii = 0; ii < cnt; ++ii) {
                // x(jk, d) = sum_l T_i(jk, l) M(l, d)
                x.noalias() = MapC(t.v.data() + (i0 + ii) * n * n * n, n * n, n) * mm;
                // y(j, cd) = sum_k M(k, c) x(j, k, d)
                for (Eigen::Index j = 0; j < n; ++j) {
                    MapM yj(y.data() + j * p * p, p, p);
                    yj.noalias() = mt * MapC(x.data() + j * n * p, n, p);
                }
                // s(b, cd) = sum_j M(j, b) y(j, cd)
                MapM(slab.data() + ii * p3, p, p * p).noalias() = mt * y;
            }
        }
        // out(a, bcd) += alpha sum_i M0(i, a) s_i(bcd)
        o.noalias() += alpha * mm0.middleRows(i0, cnt).transpose() * MapC(slab.data(), cnt, p3);
    }
}

} // namespace

void transform4(const Tensor4& t, const Mat& m0, const Mat& m, double alpha, Tensor4& out, Backend backend) {
    check_shapes(t, m0, m, out);
    if (backend == Backend::Serial)
        transform_serial(t, m0, m, alpha, out);
    else
        transform_parallel(t, m0, m, alpha, out);
}

Mat contract_pair(const Tensor4& t, const Mat& s, Backend backend) {
    const std::size_t n = t.n, n2 = t.n * t.n;
    if (s.rows() != n || s.cols() != n) throw InternalInvariantViolation("contract_pair shape");
    Mat c(t.n0, n);
    const long long rows = static_cast<long long>(t.n0 * n);
    auto row = [&](long long r) {
        const double* tr = t.v.data() + r * n2;
        double acc = 0.0;
        for (std::size_t kl = 0; kl < n2; ++kl) acc += tr[kl] * s.data()[kl];
        c.data()[r] = acc;
    };
    if (backend == Backend::Serial) {
        for (long long r = 0; r < rows; ++r) row(r);
    } else {
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
        for (long long r = 0; r < rows; ++r) row(r);
    }
    return c;
}

double contract_full(const Tensor4& t, const Mat& s1, const Mat& s2, Backend backend) {
    const Mat c = contract_pair(t, s2, backend);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.rows() * c.cols(); ++i) acc += c.data()[i] * s1.data()[i];
    return acc;
}

Tensor4 symmetrize(const Tensor4& t) {
    if (t.n0 != t.n) throw InternalInvariantViolation("symmetrize needs a square tensor");
    const std::size_t n = t.n;
    Tensor4 s(n);
    static const std::array<std::array<int, 4>, 24> perms = [] {
        std::array<std::array<int, 4>, 24> p{};
        std::array<int, 4> q{0, 1, 2, 3};
        for (int k = 0; k < 24; ++k) {
            p[k] = q;
            std::next_permutation(q.begin(), q.end());
        }
        return p;
    }();
    std::array<std::size_t, 4> idx{};
    for (idx[0] = 0; idx[0] < n; ++idx[0])
        for (idx[1] = 0; idx[1] < n; ++idx[1])
            for (idx[2] = 0; idx[2] < n; ++idx[2])
                for (idx[3] = 0; idx[3] < n; ++idx[3]) {
                    double acc = 0.0;
                    for (const auto& p : perms) acc += t(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]);
                    s(idx[0], idx[1], idx[2], idx[3]) = acc / 24.0;
                }
    return s;
}

double max_abs(const Tensor4& t) {
    double m = 0.0;
    for (double x : t.v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace ctrg
