#include "ctrg/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctrg/errors.hpp"

namespace ctrg {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const std::vector<double>& d) {
    Mat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Mat b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b, double scale) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = scale * b(i, j);
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw InternalInvariantViolation("matmul shape mismatch");
    Mat c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.data() + i * n;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Mat operator+(const Mat& a, const Mat& b) {
    Mat c = a;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) c.data()[i] += b.data()[i];
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    Mat c = a;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

Mat operator*(double s, const Mat& a) {
    Mat c = a;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) c.data()[i] *= s;
    return c;
}

Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) k.set_block(i * b.rows(), j * b.cols(), b, a(i, j));
    return k;
}

double frobenius(const Mat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) s += a.data()[i] * a.data()[i];
    return std::sqrt(s);
}

double max_abs(const Mat& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) m = std::max(m, std::abs(a.data()[i]));
    return m;
}

SymMatrix::SymMatrix(const Mat& m, double rel_tol) : m_(m.rows(), m.cols()) {
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidMatrix("not a non-empty square matrix");
    const std::size_t n = m.rows();
    double asym = 0.0;
    for (std::size_t i = 0; i < n * n; ++i)
        if (!std::isfinite(m.data()[i])) throw InvalidMatrix("non-finite entry");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
            set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
    if (asym > rel_tol * std::max(frobenius(m), 1e-300))
        throw InvalidMatrix("asymmetry " + std::to_string(asym));
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymSpectrum eig_sym(const SymMatrix& m) {
    const std::size_t n = m.dim();
    Mat a = m.mat();
    for (std::size_t i = 0; i < n * n; ++i)
        if (!std::isfinite(a.data()[i])) throw InvalidMatrix("non-finite entry");
    Mat vt = Mat::identity(n); // row p holds eigenvector p
    const double eps = 1e-16;
    const double norm = frobenius(a);
    const double floor_abs = 1e-300 + 1e-30 * norm * eps;

    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double app = a(p, p), aqq = a(q, q);
                if (std::abs(apq) <= std::max(eps * std::sqrt(std::abs(app * aqq)), floor_abs)) continue;
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                double* rp = a.data() + p * n;
                double* rq = a.data() + q * n;
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = rp[k], aqk = rq[k];
                    rp[k] = c * apk - s * aqk;
                    rq[k] = s * apk + c * aqk;
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                double* vp = vt.data() + p * n;
                double* vq = vt.data() + q * n;
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = vp[k], y = vq[k];
                    vp[k] = c * x - s * y;
                    vq[k] = s * x + c * y;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymSpectrum out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src);
        const double* v = vt.data() + src * n;
        double vmax = 0.0;
        for (std::size_t k = 0; k < n; ++k) vmax = std::max(vmax, std::abs(v[k]));
        std::size_t lead = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(v[k]) >= vmax * (1.0 - 1e-12)) {
                lead = k;
                break;
            }
        const double sgn = v[lead] < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = sgn * v[k];
    }
    return out;
}

InverseLogdet inv_logdet_sym(const SymMatrix& m, double pd_rel_tol) {
    const SymSpectrum sp = eig_sym(m);
    const std::size_t n = m.dim();
    const double top = sp.values.front();
    for (std::size_t i = 0; i < n; ++i)
        if (!(sp.values[i] > pd_rel_tol * top) || top <= 0.0) throw SingularMatrix(i, sp.values[i]);
    InverseLogdet r;
    r.inverse = SymMatrix(n);
    for (std::size_t i = 0; i < n; ++i) r.logdet += std::log(sp.values[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += sp.vectors(i, k) * sp.vectors(j, k) / sp.values[k];
            r.inverse.set(i, j, s);
        }
    return r;
}

SymMatrix inv_sym(const SymMatrix& m, double pd_rel_tol) { return inv_logdet_sym(m, pd_rel_tol).inverse; }

double logdet_sym(const SymMatrix& m, double pd_rel_tol) { return inv_logdet_sym(m, pd_rel_tol).logdet; }

std::vector<double> solve_sym(const SymMatrix& m, const std::vector<double>& rhs, double pd_rel_tol) {
    const SymMatrix inv = inv_sym(m, pd_rel_tol);
    std::vector<double> x(rhs.size(), 0.0);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        for (std::size_t j = 0; j < rhs.size(); ++j) x[i] += inv(i, j) * rhs[j];
    return x;
}

} // namespace ctrg
