#pragma once

#include <cstddef>
#include <vector>

namespace ctrg {

// Dense row-major real matrix.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : r_(rows), c_(cols), a_(rows * cols, fill) {}

    static Mat identity(std::size_t n);
    static Mat diag(const std::vector<double>& d);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Mat& b, double scale = 1.0);

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Mat transpose(const Mat& a);
Mat kron(const Mat& a, const Mat& b);
double frobenius(const Mat& a);
double max_abs(const Mat& a);

// Symmetric matrix: setters write both triangles so storage stays exactly symmetric.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : m_(n, n) {}
    // Accepts a numerically symmetric input and stores its symmetric part.
    // Throws InvalidMatrix if the asymmetry exceeds rel_tol times the norm or entries are not finite.
    explicit SymMatrix(const Mat& m, double rel_tol = 1e-9);

    static SymMatrix identity(std::size_t n);

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }
    const Mat& mat() const { return m_; }

private:
    Mat m_;
};

struct SymSpectrum {
    std::vector<double> values; // descending
    Mat vectors;                // column j pairs with values[j]
};

// Cyclic Jacobi. Rotations are skipped once |a_pq| <= eps*sqrt(|a_pp a_qq|), which keeps
// relative accuracy on graded positive definite matrices.
SymSpectrum eig_sym(const SymMatrix& m);

struct InverseLogdet {
    SymMatrix inverse;
    double logdet = 0.0;
};

// pd_rel_tol: eigenvalues must exceed pd_rel_tol times the largest one.
InverseLogdet inv_logdet_sym(const SymMatrix& m, double pd_rel_tol = 1e-12);
SymMatrix inv_sym(const SymMatrix& m, double pd_rel_tol = 1e-12);
double logdet_sym(const SymMatrix& m, double pd_rel_tol = 1e-12);
std::vector<double> solve_sym(const SymMatrix& m, const std::vector<double>& rhs, double pd_rel_tol = 1e-12);

} // namespace ctrg
