#include "qshess/dense.hpp"

#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qshess {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::diag(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    DenseMatrix D(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = d[static_cast<size_t>(i)];
    return D;
}

DenseMatrix DenseMatrix::adjoint() const {
    DenseMatrix B(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) B(j, i) = std::conj((*this)(i, j));
    return B;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix B(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) B(j, i) = (*this)(i, j);
    return B;
}

DenseMatrix DenseMatrix::conj() const {
    DenseMatrix B(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) B.a[i] = std::conj(a[i]);
    return B;
}

DenseMatrix DenseMatrix::block(int r0, int r1, int c0, int c1) const {
    DenseMatrix B(r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
        for (int j = c0; j < c1; ++j) B(i - r0, j - c0) = (*this)(i, j);
    return B;
}

std::vector<cx> DenseMatrix::col(int j) const {
    std::vector<cx> v(static_cast<size_t>(rows));
    for (int i = 0; i < rows; ++i) v[static_cast<size_t>(i)] = (*this)(i, j);
    return v;
}

std::vector<cx> DenseMatrix::row(int i) const {
    std::vector<cx> v(static_cast<size_t>(cols));
    for (int j = 0; j < cols; ++j) v[static_cast<size_t>(j)] = (*this)(i, j);
    return v;
}

void DenseMatrix::set_col(int j, const std::vector<cx>& v) {
    for (int i = 0; i < rows; ++i) (*this)(i, j) = v[static_cast<size_t>(i)];
}

double DenseMatrix::norm_fro() const {
    double s = 0.0;
    for (const cx& z : a) s += std::norm(z);
    return std::sqrt(s);
}

double DenseMatrix::norm_max() const {
    double m = 0.0;
    for (const cx& z : a) m = std::max(m, std::abs(z));
    return m;
}

DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B) {
    DenseMatrix C(A.rows, B.cols);
    // i-k-j loop order keeps the inner loop contiguous in both B and C.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (A.rows >= 96)
#endif
    for (int i = 0; i < A.rows; ++i) {
        cx* ci = &C.a[static_cast<size_t>(i) * C.cols];
        for (int k = 0; k < A.cols; ++k) {
            const cx aik = A(i, k);
            if (aik == cx{}) continue;
            const cx* bk = &B.a[static_cast<size_t>(k) * B.cols];
            for (int j = 0; j < B.cols; ++j) ci[j] += aik * bk[j];
        }
    }
    return C;
}

DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B) {
    DenseMatrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
}

DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B) {
    DenseMatrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
    return C;
}

DenseMatrix operator*(cx s, const DenseMatrix& A) {
    DenseMatrix C = A;
    for (cx& z : C.a) z *= s;
    return C;
}

std::vector<cx> operator*(const DenseMatrix& A, const std::vector<cx>& v) {
    std::vector<cx> w(static_cast<size_t>(A.rows));
    for (int i = 0; i < A.rows; ++i) {
        cx s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * v[static_cast<size_t>(j)];
        w[static_cast<size_t>(i)] = s;
    }
    return w;
}

std::vector<cx> operator+(const std::vector<cx>& x, const std::vector<cx>& y) {
    std::vector<cx> z = x;
    for (size_t i = 0; i < z.size(); ++i) z[i] += y[i];
    return z;
}

std::vector<cx> operator-(const std::vector<cx>& x, const std::vector<cx>& y) {
    std::vector<cx> z = x;
    for (size_t i = 0; i < z.size(); ++i) z[i] -= y[i];
    return z;
}

cx dot_conj(const std::vector<cx>& x, const std::vector<cx>& y) {
    cx s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm2(const std::vector<cx>& v) {
    double s = 0.0;
    for (const cx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

} // namespace qshess
