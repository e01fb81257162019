#pragma once

#include <vector>

#include "qshess/types.hpp"

namespace qshess {

// Row-major complex dense matrix. This is deliberately plain: the dense side
// of the project exists to cross-check the structured side, so it favors
// obviousness over speed everywhere except multiply.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cx> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static DenseMatrix identity(int n);
    static DenseMatrix diag(const std::vector<double>& d);

    DenseMatrix adjoint() const;
    DenseMatrix transpose() const;
    DenseMatrix conj() const;

    // Rows [r0, r1) and columns [c0, c1).
    DenseMatrix block(int r0, int r1, int c0, int c1) const;

    std::vector<cx> col(int j) const;
    std::vector<cx> row(int i) const;
    void set_col(int j, const std::vector<cx>& v);

    double norm_fro() const;
    double norm_max() const;
};

DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator*(cx s, const DenseMatrix& A);
std::vector<cx> operator*(const DenseMatrix& A, const std::vector<cx>& v);

std::vector<cx> operator+(const std::vector<cx>& x, const std::vector<cx>& y);
std::vector<cx> operator-(const std::vector<cx>& x, const std::vector<cx>& y);
cx dot_conj(const std::vector<cx>& x, const std::vector<cx>& y); // sum conj(x_i) y_i
double norm2(const std::vector<cx>& v);

} // namespace qshess
