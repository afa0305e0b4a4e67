// Small dense linear algebra: LU with partial pivoting for n <= 8
// endomorphisms (determinant oracle, solves, inverses) and a general dense
// matrix for projector assembly on lex bases (up to C(8,4) = 70).
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mvlab/kform.hpp"

namespace mvlab {

/// LU factorization PA = LU with partial pivoting; determinant sign tracked
/// via the permutation parity.
struct LUFactors {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> lu{};
  std::array<int, kMaxDim> perm{};
  int sign = 1;

  double det() const;
};

LUFactors lu_factor(const Endo& A);
double lu_det(const Endo& A);
void lu_solve(const LUFactors& f, const double* b, double* x);
Endo lu_inverse(const LUFactors& f);

/// Unpivoted Cholesky of an SPD matrix (row-major, any n) into the lower
/// factor L; returns det(a). Used by pointwise kernels where the matrix is
/// id + S^T S with eigenvalues >= 1 (so no pivoting is ever needed) and by
/// the small Gauss-Newton normal systems.
double cholesky(const double* a, int n, double* L);
/// Solves a x = b from the factor L; b == x aliasing is allowed.
void cholesky_solve(const double* L, int n, const double* b, double* x);
void cholesky_inverse(const double* L, int n, double* inv);

/// Compensated accumulator for long grid sums.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double get() const { return s; }
};

/// Dense row-major matrix used for projector/operator matrices on lex bases.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  static Matrix identity(int n);

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

Matrix operator*(const Matrix& A, const Matrix& B);
Matrix operator+(const Matrix& A, const Matrix& B);
Matrix operator-(const Matrix& A, const Matrix& B);
Matrix operator*(double s, Matrix A);
Matrix transpose(const Matrix& A);
double trace(const Matrix& A);

/// y = A x for a KForm coefficient vector; degrees must match A's shape.
KForm apply(const Matrix& A, const KForm& x, int out_k);

/// Matrix of a linear map Lambda^{k_in} -> Lambda^{k_out} on R^n, built by
/// applying `fn` to every lex basis form.
template <typename Fn>
Matrix matrix_of(int n, int k_in, int k_out, Fn&& fn) {
  const auto& ti = MultiIndexTable::get(n, k_in);
  const auto& to = MultiIndexTable::get(n, k_out);
  Matrix M(to.size(), ti.size());
  for (int j = 0; j < ti.size(); ++j) {
    KForm e(n, k_in);
    e[j] = 1.0;
    KForm img = fn(e);
    for (int i = 0; i < to.size(); ++i) M.at(i, j) = img[i];
  }
  return M;
}

}  // namespace mvlab
