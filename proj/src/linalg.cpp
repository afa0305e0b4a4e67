#include "mvlab/linalg.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mvlab {

LUFactors lu_factor(const Endo& A) {
  LUFactors f;
  f.n = A.n;
  f.lu = A.m;
  const int n = A.n;
  auto lu = [&](int i, int j) -> double& { return f.lu[i * static_cast<std::size_t>(n) + j]; };
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::fabs(lu(c, c));
    for (int r = c + 1; r < n; ++r) {
      double v = std::fabs(lu(r, c));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(lu(c, j), lu(piv, j));
      std::swap(f.perm[c], f.perm[piv]);
      f.sign = -f.sign;
    }
    double d = lu(c, c);
    if (d == 0.0) continue;  // singular; det() will report 0
    for (int r = c + 1; r < n; ++r) {
      double m = lu(r, c) / d;
      lu(r, c) = m;
      if (m == 0.0) continue;
      for (int j = c + 1; j < n; ++j) lu(r, j) -= m * lu(c, j);
    }
  }
  return f;
}

double LUFactors::det() const {
  double d = sign;
  for (int i = 0; i < n; ++i) d *= lu[i * static_cast<std::size_t>(n) + i];
  return d;
}

double lu_det(const Endo& A) { return lu_factor(A).det(); }

void lu_solve(const LUFactors& f, const double* b, double* x) {
  const int n = f.n;
  auto lu = [&](int i, int j) { return f.lu[i * static_cast<std::size_t>(n) + j]; };
  double y[kMaxDim];
  for (int i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (int j = 0; j < i; ++j) s -= lu(i, j) * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    double d = lu(i, i);
    if (d == 0.0) throw std::invalid_argument("lu_solve: singular matrix");
    x[i] = s / d;
  }
}

Endo lu_inverse(const LUFactors& f) {
  Endo inv(f.n);
  double e[kMaxDim], col[kMaxDim];
  for (int j = 0; j < f.n; ++j) {
    for (int i = 0; i < f.n; ++i) e[i] = (i == j) ? 1.0 : 0.0;
    lu_solve(f, e, col);
    for (int i = 0; i < f.n; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

double cholesky(const double* a, int n, double* L) {
  assert(n >= 1);
  double det = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (s <= 0.0) throw std::invalid_argument("cholesky: matrix not positive definite");
        double d = std::sqrt(s);
        L[i * n + i] = d;
        det *= s;
      } else {
        L[i * n + j] = s / L[j * n + j];
        L[j * n + i] = 0.0;
      }
    }
  return det;
}

void cholesky_solve(const double* L, int n, const double* b, double* x) {
  // Forward then backward substitution, in place in x so any n works.
  // b == x is allowed: b[i] is consumed before x[i] is written and the
  // already-overwritten slots hold exactly the partial solution needed.
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= L[i * n + j] * x[j];
    x[i] = s / L[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= L[j * n + i] * x[j];
    x[i] = s / L[i * n + i];
  }
}

void cholesky_inverse(const double* L, int n, double* inv) {
  // Row j of the output is the in-place solve of the j-th basis vector; the
  // inverse is symmetric, so rows and columns agree. No scratch storage.
  for (int j = 0; j < n; ++j) {
    double* row = inv + static_cast<std::size_t>(j) * n;
    for (int i = 0; i < n; ++i) row[i] = (i == j) ? 1.0 : 0.0;
    cholesky_solve(L, n, row, row);
  }
}

Matrix Matrix::identity(int n) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) M.at(i, i) = 1.0;
  return M;
}

Matrix operator*(const Matrix& A, const Matrix& B) {
  assert(A.cols == B.rows);
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int l = 0; l < A.cols; ++l) {
      double a = A.at(i, l);
      if (a == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += a * B.at(l, j);
    }
  return C;
}

Matrix operator+(const Matrix& A, const Matrix& B) {
  assert(A.rows == B.rows && A.cols == B.cols);
  Matrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

Matrix operator-(const Matrix& A, const Matrix& B) {
  assert(A.rows == B.rows && A.cols == B.cols);
  Matrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
  return C;
}

Matrix operator*(double s, Matrix A) {
  for (double& v : A.a) v *= s;
  return A;
}

Matrix transpose(const Matrix& A) {
  Matrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

double trace(const Matrix& A) {
  assert(A.rows == A.cols);
  double t = 0.0;
  for (int i = 0; i < A.rows; ++i) t += A.at(i, i);
  return t;
}

KForm apply(const Matrix& A, const KForm& x, int out_k) {
  if (A.cols != x.size()) throw std::invalid_argument("apply: matrix/form size mismatch");
  KForm y(x.n, out_k);
  if (A.rows != y.size()) throw std::invalid_argument("apply: output degree mismatch");
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace mvlab
