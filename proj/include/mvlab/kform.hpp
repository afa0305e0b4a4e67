// Dense k-forms on R^n (2 <= n <= 8) with the Euclidean metric and the
// orientation e^{0...n-1}: wedge, interior product, Hodge star, inner
// product, sharp/flat between 2-forms and skew endomorphisms, and the
// det(I + F#) evaluations (closed formula and LU oracle).
#pragma once

#include <array>
#include <initializer_list>
#include <string>
#include <vector>

#include "mvlab/multiindex.hpp"

namespace mvlab {

/// Degree-k form on R^n as a dense coefficient vector in lex basis order.
/// Degree-0 and degree-n forms are scalars (single coefficient).
struct KForm {
  int n = 0;
  int k = 0;
  std::vector<double> coeffs;

  KForm() = default;
  KForm(int n_, int k_);

  const MultiIndexTable& table() const { return MultiIndexTable::get(n, k); }
  int size() const { return static_cast<int>(coeffs.size()); }

  double& operator[](int r) { return coeffs[r]; }
  double operator[](int r) const { return coeffs[r]; }

  /// Single basis form c * e^{i1...ik}; indices need not be sorted, the
  /// coefficient picks up the permutation sign (duplicate indices -> 0).
  static KForm basis(int n, int k, std::initializer_list<int> idx, double c = 1.0);

  KForm& operator+=(const KForm& o);
  KForm& operator-=(const KForm& o);
  KForm& operator*=(double s);
};

KForm operator+(KForm a, const KForm& b);
KForm operator-(KForm a, const KForm& b);
KForm operator*(double s, KForm a);

/// Skew (or general) endomorphism of R^n acting on tangent vectors,
/// row-major n x n in a fixed-capacity buffer.
struct Endo {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> m{};

  Endo() = default;
  explicit Endo(int n_) : n(n_) {}
  static Endo identity(int n);

  double& at(int i, int j) { return m[i * static_cast<std::size_t>(n) + j]; }
  double at(int i, int j) const { return m[i * static_cast<std::size_t>(n) + j]; }
};

Endo operator*(const Endo& A, const Endo& B);
Endo operator+(const Endo& A, const Endo& B);
Endo operator-(const Endo& A, const Endo& B);

/// Pair of real forms standing for re + i*im, same (n, k).
struct ComplexKForm {
  KForm re, im;

  ComplexKForm() = default;
  ComplexKForm(KForm re_, KForm im_);
  explicit ComplexKForm(const KForm& re_);  // purely real
};

ComplexKForm operator+(const ComplexKForm& a, const ComplexKForm& b);
ComplexKForm wedge(const ComplexKForm& a, const ComplexKForm& b);
double norm2(const ComplexKForm& a);  // |re|^2 + |im|^2

// ------------------------------------------------------------- operations ---

/// Graded-antisymmetric product; sign from shuffle parity of the index merge.
KForm wedge(const KForm& a, const KForm& b);

/// a^p / with no factorial; wedge_pow(a, 0) = 1 (degree-0 form).
KForm wedge_pow(const KForm& a, int p);

/// Contraction i(v)a in the first slot; v has length n, a.k >= 1.
KForm interior(const std::vector<double>& v, const KForm& a);

/// Hodge star for the Euclidean metric, orientation e^{0...n-1};
/// ** = (-1)^{k(n-k)} id.
KForm hodge(const KForm& a);

/// <a,b> = *(a ^ *b); equals the coefficient dot product in the lex basis.
double inner(const KForm& a, const KForm& b);
double norm2(const KForm& a);

/// Skew endomorphism with g(F# u, v) = F(u, v); F must have degree 2.
Endo sharp(const KForm& F);

/// 1-form <-> vector: with the Euclidean metric both directions keep
/// coefficients; provided for readability at call sites.
std::vector<double> sharp_vec(const KForm& alpha);
KForm flat_vec(int n, const std::vector<double>& v);

/// Inverse of sharp: K♭(u,v) = g(Ku, v). With require_skew the input must be
/// skew-symmetric to tol; violations raise invalid-input carrying the
/// asymmetry norm |K + K^T|_F in the message.
KForm flat_skew(const Endo& K, bool require_skew = true, double tol = 1e-9);

/// det(I + F#) two ways: the closed formula sum_p |F^p/p!|^2 (truncating at
/// p = floor(n/2)) and an LU factorization with partial pivoting.
struct DetPair {
  double formula;
  double oracle;
};
DetPair det_one_plus(const KForm& F);

// ------------------------------------------------------------------- JSON ---

/// {"n":8,"k":2,"coeffs":[...]} with coefficients in lex order.
std::string to_json(const KForm& a);
KForm kform_from_json(const std::string& text);

}  // namespace mvlab
