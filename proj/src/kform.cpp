#include "mvlab/kform.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mvlab/linalg.hpp"

namespace mvlab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Parity sign of merging two disjoint index sets given as bitmasks:
/// (-1)^{#{(i,j) in I x J : i > j}}.
int merge_sign(std::uint32_t maskI, std::uint32_t maskJ) {
  int inv = 0;
  while (maskI) {
    std::uint32_t i = maskI & (~maskI + 1);  // lowest set bit of I
    inv += std::popcount(maskJ & (i - 1));   // elements of J below it
    maskI ^= i;
  }
  return (inv & 1) ? -1 : 1;
}

}  // namespace

KForm::KForm(int n_, int k_) : n(n_), k(k_) {
  require(n >= 0 && n <= kMaxDim && k >= 0 && k <= n, "KForm: need 0 <= k <= n <= 8");
  coeffs.assign(binomial(n, k), 0.0);
}

KForm KForm::basis(int n, int k, std::initializer_list<int> idx, double c) {
  require(static_cast<int>(idx.size()) == k, "KForm::basis: index count != k");
  KForm f(n, k);
  std::uint32_t mask = 0;
  int sign = 1;
  // insertion-sort the indices, tracking the permutation parity
  std::vector<int> v(idx);
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i] >= 0 && v[i] < n, "KForm::basis: index out of range");
    for (std::size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
      std::swap(v[j], v[j - 1]);
      sign = -sign;
    }
  }
  for (int x : v) {
    if (mask & (1u << x)) return f;  // repeated index: zero form
    mask |= 1u << x;
  }
  f[f.table().rank_of_bits(mask)] = sign * c;
  return f;
}

KForm& KForm::operator+=(const KForm& o) {
  require(n == o.n && k == o.k, "KForm +=: degree/dimension mismatch");
  for (int i = 0; i < size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

KForm& KForm::operator-=(const KForm& o) {
  require(n == o.n && k == o.k, "KForm -=: degree/dimension mismatch");
  for (int i = 0; i < size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

KForm& KForm::operator*=(double s) {
  for (double& c : coeffs) c *= s;
  return *this;
}

KForm operator+(KForm a, const KForm& b) { return a += b; }
KForm operator-(KForm a, const KForm& b) { return a -= b; }
KForm operator*(double s, KForm a) { return a *= s; }

Endo Endo::identity(int n) {
  Endo e(n);
  for (int i = 0; i < n; ++i) e.at(i, i) = 1.0;
  return e;
}

Endo operator*(const Endo& A, const Endo& B) {
  assert(A.n == B.n);
  Endo C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int l = 0; l < A.n; ++l) {
      double a = A.at(i, l);
      if (a == 0.0) continue;
      for (int j = 0; j < A.n; ++j) C.at(i, j) += a * B.at(l, j);
    }
  return C;
}

Endo operator+(const Endo& A, const Endo& B) {
  assert(A.n == B.n);
  Endo C(A.n);
  for (int i = 0; i < A.n * A.n; ++i) C.m[i] = A.m[i] + B.m[i];
  return C;
}

Endo operator-(const Endo& A, const Endo& B) {
  assert(A.n == B.n);
  Endo C(A.n);
  for (int i = 0; i < A.n * A.n; ++i) C.m[i] = A.m[i] - B.m[i];
  return C;
}

ComplexKForm::ComplexKForm(KForm re_, KForm im_) : re(std::move(re_)), im(std::move(im_)) {
  require(re.n == im.n && re.k == im.k, "ComplexKForm: re/im degree mismatch");
}

ComplexKForm::ComplexKForm(const KForm& re_) : re(re_), im(re_.n, re_.k) {}

ComplexKForm operator+(const ComplexKForm& a, const ComplexKForm& b) {
  return {a.re + b.re, a.im + b.im};
}

ComplexKForm wedge(const ComplexKForm& a, const ComplexKForm& b) {
  return {wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re)};
}

double norm2(const ComplexKForm& a) { return norm2(a.re) + norm2(a.im); }

KForm wedge(const KForm& a, const KForm& b) {
  require(a.n == b.n, "wedge: dimension mismatch");
  require(a.k + b.k <= a.n, "wedge: degree overflow");
  const auto& ta = a.table();
  const auto& tb = b.table();
  KForm out(a.n, a.k + b.k);
  const auto& to = out.table();
  for (int i = 0; i < ta.size(); ++i) {
    double ca = a[i];
    if (ca == 0.0) continue;
    std::uint32_t mi = ta.bits(i);
    for (int j = 0; j < tb.size(); ++j) {
      double cb = b[j];
      if (cb == 0.0) continue;
      std::uint32_t mj = tb.bits(j);
      if (mi & mj) continue;
      out[to.rank_of_bits(mi | mj)] += merge_sign(mi, mj) * ca * cb;
    }
  }
  return out;
}

KForm wedge_pow(const KForm& a, int p) {
  require(p >= 0 && a.k * p <= a.n, "wedge_pow: degree overflow");
  KForm acc(a.n, 0);
  acc[0] = 1.0;
  for (int i = 0; i < p; ++i) acc = wedge(acc, a);
  return acc;
}

KForm interior(const std::vector<double>& v, const KForm& a) {
  require(static_cast<int>(v.size()) == a.n, "interior: vector length != n");
  require(a.k >= 1, "interior: degree-0 form");
  const auto& ta = a.table();
  KForm out(a.n, a.k - 1);
  const auto& to = out.table();
  for (int r = 0; r < ta.size(); ++r) {
    double c = a[r];
    if (c == 0.0) continue;
    const MultiIndex& idx = ta[r];
    std::uint32_t mask = ta.bits(r);
    int sign = 1;
    for (int pos = 0; pos < a.k; ++pos) {
      double vc = v[idx[pos]];
      if (vc != 0.0) out[to.rank_of_bits(mask ^ (1u << idx[pos]))] += sign * vc * c;
      sign = -sign;
    }
  }
  return out;
}

KForm hodge(const KForm& a) {
  const auto& ta = a.table();
  KForm out(a.n, a.n - a.k);
  const auto& to = out.table();
  const std::uint32_t full = (1u << a.n) - 1;
  for (int r = 0; r < ta.size(); ++r) {
    double c = a[r];
    if (c == 0.0) continue;
    std::uint32_t mask = ta.bits(r);
    std::uint32_t comp = full ^ mask;
    out[to.rank_of_bits(comp)] += merge_sign(mask, comp) * c;
  }
  return out;
}

double inner(const KForm& a, const KForm& b) {
  require(a.n == b.n && a.k == b.k, "inner: degree/dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const KForm& a) { return inner(a, a); }

Endo sharp(const KForm& F) {
  require(F.k == 2, "sharp: need a 2-form");
  Endo M(F.n);
  const auto& t = F.table();
  for (int r = 0; r < t.size(); ++r) {
    int i = t[r][0], j = t[r][1];  // i < j, F(e_i, e_j) = coeff
    // g(F# e_j, e_i) = F(e_j, e_i): column j row i gets -coeff, and
    // column i row j gets +coeff.
    M.at(i, j) = -F[r];
    M.at(j, i) = F[r];
  }
  return M;
}

std::vector<double> sharp_vec(const KForm& alpha) {
  require(alpha.k == 1, "sharp_vec: need a 1-form");
  return alpha.coeffs;
}

KForm flat_vec(int n, const std::vector<double>& v) {
  require(static_cast<int>(v.size()) == n, "flat_vec: length mismatch");
  KForm a(n, 1);
  a.coeffs = v;
  return a;
}

KForm flat_skew(const Endo& K, bool require_skew, double tol) {
  if (require_skew) {
    double asym2 = 0.0;
    for (int i = 0; i < K.n; ++i)
      for (int j = 0; j < K.n; ++j) {
        double d = K.at(i, j) + K.at(j, i);
        asym2 += d * d;
      }
    if (std::sqrt(asym2) > tol) {
      std::ostringstream os;
      os << "flat_skew: input not skew-symmetric, |K + K^T|_F = " << std::sqrt(asym2);
      throw std::invalid_argument(os.str());
    }
  }
  KForm F(K.n, 2);
  const auto& t = F.table();
  for (int r = 0; r < t.size(); ++r) {
    int i = t[r][0], j = t[r][1];
    // F(e_i, e_j) = g(K e_i, e_j) = (K e_i)_j; antisymmetrize for robustness
    // when require_skew is off.
    F[r] = 0.5 * (K.at(j, i) - K.at(i, j));
  }
  return F;
}

DetPair det_one_plus(const KForm& F) {
  require(F.k == 2, "det_one_plus: need a 2-form");
  DetPair d{};
  // Closed formula: det(I + F#) = sum_p |F^p / p!|^2, p <= floor(n/2).
  d.formula = 1.0;
  KForm pw = F;
  double fact = 1.0;
  for (int p = 1; 2 * p <= F.n; ++p) {
    if (p > 1) pw = wedge(pw, F);
    fact *= p;
    d.formula += norm2(pw) / (fact * fact);
  }
  // Oracle: LU with partial pivoting on I + F#.
  Endo A = sharp(F);
  for (int i = 0; i < F.n; ++i) A.at(i, i) += 1.0;
  d.oracle = lu_det(A);
  return d;
}

std::string to_json(const KForm& a) {
  nlohmann::json j;
  j["n"] = a.n;
  j["k"] = a.k;
  j["coeffs"] = a.coeffs;
  return j.dump();
}

KForm kform_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  KForm a(j.at("n").get<int>(), j.at("k").get<int>());
  auto c = j.at("coeffs").get<std::vector<double>>();
  require(c.size() == a.coeffs.size(), "kform_from_json: coeffs length != C(n,k)");
  a.coeffs = std::move(c);
  return a;
}

}  // namespace mvlab
