// Tests for the dense exterior-algebra layer: multi-index tables, wedge,
// interior product, Hodge star, musical isomorphisms, and the det(I + F#)
// expansion.  Every operator is checked against an independently coded
// oracle (merge-sign combinatorics, permutation evaluation, cofactor
// determinants) rather than against the library's own internals.

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mvlab/kform.hpp"
#include "mvlab/multiindex.hpp"
#include "mvlab/rng.hpp"

namespace {

using mvlab::Endo;
using mvlab::KForm;
using mvlab::MultiIndex;
using mvlab::MultiIndexTable;
using mvlab::Rng;

/** Uniform random k-form with coefficients in [-range, range]. */
KForm random_form(int n, int k, Rng& rng, double range = 1.0) {
  KForm a(n, k);
  for (int r = 0; r < a.size(); ++r) a[r] = rng.uniform(-range, range);
  return a;
}

/** Uniform random vector in [-range, range]^n. */
std::vector<double> random_vector(int n, Rng& rng, double range = 1.0) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(-range, range);
  return v;
}

/** Sign of the permutation sorting (I, J) into increasing order; 0 on duplicates. */
int merge_sign(const std::vector<int>& I, const std::vector<int>& J, std::vector<int>* merged) {
  std::vector<int> m = I;
  m.insert(m.end(), J.begin(), J.end());
  int sign = 1;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m[i] == m[j]) return 0;
      if (m[i] > m[j]) sign = -sign;
    }
  std::sort(m.begin(), m.end());
  *merged = m;
  return sign;
}

/** First k entries of a table row as plain ints. */
std::vector<int> row_indices(const MultiIndexTable& t, int r, int k) {
  std::vector<int> out(k);
  for (int s = 0; s < k; ++s) out[s] = t[r][s];
  return out;
}

/** Wedge product computed purely from merge-sign combinatorics. */
KForm wedge_oracle(const KForm& a, const KForm& b) {
  KForm out(a.n, a.k + b.k);
  const MultiIndexTable& ta = a.table();
  const MultiIndexTable& tb = b.table();
  const MultiIndexTable& to = out.table();
  for (int r = 0; r < a.size(); ++r)
    for (int s = 0; s < b.size(); ++s) {
      std::vector<int> merged;
      int sign = merge_sign(row_indices(ta, r, a.k), row_indices(tb, s, b.k), &merged);
      if (sign == 0) continue;
      MultiIndex idx{};
      for (std::size_t i = 0; i < merged.size(); ++i) idx[i] = static_cast<std::uint8_t>(merged[i]);
      out[to.rank(idx)] += sign * a[r] * b[s];
    }
  return out;
}

/** Determinant by cofactor expansion (independent of the library's LU). */
double cofactor_det(const std::vector<double>& m, int n) {
  if (n == 1) return m[0];
  double det = 0.0, sign = 1.0;
  for (int c = 0; c < n; ++c) {
    std::vector<double> sub((n - 1) * (n - 1));
    for (int i = 1; i < n; ++i) {
      int jj = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        sub[(i - 1) * (n - 1) + jj++] = m[i * n + j];
      }
    }
    det += sign * m[c] * cofactor_det(sub, n - 1);
    sign = -sign;
  }
  return det;
}

/** Evaluates a k-form on k vectors via sum of basis minors. */
double evaluate(const KForm& a, const std::vector<std::vector<double>>& v) {
  const MultiIndexTable& t = a.table();
  double total = 0.0;
  for (int r = 0; r < a.size(); ++r) {
    const MultiIndex& idx = t[r];
    int k = a.k;
    std::vector<double> m(k * k);
    for (int s = 0; s < k; ++s)
      for (int c = 0; c < k; ++c) m[s * k + c] = v[c][idx[s]];
    total += a[r] * cofactor_det(m, k);
  }
  return total;
}

/** Permutation sign via inversion count. */
int perm_sign(const std::vector<int>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

TEST(MultiIndexTable, LexOrderAndRanks) {
  for (int n = 2; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      const MultiIndexTable& t = MultiIndexTable::get(n, k);
      ASSERT_EQ(t.size(), mvlab::binomial(n, k));
      for (int r = 0; r < t.size(); ++r) {
        const MultiIndex& idx = t[r];
        for (int s = 0; s + 1 < k; ++s) ASSERT_LT(idx[s], idx[s + 1]);
        ASSERT_EQ(t.rank(idx), r);
        std::uint32_t mask = 0;
        for (int s = 0; s < k; ++s) mask |= 1u << idx[s];
        ASSERT_EQ(t.bits(r), mask);
        ASSERT_EQ(t.rank_of_bits(mask), r);
      }
      // Lexicographic: each row strictly after its predecessor.
      for (int r = 1; r < t.size(); ++r) {
        std::vector<int> prev = row_indices(t, r - 1, k);
        std::vector<int> cur = row_indices(t, r, k);
        ASSERT_TRUE(std::lexicographical_compare(prev.begin(), prev.end(), cur.begin(), cur.end()));
      }
    }
}

TEST(MultiIndexTable, Binomial) {
  ASSERT_EQ(mvlab::binomial(8, 4), 70);
  ASSERT_EQ(mvlab::binomial(8, 0), 1);
  ASSERT_EQ(mvlab::binomial(7, 3), 35);
  ASSERT_EQ(mvlab::binomial(6, 2), 15);
}

TEST(KFormBasis, PermutationSigns) {
  KForm a = KForm::basis(4, 2, {1, 0}, 1.0);  // e^1 ^ e^0 = -e^{01}
  KForm b = KForm::basis(4, 2, {0, 1}, -1.0);
  for (int r = 0; r < a.size(); ++r) ASSERT_DOUBLE_EQ(a[r], b[r]);

  KForm c = KForm::basis(5, 3, {4, 0, 2}, 2.0);  // two transpositions: +e^{024}
  KForm d = KForm::basis(5, 3, {0, 2, 4}, 2.0);
  for (int r = 0; r < c.size(); ++r) ASSERT_DOUBLE_EQ(c[r], d[r]);

  KForm z = KForm::basis(5, 2, {3, 3}, 1.0);  // repeated index vanishes
  for (int r = 0; r < z.size(); ++r) ASSERT_DOUBLE_EQ(z[r], 0.0);
}

TEST(Wedge, MatchesMergeOracle) {
  Rng rng(101);
  const int cases[][3] = {{4, 1, 1}, {5, 2, 1}, {6, 2, 2}, {7, 3, 2},
                          {8, 2, 2}, {8, 4, 2}, {8, 3, 3}, {8, 4, 4}};
  for (const auto& c : cases) {
    int n = c[0], p = c[1], q = c[2];
    for (int trial = 0; trial < 20; ++trial) {
      KForm a = random_form(n, p, rng);
      KForm b = random_form(n, q, rng);
      KForm w = mvlab::wedge(a, b);
      KForm o = wedge_oracle(a, b);
      for (int r = 0; r < w.size(); ++r) ASSERT_NEAR(w[r], o[r], 1e-13);
    }
  }
}

TEST(Wedge, EvaluationConvention) {
  // (a ^ b)(v_1,...,v_{p+q}) = (1/p!q!) sum_sigma sgn(sigma) a(...) b(...).
  Rng rng(102);
  const int cases[][3] = {{4, 1, 1}, {5, 1, 2}, {6, 2, 2}};
  for (const auto& c : cases) {
    int n = c[0], p = c[1], q = c[2];
    for (int trial = 0; trial < 10; ++trial) {
      KForm a = random_form(n, p, rng);
      KForm b = random_form(n, q, rng);
      std::vector<std::vector<double>> v;
      for (int i = 0; i < p + q; ++i) v.push_back(random_vector(n, rng));
      double lhs = evaluate(mvlab::wedge(a, b), v);
      std::vector<int> perm(p + q);
      for (int i = 0; i < p + q; ++i) perm[i] = i;
      double sum = 0.0;
      do {
        std::vector<std::vector<double>> va, vb;
        for (int i = 0; i < p; ++i) va.push_back(v[perm[i]]);
        for (int i = p; i < p + q; ++i) vb.push_back(v[perm[i]]);
        sum += perm_sign(perm) * evaluate(a, va) * evaluate(b, vb);
      } while (std::next_permutation(perm.begin(), perm.end()));
      double rhs = sum / (factorial(p) * factorial(q));
      ASSERT_NEAR(lhs, rhs, 1e-11 * (1.0 + std::fabs(lhs)));
    }
  }
}

TEST(Wedge, GradedCommutativityAndAssociativity) {
  Rng rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 8;
    KForm a = random_form(n, 2, rng);
    KForm b = random_form(n, 3, rng);
    KForm c = random_form(n, 2, rng);
    KForm ab = mvlab::wedge(a, b);
    KForm ba = mvlab::wedge(b, a);
    for (int r = 0; r < ab.size(); ++r) ASSERT_NEAR(ab[r], std::pow(-1, 2 * 3) * ba[r], 1e-13);
    KForm left = mvlab::wedge(mvlab::wedge(a, b), c);
    KForm right = mvlab::wedge(a, mvlab::wedge(b, c));
    for (int r = 0; r < left.size(); ++r) ASSERT_NEAR(left[r], right[r], 1e-12);
    // Odd-degree swap picks up the sign (-1)^{3*3}.
    KForm d = random_form(n, 3, rng);
    KForm bd = mvlab::wedge(b, d);
    KForm db = mvlab::wedge(d, b);
    for (int r = 0; r < bd.size(); ++r) ASSERT_NEAR(bd[r], -db[r], 1e-13);
  }
}

TEST(WedgePow, IteratedProduct) {
  Rng rng(104);
  for (int trial = 0; trial < 10; ++trial) {
    KForm a = random_form(8, 2, rng);
    KForm p0 = mvlab::wedge_pow(a, 0);
    ASSERT_EQ(p0.k, 0);
    ASSERT_DOUBLE_EQ(p0[0], 1.0);
    KForm p1 = mvlab::wedge_pow(a, 1);
    for (int r = 0; r < a.size(); ++r) ASSERT_DOUBLE_EQ(p1[r], a[r]);
    KForm iter = a;
    for (int p = 2; p * 2 <= 8; ++p) {
      iter = mvlab::wedge(iter, a);
      KForm pw = mvlab::wedge_pow(a, p);
      for (int r = 0; r < pw.size(); ++r)
        ASSERT_NEAR(pw[r], iter[r], 1e-11 * (1.0 + std::fabs(iter[r])));
    }
  }
}

TEST(Hodge, HandValuesDimFour) {
  auto expect_equal = [](const KForm& got, const KForm& want) {
    ASSERT_EQ(got.k, want.k);
    for (int r = 0; r < got.size(); ++r) ASSERT_DOUBLE_EQ(got[r], want[r]);
  };
  expect_equal(mvlab::hodge(KForm::basis(4, 2, {0, 1})), KForm::basis(4, 2, {2, 3}));
  expect_equal(mvlab::hodge(KForm::basis(4, 2, {0, 2})), KForm::basis(4, 2, {1, 3}, -1.0));
  expect_equal(mvlab::hodge(KForm::basis(4, 2, {0, 3})), KForm::basis(4, 2, {1, 2}));
  expect_equal(mvlab::hodge(KForm::basis(4, 2, {1, 2})), KForm::basis(4, 2, {0, 3}));
  expect_equal(mvlab::hodge(KForm::basis(4, 2, {1, 3})), KForm::basis(4, 2, {0, 2}, -1.0));
  expect_equal(mvlab::hodge(KForm::basis(4, 2, {2, 3})), KForm::basis(4, 2, {0, 1}));
  expect_equal(mvlab::hodge(KForm::basis(4, 1, {0})), KForm::basis(4, 3, {1, 2, 3}));
  expect_equal(mvlab::hodge(KForm::basis(4, 1, {1})), KForm::basis(4, 3, {0, 2, 3}, -1.0));
  expect_equal(mvlab::hodge(KForm::basis(4, 0, {})), KForm::basis(4, 4, {0, 1, 2, 3}));
}

TEST(Hodge, DoubleStarSign) {
  Rng rng(105);
  for (int n = 2; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      KForm a = random_form(n, k, rng);
      KForm aa = mvlab::hodge(mvlab::hodge(a));
      double sign = ((k * (n - k)) % 2 == 0) ? 1.0 : -1.0;
      for (int r = 0; r < a.size(); ++r) ASSERT_NEAR(aa[r], sign * a[r], 1e-14);
    }
}

TEST(Hodge, DefiningProperty) {
  // a ^ *b = <a, b> vol for same-degree forms on an orthonormal frame.
  Rng rng(106);
  for (int n = 3; n <= 8; ++n)
    for (int k = 1; k < n; ++k) {
      KForm a = random_form(n, k, rng);
      KForm b = random_form(n, k, rng);
      KForm top = mvlab::wedge(a, mvlab::hodge(b));
      ASSERT_EQ(top.k, n);
      ASSERT_NEAR(top[0], mvlab::inner(a, b), 1e-12 * (1.0 + std::fabs(top[0])));
    }
}

TEST(Inner, CoefficientDotAndNorm) {
  Rng rng(107);
  KForm a = random_form(7, 3, rng);
  KForm b = random_form(7, 3, rng);
  double dot = 0.0, na = 0.0;
  for (int r = 0; r < a.size(); ++r) {
    dot += a[r] * b[r];
    na += a[r] * a[r];
  }
  ASSERT_NEAR(mvlab::inner(a, b), dot, 1e-14 * (1.0 + std::fabs(dot)));
  ASSERT_NEAR(mvlab::norm2(a), na, 1e-14 * na);
}

TEST(Interior, HandValuesLeibnizAdjoint) {
  // i_{e0} e^{01} = e^1, i_{e1} e^{01} = -e^0.
  std::vector<double> e0 = {1, 0, 0, 0}, e1 = {0, 1, 0, 0};
  KForm f01 = KForm::basis(4, 2, {0, 1});
  KForm r0 = mvlab::interior(e0, f01);
  KForm r1 = mvlab::interior(e1, f01);
  KForm want0 = KForm::basis(4, 1, {1});
  KForm want1 = KForm::basis(4, 1, {0}, -1.0);
  for (int r = 0; r < r0.size(); ++r) {
    ASSERT_DOUBLE_EQ(r0[r], want0[r]);
    ASSERT_DOUBLE_EQ(r1[r], want1[r]);
  }

  Rng rng(108);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 7;
    std::vector<double> v = random_vector(n, rng);
    KForm a = random_form(n, 2, rng);
    KForm b = random_form(n, 3, rng);
    // Leibniz: i_v(a ^ b) = i_v a ^ b + (-1)^deg(a) a ^ i_v b.
    KForm lhs = mvlab::interior(v, mvlab::wedge(a, b));
    KForm rhs = mvlab::wedge(mvlab::interior(v, a), b) + mvlab::wedge(a, mvlab::interior(v, b));
    for (int r = 0; r < lhs.size(); ++r)
      ASSERT_NEAR(lhs[r], rhs[r], 1e-12 * (1.0 + std::fabs(lhs[r])));
    // Adjointness: <i_v a, c> = <a, v_flat ^ c>.
    KForm c = random_form(n, 1, rng);
    double left = mvlab::inner(mvlab::interior(v, a), c);
    double right = mvlab::inner(a, mvlab::wedge(mvlab::flat_vec(n, v), c));
    ASSERT_NEAR(left, right, 1e-12 * (1.0 + std::fabs(left)));
  }
}

TEST(Musical, SharpMatchesBilinearForm) {
  Rng rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 8;
    KForm F = random_form(n, 2, rng);
    Endo K = mvlab::sharp(F);
    std::vector<double> u = random_vector(n, rng);
    std::vector<double> w = random_vector(n, rng);
    // g(F# u, w) must equal F(u, w).
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      double ki = 0.0;
      for (int j = 0; j < n; ++j) ki += K.at(i, j) * u[j];
      lhs += ki * w[i];
    }
    double rhs = evaluate(F, {u, w});
    ASSERT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::fabs(rhs)));
    // Skew-symmetry of the endomorphism.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ASSERT_NEAR(K.at(i, j), -K.at(j, i), 1e-14);
  }
}

TEST(Musical, FlatSkewRoundTripAndRejection) {
  Rng rng(110);
  KForm F = random_form(6, 2, rng);
  KForm back = mvlab::flat_skew(mvlab::sharp(F));
  for (int r = 0; r < F.size(); ++r) ASSERT_DOUBLE_EQ(back[r], F[r]);

  Endo bad = Endo::identity(6);  // symmetric, far from skew
  ASSERT_THROW(mvlab::flat_skew(bad), std::invalid_argument);
  // require_skew = false symmetrizes instead of throwing.
  KForm relaxed = mvlab::flat_skew(bad, false);
  for (int r = 0; r < relaxed.size(); ++r) ASSERT_DOUBLE_EQ(relaxed[r], 0.0);
}

TEST(Musical, VectorRoundTrip) {
  Rng rng(111);
  std::vector<double> v = random_vector(7, rng);
  KForm alpha = mvlab::flat_vec(7, v);
  std::vector<double> back = mvlab::sharp_vec(alpha);
  for (int i = 0; i < 7; ++i) ASSERT_DOUBLE_EQ(back[i], v[i]);
  for (int i = 0; i < 7; ++i) ASSERT_DOUBLE_EQ(alpha[i], v[i]);
}

TEST(DetOnePlus, MatchesCofactorExpansion) {
  Rng rng(112);
  for (int n = 2; n <= 8; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      KForm F = random_form(n, 2, rng, 1.5);
      mvlab::DetPair d = mvlab::det_one_plus(F);
      Endo K = mvlab::sharp(F);
      std::vector<double> m(n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i * n + j] = (i == j ? 1.0 : 0.0) + K.at(i, j);
      double want = cofactor_det(m, n);
      ASSERT_NEAR(d.formula, want, 1e-10 * (1.0 + std::fabs(want)));
      ASSERT_NEAR(d.oracle, want, 1e-10 * (1.0 + std::fabs(want)));
    }
}

TEST(DetOnePlus, PfaffianSquaresOnly) {
  // det(I + F#) = sum_p |F^p / p!|^2 >= 1: nonnegative terms, so never below 1.
  Rng rng(113);
  for (int trial = 0; trial < 50; ++trial) {
    KForm F = random_form(8, 2, rng, 2.0);
    mvlab::DetPair d = mvlab::det_one_plus(F);
    ASSERT_GE(d.formula, 1.0 - 1e-12);
  }
}

TEST(ComplexKForm, WedgeAndNorm) {
  Rng rng(114);
  mvlab::ComplexKForm a(random_form(6, 1, rng), random_form(6, 1, rng));
  mvlab::ComplexKForm b(random_form(6, 2, rng), random_form(6, 2, rng));
  mvlab::ComplexKForm w = mvlab::wedge(a, b);
  // (re_a + i im_a) ^ (re_b + i im_b), expanded by hand.
  KForm want_re = mvlab::wedge(a.re, b.re) - mvlab::wedge(a.im, b.im);
  KForm want_im = mvlab::wedge(a.re, b.im) + mvlab::wedge(a.im, b.re);
  for (int r = 0; r < w.re.size(); ++r) {
    ASSERT_NEAR(w.re[r], want_re[r], 1e-13);
    ASSERT_NEAR(w.im[r], want_im[r], 1e-13);
  }
  ASSERT_NEAR(mvlab::norm2(a), mvlab::norm2(a.re) + mvlab::norm2(a.im), 1e-13);
  mvlab::ComplexKForm purely_real(a.re);
  ASSERT_DOUBLE_EQ(mvlab::norm2(purely_real.im), 0.0);
}

TEST(Json, RoundTripBitwise) {
  Rng rng(115);
  KForm a = random_form(8, 3, rng, 3.0);
  a[0] = 1e-300;  // exercise extreme exponents
  a[1] = -0.1;    // not exactly representable in binary
  KForm back = mvlab::kform_from_json(mvlab::to_json(a));
  ASSERT_EQ(back.n, a.n);
  ASSERT_EQ(back.k, a.k);
  for (int r = 0; r < a.size(); ++r) ASSERT_EQ(back[r], a[r]) << "coefficient " << r;
}

TEST(Json, MalformedInputsThrow) {
  ASSERT_ANY_THROW(mvlab::kform_from_json("not json"));
  ASSERT_ANY_THROW(mvlab::kform_from_json("{\"n\":6,\"k\":2}"));
  ASSERT_ANY_THROW(mvlab::kform_from_json("{\"n\":6,\"k\":2,\"coeffs\":[1,2]}"));
}

TEST(Endo, ArithmeticAndIdentity) {
  Rng rng(116);
  int n = 5;
  Endo A(n), B(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A.at(i, j) = rng.uniform(-1, 1);
      B.at(i, j) = rng.uniform(-1, 1);
    }
  Endo C = A * B;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double want = 0.0;
      for (int l = 0; l < n; ++l) want += A.at(i, l) * B.at(l, j);
      ASSERT_NEAR(C.at(i, j), want, 1e-14);
    }
  Endo I = Endo::identity(n);
  Endo AI = A * I;
  Endo ApB = A + B;
  Endo AmB = A - B;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ASSERT_DOUBLE_EQ(AI.at(i, j), A.at(i, j));
      ASSERT_DOUBLE_EQ(ApB.at(i, j), A.at(i, j) + B.at(i, j));
      ASSERT_DOUBLE_EQ(AmB.at(i, j), A.at(i, j) - B.at(i, j));
    }
}

}  // namespace
