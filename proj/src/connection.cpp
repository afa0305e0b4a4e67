#include "mvlab/connection.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "mvlab/linalg.hpp"
#include "mvlab/multiindex.hpp"

namespace mvlab {

namespace {
void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}
}  // namespace

ConnectionField::ConnectionField(const TorusGrid& g, StructureKind k, const KForm& F0)
    : grid(g), kind(k), background(F0), potential(g, 1) {
  require(kind_dim(k) == g.n, "ConnectionField: structure dimension mismatch");
  require(F0.n == g.n && F0.k == 2, "ConnectionField: background must be a 2-form");
}

const std::vector<std::pair<int, int>>& pair_table(int n) {
  static std::mutex mu;
  static std::vector<std::pair<int, int>> cache[kMaxDim + 1];
  std::lock_guard<std::mutex> lock(mu);
  auto& v = cache[n];
  if (v.empty()) {
    const auto& t = MultiIndexTable::get(n, 2);
    v.reserve(t.size());
    for (int r = 0; r < t.size(); ++r) {
      const auto& idx = t[r];
      v.emplace_back(idx[0], idx[1]);
    }
  }
  return v;
}

void curvature_at(const ConnectionField& C, const GridWalker& w, long p, double* E) {
  const TorusGrid& g = C.grid;
  const FormField& a = C.potential;
  const auto& pairs = pair_table(g.n);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    double di_aj = 0.5 * g.shape[i] *
                   (a.at(w.neighbor(p, i, +1))[j] - a.at(w.neighbor(p, i, -1))[j]);
    double dj_ai = 0.5 * g.shape[j] *
                   (a.at(w.neighbor(p, j, +1))[i] - a.at(w.neighbor(p, j, -1))[i]);
    E[r] = C.background[static_cast<int>(r)] + di_aj - dj_ai;
  }
}

FormField curvature_field(const ConnectionField& C) {
  FormField E = d_field(C.potential);
  const long P = C.grid.points();
  for (long p = 0; p < P; ++p) {
    double* e = E.at(p);
    for (int r = 0; r < E.ncomp; ++r) e[r] += C.background[r];
  }
  return E;
}

namespace {

/// Builds Esharp (row-major) from 2-form coefficients: M[i][j] = -E_{ij}.
void sharp_buf(int n, const double* E, const std::vector<std::pair<int, int>>& pairs,
               double* M) {
  for (int i = 0; i < n * n; ++i) M[i] = 0.0;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    M[i * n + j] = -E[r];
    M[j * n + i] = E[r];
  }
}

/// G = id - S S into `G`; returns nothing (S unchanged).
void big_g_buf(int n, const double* S, double* G) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += S[i * n + k] * S[k * n + j];
      G[i * n + j] = (i == j ? 1.0 : 0.0) - s;
    }
}

}  // namespace

BigG big_g(const KForm& E) {
  require(E.k == 2, "big_g: expected a 2-form");
  const int n = E.n;
  const auto& pairs = pair_table(n);
  double S[64], G[64], L[64];
  sharp_buf(n, E.coeffs.data(), pairs, S);
  big_g_buf(n, S, G);
  BigG out;
  out.G = Endo(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.G.at(i, j) = G[i * n + j];
  out.detG = cholesky(G, n, L);
  return out;
}

double gradient_kernel(int n, const double* E, double* K, double* ginv) {
  const auto& pairs = pair_table(n);
  double S[64], G[64], L[64], Gi[64];
  sharp_buf(n, E, pairs, S);
  big_g_buf(n, S, G);
  double detG = cholesky(G, n, L);
  double d14 = std::sqrt(std::sqrt(detG));
  cholesky_inverse(L, n, Gi);
  if (ginv)
    for (int i = 0; i < n * n; ++i) ginv[i] = Gi[i];
  // A = G^{-1} S, then K_{ij} = d14 * (A_{ji} - A_{ij}) / 2.
  double A[64];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += Gi[i * n + k] * S[k * n + j];
      A[i * n + j] = s;
    }
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    K[r] = 0.5 * d14 * (A[j * n + i] - A[i * n + j]);
  }
  return d14;
}

double density_kernel(int n, const double* E) {
  const auto& pairs = pair_table(n);
  double S[64], G[64], L[64];
  sharp_buf(n, E, pairs, S);
  big_g_buf(n, S, G);
  return std::sqrt(std::sqrt(cholesky(G, n, L)));
}

double volume(const ConnectionField& C) {
  const TorusGrid& g = C.grid;
  const long P = g.points();
  GridWalker w(g);
  double E[28];
  KahanSum sum;
  for (long p = 0; p < P; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    sum.add(density_kernel(g.n, E));
  }
  return sum.get() * g.cell();
}

double volume_via_det(const ConnectionField& C) {
  const TorusGrid& g = C.grid;
  const long P = g.points();
  GridWalker w(g);
  double E[28];
  KahanSum sum;
  KForm Ef(g.n, 2);
  for (long p = 0; p < P; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    for (int r = 0; r < Ef.size(); ++r) Ef[r] = E[r];
    Endo M = sharp(Ef);
    for (int i = 0; i < g.n; ++i) M.at(i, i) += 1.0;
    sum.add(std::sqrt(lu_det(M)));
  }
  return sum.get() * g.cell();
}

KForm gradient_two_form(const KForm& E) {
  require(E.k == 2, "gradient_two_form: expected a 2-form");
  KForm K(E.n, 2);
  gradient_kernel(E.n, E.coeffs.data(), K.coeffs.data());
  return K;
}

FormField gradient_field(const ConnectionField& C) {
  const TorusGrid& g = C.grid;
  FormField K(g, 2);
  const long P = g.points();
  GridWalker w(g);
  double E[28];
  for (long p = 0; p < P; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    gradient_kernel(g.n, E, K.at(p));
  }
  return K;
}

FormField mean_curvature(const ConnectionField& C) {
  FormField H = delta_field(gradient_field(C));
  H *= -1.0;
  return H;
}

double principal_symbol_form(const KForm& E, const KForm& xi, const KForm& a,
                             bool deturck) {
  require(E.k == 2, "principal_symbol_form: E must be a 2-form");
  require(xi.k == 1 && a.k == 1 && xi.n == E.n && a.n == E.n,
          "principal_symbol_form: xi, a must be 1-forms of matching dimension");
  require(norm2(xi) > 0.0, "principal_symbol_form: xi must be nonzero");
  const int n = E.n;
  const auto& pairs = pair_table(n);
  double S[64], G[64], L[64], Gi[64];
  sharp_buf(n, E.coeffs.data(), pairs, S);
  big_g_buf(n, S, G);
  double d14 = std::sqrt(std::sqrt(cholesky(G, n, L)));
  cholesky_inverse(L, n, Gi);
  auto pair_g = [&](const KForm& u, const KForm& v) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += u[i] * Gi[i * n + j] * v[j];
    return s;
  };
  double aa = pair_g(a, a), xx = pair_g(xi, xi), ax = pair_g(a, xi);
  double val = d14 * (aa * xx - ax * ax);
  if (deturck) {
    double e = inner(a, xi);
    val += d14 * e * e;
  }
  return val;
}

ConnectionField gauge_shift(const ConnectionField& C, const FormField& f) {
  require(f.k == 0 && f.grid == C.grid, "gauge_shift: f must be a scalar field on the same grid");
  ConnectionField out = C;
  out.potential += d_field(f);
  return out;
}

}  // namespace mvlab
