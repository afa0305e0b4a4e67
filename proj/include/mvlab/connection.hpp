// Discretized Hermitian line-bundle connections on flat tori: curvature,
// the G tensor, the volume functional, its gradient (mean curvature), the
// principal symbol, and gauge shifts.
#pragma once

#include <utility>
#include <vector>

#include "mvlab/grid.hpp"
#include "mvlab/structures.hpp"

namespace mvlab {

/// d = F0 + da lives on a flat torus whose holonomy structure has constant
/// coefficients; the structure fixes the dimension.
struct ConnectionField {
  TorusGrid grid;
  StructureKind kind = StructureKind::G2;
  KForm background;    // constant 2-form F0
  FormField potential; // 1-form a

  ConnectionField() = default;
  ConnectionField(const TorusGrid& g, StructureKind k, const KForm& F0);
};

/// Lex-ordered index pairs (i < j) of the 2-form components on R^n.
const std::vector<std::pair<int, int>>& pair_table(int n);

/// Curvature E = F0 + da as a dense field.
FormField curvature_field(const ConnectionField& C);

/// E at one point, written into the C(n,2)-sized buffer (walker must sit on
/// point p).
void curvature_at(const ConnectionField& C, const GridWalker& w, long p, double* E);

struct BigG {
  Endo G;       // id - Esharp Esharp, positive definite
  double detG;  // equals det(id + Esharp)^2
};
BigG big_g(const KForm& E);

/// Raw pointwise kernel: from the curvature coefficients at a point, write
/// the first-variation 2-form K = (detG)^{1/4} (G^{-1} Esharp)^flat and
/// optionally G^{-1} (row-major n x n); returns (detG)^{1/4}.
double gradient_kernel(int n, const double* E, double* K, double* ginv = nullptr);

/// (detG)^{1/4} alone.
double density_kernel(int n, const double* E);

/// V = integral of sqrt(det(id + Esharp)); computed as (detG)^{1/4} per
/// point. Always >= 1 on the unit torus.
double volume(const ConnectionField& C);

/// Same functional through the LU determinant of id + Esharp (oracle route).
double volume_via_det(const ConnectionField& C);

KForm gradient_two_form(const KForm& E);
FormField gradient_field(const ConnectionField& C);

/// Mean curvature 1-form H = -delta K, the negative L2 gradient of V.
FormField mean_curvature(const ConnectionField& C);

/// Sign-flipped principal symbol of the linearized flow at curvature E:
/// (detG)^{1/4} (<a,a>_G <xi,xi>_G - <a,xi>_G^2) with <u,v>_G = u(G^{-1}v),
/// plus (detG)^{1/4} <a,xi>^2 (Euclidean) when `deturck` is set. Nonnegative;
/// zero exactly on a parallel to xi when the DeTurck term is off.
double principal_symbol_form(const KForm& E, const KForm& xi, const KForm& a,
                             bool deturck);

/// a -> a + df; curvature, volume and all curvature functionals are
/// unchanged to rounding.
ConnectionField gauge_shift(const ConnectionField& C, const FormField& f);

}  // namespace mvlab
