// Flat periodic torus grids with dense k-form fields and second-order
// centered-difference exterior calculus (d and its exact discrete adjoint).
#pragma once

#include <array>
#include <vector>

#include "mvlab/kform.hpp"

namespace mvlab {

/// Hard cap on grid size; large enough for 12^7 while keeping dense fields
/// within a few GB.
inline constexpr long kMaxGridPoints = 1L << 27;

/// Uniform grid on the unit torus [0,1)^n, periodic in every axis. Points
/// are ordered lexicographically by coordinates with the last axis fastest.
struct TorusGrid {
  int n = 0;
  std::array<int, 8> shape{};
  std::array<long, 8> strides{};
  long npoints = 0;

  TorusGrid() = default;
  TorusGrid(int dim, const std::vector<int>& counts);

  long points() const { return npoints; }
  double h(int axis) const { return 1.0 / shape[axis]; }
  double min_h() const;
  double cell() const;
  long index(const std::array<int, 8>& x) const;
};

bool operator==(const TorusGrid& a, const TorusGrid& b);
inline bool operator!=(const TorusGrid& a, const TorusGrid& b) { return !(a == b); }

/// Division-free lexicographic walker; `advance` after each point keeps the
/// coordinate vector in sync with the linear index, and `neighbor` resolves
/// periodic offsets from it.
struct GridWalker {
  const TorusGrid* g;
  std::array<int, 8> x{};

  explicit GridWalker(const TorusGrid& grid) : g(&grid) { x.fill(0); }

  void advance() {
    for (int a = g->n - 1; a >= 0; --a) {
      if (++x[a] < g->shape[a]) return;
      x[a] = 0;
    }
  }

  long neighbor(long p, int axis, int dir) const {
    int xa = x[axis] + dir;
    long s = g->strides[axis];
    if (xa >= g->shape[axis]) return p - s * (g->shape[axis] - 1);
    if (xa < 0) return p + s * (g->shape[axis] - 1);
    return p + s * dir;
  }

  double coord(int axis) const { return static_cast<double>(x[axis]) * g->h(axis); }
};

/// Dense k-form field; the C(n,k) lex-ordered coefficients of each point are
/// contiguous (k = 0 stores one scalar per point).
struct FormField {
  TorusGrid grid;
  int k = 0;
  int ncomp = 1;
  std::vector<double> data;

  FormField() = default;
  FormField(const TorusGrid& g, int degree);

  double* at(long p) { return data.data() + p * ncomp; }
  const double* at(long p) const { return data.data() + p * ncomp; }

  FormField& operator+=(const FormField& o);
  FormField& operator-=(const FormField& o);
  FormField& operator*=(double s);
};

enum class ExtOp { d, delta };

/// One coefficient-coupling entry of the exterior derivative on lex bases:
/// (d f)_{c_out} += sign * del_axis f_{c_in}. The same table drives delta
/// through the transposed accumulation.
struct DiffStencil {
  int c_out, c_in, axis;
  double sign;
};

const std::vector<DiffStencil>& diff_stencil(int n, int k);

FormField d_field(const FormField& f);
FormField delta_field(const FormField& f);
FormField exterior_calculus(const FormField& f, ExtOp op);

/// Discrete L2 pairing sum_p <a(p), b(p)> * cell.
double field_inner(const FormField& a, const FormField& b);
double field_norm_l2(const FormField& a);
double field_norm_linf(const FormField& a);

}  // namespace mvlab
