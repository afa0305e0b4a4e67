#include "mvlab/grid.hpp"

#include <cmath>
#include <map>
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

TorusGrid::TorusGrid(int dim, const std::vector<int>& counts) {
  require(dim >= 2 && dim <= kMaxDim, "TorusGrid: dimension must be in [2, 8]");
  require(static_cast<int>(counts.size()) == dim, "TorusGrid: shape size mismatch");
  n = dim;
  npoints = 1;
  for (int a = 0; a < n; ++a) {
    require(counts[a] >= 4 && counts[a] % 2 == 0,
            "TorusGrid: axis counts must be even and >= 4");
    shape[a] = counts[a];
    require(npoints <= kMaxGridPoints / counts[a], "TorusGrid: grid exceeds point budget");
    npoints *= counts[a];
  }
  long s = 1;
  for (int a = n - 1; a >= 0; --a) {
    strides[a] = s;
    s *= shape[a];
  }
}

double TorusGrid::min_h() const {
  double m = h(0);
  for (int a = 1; a < n; ++a) m = std::min(m, h(a));
  return m;
}

double TorusGrid::cell() const {
  double c = 1.0;
  for (int a = 0; a < n; ++a) c *= h(a);
  return c;
}

long TorusGrid::index(const std::array<int, 8>& x) const {
  long p = 0;
  for (int a = 0; a < n; ++a) p += strides[a] * x[a];
  return p;
}

bool operator==(const TorusGrid& a, const TorusGrid& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i < a.n; ++i)
    if (a.shape[i] != b.shape[i]) return false;
  return true;
}

FormField::FormField(const TorusGrid& g, int degree) : grid(g), k(degree) {
  require(degree >= 0 && degree <= g.n, "FormField: degree out of range");
  ncomp = binomial(g.n, degree);
  data.assign(static_cast<std::size_t>(g.points()) * ncomp, 0.0);
}

FormField& FormField::operator+=(const FormField& o) {
  require(grid == o.grid && k == o.k, "FormField: shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

FormField& FormField::operator-=(const FormField& o) {
  require(grid == o.grid && k == o.k, "FormField: shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

FormField& FormField::operator*=(double s) {
  for (double& v : data) v *= s;
  return *this;
}

const std::vector<DiffStencil>& diff_stencil(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<DiffStencil>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k});
  if (it != cache.end()) return it->second;

  // d(f_I e^I) = sum_j del_j f_I e^j ^ e^I; the sign is the parity of the
  // number of indices in I below j.
  std::vector<DiffStencil> entries;
  const auto& ti = MultiIndexTable::get(n, k);
  const auto& to = MultiIndexTable::get(n, k + 1);
  for (int c_in = 0; c_in < ti.size(); ++c_in) {
    unsigned bits = ti.bits(c_in);
    for (int j = 0; j < n; ++j) {
      if (bits & (1u << j)) continue;
      unsigned out_bits = bits | (1u << j);
      int below = __builtin_popcount(bits & ((1u << j) - 1u));
      double sign = (below % 2 == 0) ? 1.0 : -1.0;
      entries.push_back({to.rank_of_bits(out_bits), c_in, j, sign});
    }
  }
  return cache.emplace(std::make_pair(n, k), std::move(entries)).first->second;
}

FormField d_field(const FormField& f) {
  const TorusGrid& g = f.grid;
  require(f.k + 1 <= g.n, "d_field: degree overflow");
  FormField out(g, f.k + 1);
  const auto& entries = diff_stencil(g.n, f.k);
  GridWalker w(g);
  const long P = g.points();
  for (long p = 0; p < P; ++p, w.advance()) {
    double* o = out.at(p);
    for (const DiffStencil& e : entries) {
      double inv2h = 0.5 * g.shape[e.axis];
      double diff = f.at(w.neighbor(p, e.axis, +1))[e.c_in] -
                    f.at(w.neighbor(p, e.axis, -1))[e.c_in];
      o[e.c_out] += e.sign * inv2h * diff;
    }
  }
  return out;
}

FormField delta_field(const FormField& f) {
  const TorusGrid& g = f.grid;
  require(f.k >= 1, "delta_field: degree must be >= 1");
  FormField out(g, f.k - 1);
  const auto& entries = diff_stencil(g.n, f.k - 1);
  GridWalker w(g);
  const long P = g.points();
  for (long p = 0; p < P; ++p, w.advance()) {
    double* o = out.at(p);
    for (const DiffStencil& e : entries) {
      double inv2h = 0.5 * g.shape[e.axis];
      double diff = f.at(w.neighbor(p, e.axis, +1))[e.c_out] -
                    f.at(w.neighbor(p, e.axis, -1))[e.c_out];
      o[e.c_in] -= e.sign * inv2h * diff;
    }
  }
  return out;
}

FormField exterior_calculus(const FormField& f, ExtOp op) {
  return op == ExtOp::d ? d_field(f) : delta_field(f);
}

double field_inner(const FormField& a, const FormField& b) {
  require(a.grid == b.grid && a.k == b.k, "field_inner: shape mismatch");
  KahanSum s;
  for (std::size_t i = 0; i < a.data.size(); ++i) s.add(a.data[i] * b.data[i]);
  return s.get() * a.grid.cell();
}

double field_norm_l2(const FormField& a) {
  KahanSum s;
  for (double v : a.data) s.add(v * v);
  return std::sqrt(s.get() * a.grid.cell());
}

double field_norm_linf(const FormField& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace mvlab
