#include "mvlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "mvlab/linalg.hpp"
#include "mvlab/projector.hpp"
#include "mvlab/rng.hpp"

namespace mvlab {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

KForm form_from(int n, const double* E) {
  KForm F(n, 2);
  std::copy(E, E + F.size(), F.coeffs.begin());
  return F;
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

ComplexKForm cwedge_pow(const ComplexKForm& a, int p) {
  KForm one(a.re.n, 0);
  one[0] = 1.0;
  ComplexKForm acc(one);
  for (int i = 0; i < p; ++i) acc = wedge(acc, a);
  return acc;
}

/// zeta with (omega + iF)^nc = zeta * nc! * vol; omega^nc / nc! is the
/// volume form, so this is the ratio against the Kaehler top power.
void zeta_at(const HolonomyStructure& S, const KForm& F, double* zr, double* zi) {
  ComplexKForm W(S.omega, F);
  ComplexKForm Wn = cwedge_pow(W, S.nc);
  double f = factorial(S.nc);
  *zr = Wn.re[0] / f;
  *zi = Wn.im[0] / f;
}

bool is_su(StructureKind k) {
  return k == StructureKind::SU3 || k == StructureKind::SU4;
}

}  // namespace

DdtResidual ddt_residual(const ConnectionField& C, const std::string& kind,
                         double theta, double tol) {
  DdtResidual out;
  out.kind = kind;
  out.theta = theta;
  out.tolerance = tol;
  const TorusGrid& g = C.grid;
  const int n = g.n;
  const HolonomyStructure& S = structure(C.kind);

  int mode;  // 0 spin7, 1 g2, 2 dhym
  if (kind == "spin7") {
    require(C.kind == StructureKind::Spin7, "ddt_residual: spin7 needs a Spin7 connection");
    mode = 0;
  } else if (kind == "g2") {
    require(C.kind == StructureKind::G2, "ddt_residual: g2 needs a G2 connection");
    mode = 1;
  } else if (kind == "dhym") {
    require(is_su(C.kind), "ddt_residual: dhym needs an SU3 or SU4 connection");
    mode = 2;
  } else {
    throw std::invalid_argument("ddt_residual: kind must be spin7, g2, or dhym");
  }

  const std::vector<KForm>* fr2 = nullptr;
  const std::vector<KForm>* fr4 = nullptr;
  if (mode == 0) {
    fr2 = &lambda_frame(2);
    fr4 = &lambda_frame(4);
  }

  KahanSum s1, s2;
  double m1 = 0.0, m2 = 0.0;
  double wmin = std::numeric_limits<double>::infinity();
  GridWalker w(g);
  double E[28];
  for (long p = 0; p < g.npoints; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    KForm F = form_from(n, E);
    if (mode == 0) {
      KForm F2 = wedge(F, F);
      KForm x = F - (1.0 / 6.0) * hodge(wedge(F2, F));
      double n1 = 0.0, n2 = 0.0;
      for (const KForm& u : *fr2) {
        double c = inner(x, u);
        n1 += c * c;
      }
      for (const KForm& u : *fr4) {
        double c = inner(F2, u);
        n2 += c * c;
      }
      s1.add(n1);
      s2.add(n2);
      m1 = std::max(m1, std::sqrt(n1));
      m2 = std::max(m2, std::sqrt(n2));
      double wv = 1.0 - 0.5 * inner(F2, S.Phi) + wedge(F2, F2)[0] / 24.0;
      wmin = std::min(wmin, std::fabs(wv));
    } else if (mode == 1) {
      KForm f1 = wedge(F, S.star_phi) - (1.0 / 6.0) * wedge(wedge(F, F), F);
      double n1 = norm2(f1);
      s1.add(n1);
      m1 = std::max(m1, std::sqrt(n1));
    } else {
      double n1 = norm2(su_pq_proj(S.nc, F, 2, 0));
      double zr, zi;
      zeta_at(S, F, &zr, &zi);
      double f2 = zi * std::cos(theta) - zr * std::sin(theta);
      s1.add(n1);
      s2.add(f2 * f2);
      m1 = std::max(m1, std::sqrt(n1));
      m2 = std::max(m2, std::fabs(f2));
    }
  }
  const double cell = g.cell();
  auto l2 = [&](const KahanSum& s) { return std::sqrt(std::max(0.0, s.get() * cell)); };
  if (mode == 0) {
    out.l2_norms = {{"pi27_tensor", l2(s1)}, {"pi47_tensor", l2(s2)}};
    out.linf_norms = {{"pi27_tensor", m1}, {"pi47_tensor", m2}};
    out.nowhere_vanishing_min = wmin;
  } else if (mode == 1) {
    out.l2_norms = {{"g2_tensor", l2(s1)}};
    out.linf_norms = {{"g2_tensor", m1}};
  } else {
    out.l2_norms = {{"pq20_tensor", l2(s1)}, {"phase_tensor", l2(s2)}};
    out.linf_norms = {{"pq20_tensor", m1}, {"phase_tensor", m2}};
  }
  out.is_solution = true;
  for (const auto& kv : out.linf_norms) {
    if (!(kv.second <= tol)) out.is_solution = false;
  }
  return out;
}

std::string to_json(const DdtResidual& r) {
  json j;
  j["kind"] = r.kind;
  j["theta"] = r.theta;
  json l2 = json::object(), li = json::object();
  for (const auto& kv : r.l2_norms) l2[kv.first] = kv.second;
  for (const auto& kv : r.linf_norms) li[kv.first] = kv.second;
  j["l2_norms"] = l2;
  j["linf_norms"] = li;
  j["tolerance"] = r.tolerance;
  j["is_solution"] = r.is_solution;
  j["nowhere_vanishing_min"] = r.nowhere_vanishing_min;
  return j.dump();
}

AngleData angle_function(const ConnectionField& C) {
  require(is_su(C.kind), "angle_function: SU3 or SU4 connection required");
  const TorusGrid& g = C.grid;
  const HolonomyStructure& S = structure(C.kind);
  AngleData out{FormField(g, 0), FormField(g, 0), FormField(g, 0), FormField(g, 0),
                std::numeric_limits<double>::infinity()};
  GridWalker w(g);
  double E[28];
  for (long p = 0; p < g.npoints; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    KForm F = form_from(g.n, E);
    double zr, zi;
    zeta_at(S, F, &zr, &zi);
    out.zeta_re.at(p)[0] = zr;
    out.zeta_im.at(p)[0] = zi;
    double r = std::hypot(zr, zi);
    out.r.at(p)[0] = r;
    out.theta.at(p)[0] = std::atan2(zi, zr);
    out.min_r = std::min(out.min_r, r);
  }
  return out;
}

double average_phase(const ConnectionField& C) {
  require(is_su(C.kind), "average_phase: SU3 or SU4 connection required");
  const HolonomyStructure& S = structure(C.kind);
  KahanSum sr, si;
  GridWalker w(C.grid);
  double E[28];
  for (long p = 0; p < C.grid.npoints; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    KForm F = form_from(C.grid.n, E);
    double zr, zi;
    zeta_at(S, F, &zr, &zi);
    sr.add(zr);
    si.add(zi);
  }
  return std::atan2(si.get(), sr.get());
}

DazordResult dazord_compare(const ConnectionField& C, bool keep_fields) {
  require(is_su(C.kind), "dazord_compare: SU3 or SU4 connection required");
  const TorusGrid& g = C.grid;
  const int n = g.n;
  const int nc = n / 2;
  const HolonomyStructure& S = structure(C.kind);

  // Pass 1: gradient two-form and angle fields, plus the [[2,0]] precondition.
  FormField K(g, 2);
  FormField th(g, 0);
  double max20 = 0.0;
  {
    GridWalker w(g);
    double E[28];
    for (long p = 0; p < g.npoints; ++p, w.advance()) {
      curvature_at(C, w, p, E);
      gradient_kernel(n, E, K.at(p));
      KForm F = form_from(n, E);
      max20 = std::max(max20, std::sqrt(norm2(su_pq_proj(nc, F, 2, 0))));
      double zr, zi;
      zeta_at(S, F, &zr, &zi);
      th.at(p)[0] = std::atan2(zi, zr);
    }
  }
  DazordResult R;
  R.max_20_part = max20;
  if (!(max20 <= 1e-10)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "dazord_compare: curvature has a [[2,0]] part (L-inf %.3e)", max20);
    throw std::invalid_argument(buf);
  }

  FormField H = delta_field(K);
  H *= -1.0;
  K = FormField();  // release before the second full-grid pass

  FormField rhs_f;
  if (keep_fields) rhs_f = FormField(g, 1);
  KahanSum sd, sl, sr;
  double mad = 0.0;
  GridWalker w(g);
  double E[28], Kbuf[28], ginv[64], dth[8], jdth[8];
  for (long p = 0; p < g.npoints; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    double d14 = gradient_kernel(n, E, Kbuf, ginv);
    for (int a = 0; a < n; ++a) {
      double tp = th.at(w.neighbor(p, a, +1))[0];
      double tm = th.at(w.neighbor(p, a, -1))[0];
      dth[a] = 0.5 * g.shape[a] * std::remainder(tp - tm, 2.0 * kPi);
    }
    for (int c = 0; c < nc; ++c) {
      jdth[2 * c] = dth[2 * c + 1];
      jdth[2 * c + 1] = -dth[2 * c];
    }
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      for (int j = 0; j < n; ++j) r += ginv[i * n + j] * jdth[j];
      r *= -d14;
      double l = H.at(p)[i];
      sd.add((l - r) * (l - r));
      sl.add(l * l);
      sr.add(r * r);
      mad = std::max(mad, std::fabs(l - r));
      if (keep_fields) rhs_f.at(p)[i] = r;
    }
  }
  const double cell = g.cell();
  R.lhs_l2 = std::sqrt(std::max(0.0, sl.get() * cell));
  R.rhs_l2 = std::sqrt(std::max(0.0, sr.get() * cell));
  R.rel_error = std::sqrt(std::max(0.0, sd.get() * cell)) / std::max(1.0, R.lhs_l2);
  R.max_abs_diff = mad;
  if (keep_fields) {
    R.lhs = std::move(H);
    R.rhs = std::move(rhs_f);
  }
  return R;
}

EnergyReport energy_bound_report(const ConnectionField& C) {
  const TorusGrid& g = C.grid;
  const int n = g.n;
  const HolonomyStructure& S = structure(C.kind);
  KahanSum sv, szr, szi;
  GridWalker w(g);
  double E[28];
  for (long p = 0; p < g.npoints; ++p, w.advance()) {
    curvature_at(C, w, p, E);
    sv.add(density_kernel(n, E));
    KForm F = form_from(n, E);
    if (C.kind == StructureKind::Spin7) {
      KForm F2 = wedge(F, F);
      szr.add(1.0 - 0.5 * inner(F2, S.Phi) + wedge(F2, F2)[0] / 24.0);
    } else if (C.kind == StructureKind::G2) {
      szr.add(1.0 - 0.5 * inner(wedge(F, F), S.star_phi));
    } else {
      double zr, zi;
      zeta_at(S, F, &zr, &zi);
      szr.add(zr);
      szi.add(zi);
    }
  }
  const double cell = g.cell();
  EnergyReport r;
  r.V = sv.get() * cell;
  double Zr = szr.get() * cell, Zi = szi.get() * cell;
  if (is_su(C.kind)) {
    r.calibrated_integral = std::hypot(Zr, Zi);
    r.theta = std::atan2(Zi, Zr);
  } else {
    r.calibrated_integral = Zr;
    r.theta = 0.0;
  }
  r.slack = r.V - std::fabs(r.calibrated_integral);
  return r;
}

ConnectionField pullback_circle(const ConnectionField& C, int new_axis_points) {
  StructureKind nk;
  if (C.kind == StructureKind::SU3) {
    nk = StructureKind::G2;
  } else if (C.kind == StructureKind::G2) {
    nk = StructureKind::Spin7;
  } else {
    throw std::invalid_argument("pullback_circle: source must be SU3 or G2");
  }
  std::vector<int> counts;
  counts.push_back(new_axis_points);
  for (int a = 0; a < C.grid.n; ++a) counts.push_back(C.grid.shape[a]);
  TorusGrid ng(C.grid.n + 1, counts);
  ConnectionField out(ng, nk, shift_embed(C.background));
  GridWalker w(ng);
  std::array<int, 8> xo{};
  for (long p = 0; p < ng.npoints; ++p, w.advance()) {
    for (int a = 1; a < ng.n; ++a) xo[a - 1] = w.x[a];
    const double* src = C.potential.at(C.grid.index(xo));
    double* o = out.potential.at(p);
    o[0] = 0.0;
    for (int a = 0; a < C.grid.n; ++a) o[a + 1] = src[a];
  }
  return out;
}

namespace {

struct NewtonSystem {
  int N = 0, m = 0;
  std::function<void(const double*, double*)> residual;
  std::function<KForm(const double*)> to_form;
};

NewtonSystem build_system(StructureKind kind, double theta) {
  NewtonSystem sys;
  const HolonomyStructure* S = &structure(kind);
  if (kind == StructureKind::G2) {
    sys.N = 21;
    sys.m = 7;
    sys.to_form = [](const double* x) { return form_from(7, x); };
    sys.residual = [S](const double* x, double* r) {
      KForm F = form_from(7, x);
      KForm f1 = wedge(F, S->star_phi) - (1.0 / 6.0) * wedge(wedge(F, F), F);
      for (int i = 0; i < 7; ++i) r[i] = f1[i];
    };
  } else if (kind == StructureKind::Spin7) {
    sys.N = 28;
    sys.m = 14;
    sys.to_form = [](const double* x) { return form_from(8, x); };
    const std::vector<KForm>& fr2 = lambda_frame(2);
    const std::vector<KForm>& fr4 = lambda_frame(4);
    sys.residual = [&fr2, &fr4](const double* x, double* r) {
      KForm F = form_from(8, x);
      KForm F2 = wedge(F, F);
      KForm lin = F - (1.0 / 6.0) * hodge(wedge(F2, F));
      for (int u = 0; u < 7; ++u) r[u] = inner(lin, fr2[u]);
      for (int u = 0; u < 7; ++u) r[7 + u] = inner(F2, fr4[u]);
    };
  } else {
    const int nc = S->nc;
    const int d = binomial(2 * nc, 2);
    // Orthonormal basis of the J-invariant 2-forms from the [1,1] projector.
    const Matrix& P = su_pq_matrix(nc, 2, 1, 1);
    auto basis = std::make_shared<std::vector<KForm>>();
    for (int j = 0; j < d; ++j) {
      KForm v(2 * nc, 2);
      for (int i = 0; i < d; ++i) v[i] = P.at(i, j);
      for (const KForm& b : *basis) v -= inner(v, b) * b;
      for (const KForm& b : *basis) v -= inner(v, b) * b;
      double nrm = std::sqrt(norm2(v));
      if (nrm > 1e-8) basis->push_back((1.0 / nrm) * v);
    }
    require(static_cast<int>(basis->size()) == nc * nc,
            "newton_constant_ddt: unexpected [1,1] rank");
    sys.N = nc * nc;
    sys.m = 1;
    sys.to_form = [basis, nc](const double* x) {
      KForm F(2 * nc, 2);
      for (std::size_t k = 0; k < basis->size(); ++k) F += x[k] * (*basis)[k];
      return F;
    };
    auto to_form = sys.to_form;
    sys.residual = [to_form, S, theta](const double* x, double* r) {
      double zr, zi;
      zeta_at(*S, to_form(x), &zr, &zi);
      r[0] = zi * std::cos(theta) - zr * std::sin(theta);
    };
  }
  return sys;
}

}  // namespace

KForm newton_constant_ddt(StructureKind kind, std::uint64_t seed, double theta) {
  NewtonSystem sys = build_system(kind, theta);
  const int N = sys.N, m = sys.m;
  const double fd = 1e-7;
  const double accept = 1e-12;

  // Start uniform in the ball of radius 0.5: uniform direction (Box-Muller
  // normals) scaled by 0.5 * u^{1/N}.
  Rng rng = substream(seed, 0);
  std::vector<double> x(N);
  double xn2 = 0.0;
  for (int k = 0; k < N; ++k) {
    double u1 = std::max(rng.next_unit(), 1e-300);
    double u2 = rng.next_unit();
    x[k] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    xn2 += x[k] * x[k];
  }
  double radius = 0.5 * std::pow(rng.next_unit(), 1.0 / N);
  double rescale = radius / std::max(std::sqrt(xn2), 1e-300);
  for (double& v : x) v *= rescale;

  std::vector<double> r(m), rp(m), rt(m), J(static_cast<std::size_t>(m) * N);
  std::vector<double> A(static_cast<std::size_t>(m) * m), L(A.size()), y(m), s(N), xt(N);
  auto norm_of = [](const std::vector<double>& v) {
    double t = 0.0;
    for (double c : v) t += c * c;
    return std::sqrt(t);
  };

  for (int iter = 0; iter < 50; ++iter) {
    sys.residual(x.data(), r.data());
    double rn = norm_of(r);
    if (rn < accept) return sys.to_form(x.data());

    // Forward finite differences, step 1e-7.
    for (int k = 0; k < N; ++k) {
      xt = x;
      xt[k] = x[k] + fd;
      sys.residual(xt.data(), rp.data());
      for (int i = 0; i < m; ++i) J[static_cast<std::size_t>(i) * N + k] = (rp[i] - r[i]) / fd;
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j <= i; ++j) {
        double t = 0.0;
        for (int k = 0; k < N; ++k) {
          t += J[static_cast<std::size_t>(i) * N + k] * J[static_cast<std::size_t>(j) * N + k];
        }
        A[static_cast<std::size_t>(i) * m + j] = t;
        A[static_cast<std::size_t>(j) * m + i] = t;
      }
    }
    double ridge = 0.0;
    for (int attempt = 0;; ++attempt) {
      try {
        std::vector<double> Ar = A;
        for (int i = 0; i < m; ++i) Ar[static_cast<std::size_t>(i) * m + i] += ridge;
        cholesky(Ar.data(), m, L.data());
        break;
      } catch (const std::invalid_argument&) {
        if (attempt >= 6) throw std::runtime_error("newton_constant_ddt: singular normal system");
        double md = 0.0;
        for (int i = 0; i < m; ++i) md = std::max(md, A[static_cast<std::size_t>(i) * m + i]);
        ridge = (ridge == 0.0 ? 1e-14 * (1.0 + md) : ridge * 100.0);
      }
    }
    cholesky_solve(L.data(), m, r.data(), y.data());
    for (int k = 0; k < N; ++k) {
      double t = 0.0;
      for (int i = 0; i < m; ++i) t += J[static_cast<std::size_t>(i) * N + k] * y[i];
      s[k] = t;
    }

    double damp = 1.0;
    bool moved = false;
    for (int t = 0; t < 30; ++t, damp *= 0.5) {
      for (int k = 0; k < N; ++k) xt[k] = x[k] - damp * s[k];
      sys.residual(xt.data(), rt.data());
      if (norm_of(rt) < rn) {
        x = xt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  sys.residual(x.data(), r.data());
  if (norm_of(r) < accept) return sys.to_form(x.data());
  throw std::runtime_error("newton_constant_ddt: no solution found within the iteration budget");
}

}  // namespace mvlab
