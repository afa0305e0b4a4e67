// Identity-lab internals: pointwise evaluators for each calibration-type
// identity, the shared per-sample input bundle, and the deterministic
// block-partitioned suite driver.

#include "mvlab/identities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

#include "mvlab/linalg.hpp"
#include "mvlab/projector.hpp"
#include "mvlab/rng.hpp"

namespace mvlab {
namespace {

using nlohmann::json;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

constexpr double kPi = 3.14159265358979323846;

// ------------------------------------------------------------ form helpers ---

/// Coefficient of the volume form; equals *(a) for a top-degree form.
double star_top(const KForm& a) {
  require(a.k == a.n, "star_top: top-degree form expected");
  return a[0];
}

ComplexKForm cwedge_pow(const ComplexKForm& a, int p) {
  require(p >= 1, "cwedge_pow: power must be >= 1");
  ComplexKForm r = a;
  for (int i = 1; i < p; ++i) r = wedge(r, a);
  return r;
}

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

const Projector& find_comp(const ProjectorBundle& b, const char* label) {
  for (const auto& c : b.comps)
    if (c.label == label) return c;
  throw std::logic_error("projector bundle: unknown label");
}

// Frame-based projections onto the Cayley-form Lambda^k_7 components.
double frame_norm2(const std::vector<KForm>& fr, const KForm& a) {
  double s = 0.0;
  for (const KForm& e : fr) {
    double c = inner(a, e);
    s += c * c;
  }
  return s;
}

double frame_inner(const std::vector<KForm>& fr, const KForm& a, const KForm& b) {
  double s = 0.0;
  for (const KForm& e : fr) s += inner(a, e) * inner(b, e);
  return s;
}

KForm frame_proj(const std::vector<KForm>& fr, const KForm& a) {
  KForm out(a.n, a.k);
  for (const KForm& e : fr) out += inner(a, e) * e;
  return out;
}

KForm pi2_7_of(const KForm& b) { return frame_proj(lambda_frame(2), b); }
KForm pi2_21_of(const KForm& b) { return b - pi2_7_of(b); }

/// Orthonormal frame {omega ^ beta_j / sqrt 2} of the SU4 component
/// omega ^ A-, from a Gram-Schmidt basis of the A- projector's range.
const std::vector<KForm>& su4_wa_minus_frame() {
  static const std::vector<KForm> frame = [] {
    const auto& S = structure(StructureKind::SU4);
    const Projector& am = find_comp(proj2_bundle(StructureKind::SU4), "a_minus");
    const auto& T = MultiIndexTable::get(8, 2);
    std::vector<KForm> basis;
    for (int j = 0; j < T.size() && static_cast<int>(basis.size()) < am.rank; ++j) {
      KForm col(8, 2);
      for (int i = 0; i < T.size(); ++i) col[i] = am.P.at(i, j);
      for (int pass = 0; pass < 2; ++pass)
        for (const KForm& b : basis) col -= inner(col, b) * b;
      double nn = std::sqrt(norm2(col));
      if (nn > 1e-8) basis.push_back((1.0 / nn) * col);
    }
    if (static_cast<int>(basis.size()) != am.rank)
      throw std::logic_error("su4 A- frame: rank mismatch");
    std::vector<KForm> out;
    const double c = 1.0 / std::sqrt(2.0);
    out.reserve(basis.size());
    for (const KForm& b : basis) out.push_back(c * wedge(S.omega, b));
    return out;
  }();
  return frame;
}

KForm proj_wa_minus(const KForm& xi) { return frame_proj(su4_wa_minus_frame(), xi); }

ComplexKForm su_pq_proj_c(int nc, const ComplexKForm& a, int p, int q) {
  return ComplexKForm(su_pq_proj(nc, a.re, p, q), su_pq_proj(nc, a.im, p, q));
}

// --------------------------------------------------------------- Eval core ---

/// One evaluated identity: relative residual and the scale that normalized
/// it (max of 1, |LHS|, |RHS| and the named individual terms).
struct Eval {
  double rel = 0.0;
  double scale = 1.0;
};

Eval scalar_eval(double lhs, double rhs, std::initializer_list<double> terms) {
  double scale = std::max(1.0, std::max(std::fabs(lhs), std::fabs(rhs)));
  for (double t : terms) scale = std::max(scale, std::fabs(t));
  return {std::fabs(lhs - rhs) / scale, scale};
}

Eval form_eval(const KForm& lhs, const KForm& rhs) {
  double nl = std::sqrt(norm2(lhs)), nr = std::sqrt(norm2(rhs));
  double scale = std::max({1.0, nl, nr});
  return {std::sqrt(norm2(lhs - rhs)) / scale, scale};
}

/// Residual for "x should vanish", normalized by the magnitude of the data
/// x was built from.
Eval vanish_eval(const KForm& x, double magnitude) {
  double scale = std::max(1.0, magnitude);
  return {std::sqrt(norm2(x)) / scale, scale};
}

Eval worst(std::initializer_list<Eval> evals) {
  Eval w{-1.0, 1.0};
  for (const Eval& e : evals)
    if (e.rel > w.rel) w = e;
  return w;
}

/// Violation of |calibrated| <= sqrt(det); slack stays available separately.
Eval bound_eval(double calibrated, double det) {
  double root = std::sqrt(det);
  double scale = std::max({1.0, std::fabs(calibrated), root});
  return {std::max(0.0, std::fabs(calibrated) - root) / scale, scale};
}

// --------------------------------------------------- Cayley form, R^8 ---

Eval ev_cayley(const KForm& F) {
  const auto& S = structure(StructureKind::Spin7);
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  KForm F4 = wedge(F2, F2);
  double sF4 = star_top(F4);
  double t0 = 1.0 - 0.5 * inner(F2, S.Phi) + sF4 / 24.0;
  KForm arg = F - (1.0 / 6.0) * hodge(F3);
  double t1 = 4.0 * frame_norm2(lambda_frame(2), arg);
  double t2 = 2.0 * frame_norm2(lambda_frame(4), F2);
  double lhs = t0 * t0 + t1 + t2;
  DetPair d = det_one_plus(F);
  Eval main = scalar_eval(lhs, d.oracle, {t0 * t0, t1, t2, d.formula});
  Eval det = scalar_eval(d.formula, d.oracle, {lhs});
  return worst({main, det});
}

Eval ev_caypt2(const KForm& F) {
  const auto& S = structure(StructureKind::Spin7);
  KForm F2 = wedge(F, F);
  double a = -inner(F2, S.Phi);
  double b = 4.0 * frame_norm2(lambda_frame(2), F);
  return scalar_eval(a + b, norm2(F), {a, b});
}

Eval ev_caypt4(const KForm& F) {
  const auto& S = structure(StructureKind::Spin7);
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  KForm F4 = wedge(F2, F2);
  KForm sF3 = hodge(F3);
  double c = inner(F2, S.Phi);
  double t0 = 0.25 * c * c;
  double t1 = star_top(F4) / 12.0;
  double t2 = -(4.0 / 3.0) * frame_inner(lambda_frame(2), F, sF3);
  double t3 = 2.0 * frame_norm2(lambda_frame(4), F2);
  return scalar_eval(t0 + t1 + t2 + t3, 0.25 * norm2(F2), {t0, t1, t2, t3});
}

Eval ev_caypt6(const KForm& F) {
  const auto& S = structure(StructureKind::Spin7);
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  KForm F4 = wedge(F2, F2);
  KForm sF3 = hodge(F3);
  double t0 = -inner(F2, S.Phi) * star_top(F4) / 24.0;
  double t1 = frame_norm2(lambda_frame(2), sF3) / 9.0;
  return scalar_eval(t0 + t1, norm2(F3) / 36.0, {t0, t1});
}

Eval ev_det_formula(const KForm& F) {
  DetPair d = det_one_plus(F);
  return scalar_eval(d.formula, d.oracle, {});
}

// ------------------------------------------- supporting lemmas on R^8 ---

Eval ev_cubic_square_pair(const KForm& F, const KForm& xi) {
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  KForm F4 = wedge(F2, F2);
  KForm sF3 = hodge(F3);
  double lhs = star_top(wedge(xi, wedge(sF3, sF3)));
  double rhs = 1.5 * inner(F2, xi) * star_top(F4);
  return scalar_eval(lhs, rhs, {});
}

Eval ev_seven_cube(const KForm& beta) {
  KForm b3 = wedge(wedge(beta, beta), beta);
  return form_eval(b3, 1.5 * norm2(beta) * hodge(beta));
}

Eval ev_seven_quartic(const KForm& beta) {
  double n2 = norm2(beta);
  return scalar_eval(n2 * n2, (2.0 / 3.0) * norm2(wedge(beta, beta)), {});
}

Eval ev_twentyone_quartic(const KForm& gamma) {
  double n2 = norm2(gamma);
  KForm g2 = wedge(gamma, gamma);
  double rhs = norm2(g2) - star_top(wedge(g2, g2)) / 3.0;
  return scalar_eval(n2 * n2, rhs, {norm2(g2), star_top(wedge(g2, g2)) / 3.0});
}

Eval ev_mixed_quartic(const KForm& beta, const KForm& gamma) {
  return scalar_eval(norm2(beta) * norm2(gamma), 2.0 * norm2(wedge(beta, gamma)), {});
}

Eval ev_wedge_type_split(const KForm& Fa, const KForm& Fb) {
  const auto& B4 = proj4_bundle_spin7();
  const Matrix& P1 = find_comp(B4, "pi4_1").P;
  const Matrix& P7 = find_comp(B4, "pi4_7").P;
  const Matrix& P27 = find_comp(B4, "pi4_27").P;
  const Matrix& P35 = find_comp(B4, "pi4_35").P;
  KForm ba = pi2_7_of(Fa), ga = Fa - ba;
  KForm bb = pi2_7_of(Fb), gb = Fb - bb;
  KForm w77 = wedge(ba, bb);    // lands in 1 + 27
  KForm w721 = wedge(ba, gb);   // lands in 7 + 35
  KForm w2121 = wedge(ga, gb);  // lands in 1 + 27 + 35
  double m77 = std::sqrt(norm2(w77));
  double m721 = std::sqrt(norm2(w721));
  double m2121 = std::sqrt(norm2(w2121));
  return worst({vanish_eval(apply(P7, w77, 4), m77),
                vanish_eval(apply(P35, w77, 4), m77),
                vanish_eval(apply(P1, w721, 4), m721),
                vanish_eval(apply(P27, w721, 4), m721),
                vanish_eval(apply(P7, w2121, 4), m2121)});
}

Eval ev_quartic_parts(const KForm& F) {
  const auto& S = structure(StructureKind::Spin7);
  const auto& B4 = proj4_bundle_spin7();
  KForm beta = pi2_7_of(F), gamma = F - beta;
  KForm x1 = wedge(beta, beta);
  KForm x2 = wedge(beta, gamma);
  KForm x3 = wedge(gamma, gamma);
  KForm eta = wedge(F, F);
  KForm e1 = apply(find_comp(B4, "pi4_1").P, eta, 4);
  KForm e7 = apply(find_comp(B4, "pi4_7").P, eta, 4);
  KForm e27 = apply(find_comp(B4, "pi4_27").P, eta, 4);
  KForm e35 = apply(find_comp(B4, "pi4_35").P, eta, 4);
  double n1 = norm2(x1), n2 = norm2(x2), n3 = norm2(x3);
  double x13 = inner(x1, x3);
  double sx33 = star_top(wedge(x3, x3));
  double sx23 = star_top(wedge(x2, x3));

  Eval q1 = scalar_eval(norm2(e1), (18.0 * n1 - 36.0 * n2 + 3.0 * n3 - sx33) / 42.0,
                        {18.0 * n1 / 42.0, 36.0 * n2 / 42.0, 3.0 * n3 / 42.0, sx33 / 42.0});
  Eval q127 = scalar_eval(norm2(e1) + norm2(e27), n1 + 0.5 * (n3 + sx33) + 2.0 * x13,
                          {n1, 0.5 * n3, 0.5 * sx33, 2.0 * x13});
  Eval q7 = scalar_eval(norm2(e7), 2.0 * n2 + 2.0 * x13, {2.0 * n2, 2.0 * x13});
  Eval q35 = scalar_eval(norm2(e35),
                         2.0 * n2 + 0.5 * n3 - 2.0 * x13 - 4.0 * sx23 - 0.5 * sx33,
                         {2.0 * n2, 0.5 * n3, 2.0 * x13, 4.0 * sx23, 0.5 * sx33});

  // Side conditions on the partial squares.
  Eval sd = form_eval(x1, hodge(x1));  // beta^2 is self dual
  double mag12 = std::sqrt(n1 * n2), mag23 = std::sqrt(n2 * n3);
  Eval z12 = scalar_eval(star_top(wedge(x1, x2)), 0.0, {mag12});
  Eval z23 = scalar_eval(star_top(wedge(x2, hodge(x3))) + sx23, 0.0, {mag23});
  Eval cross = worst({scalar_eval(star_top(wedge(x2, x2)), x13, {n2}),
                      scalar_eval(star_top(wedge(x1, x3)), x13, {std::sqrt(n1 * n3)})});
  double cPhi = inner(eta, S.Phi);
  Eval top = scalar_eval(norm2(e1), cPhi * cPhi / 14.0, {});
  return worst({q1, q127, q7, q35, sd, z12, z23, cross, top});
}

// ----------------------------------------- associator form, R^7 ---

Eval ev_asso(const KForm& F) {
  const auto& S = structure(StructureKind::G2);
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  double t0 = 1.0 - 0.5 * inner(F2, S.star_phi);
  double t1 = norm2(wedge(S.star_phi, F) - (1.0 / 6.0) * F3);
  double t2 = 0.25 * norm2(wedge(S.phi, hodge(F2)));
  double lhs = t0 * t0 + t1 + t2;
  DetPair d = det_one_plus(F);
  Eval main = scalar_eval(lhs, d.oracle, {t0 * t0, t1, t2, d.formula});
  Eval det = scalar_eval(d.formula, d.oracle, {lhs});
  return worst({main, det});
}

Eval ev_g2_contractions(const KForm& u) {
  const auto& S = structure(StructureKind::G2);
  std::vector<double> v = sharp_vec(u);
  KForm su = hodge(u);
  KForm iphi = interior(v, S.phi);
  Eval a = form_eval(wedge(S.phi, interior(v, S.star_phi)), -4.0 * su);
  Eval b = form_eval(wedge(S.star_phi, iphi), 3.0 * su);
  Eval c = form_eval(wedge(S.phi, iphi), 2.0 * hodge(iphi));
  Eval d = form_eval(wedge(S.phi, iphi), 2.0 * wedge(u, S.star_phi));
  return worst({a, b, c, d});
}

Eval ev_g2_metric_recovery(const KForm& u, const KForm& v) {
  const auto& S = structure(StructureKind::G2);
  KForm top = wedge(wedge(interior(sharp_vec(u), S.phi), interior(sharp_vec(v), S.phi)), S.phi);
  double mag = 6.0 * std::sqrt(norm2(u) * norm2(v));
  return scalar_eval(star_top(top), 6.0 * inner(u, v), {mag});
}

Eval ev_g2_two_form_eigen(const KForm& F) {
  const auto& S = structure(StructureKind::G2);
  const auto& B = proj2_bundle(StructureKind::G2);
  KForm b7 = apply(find_comp(B, "pi2_7").P, F, 2);
  KForm b14 = apply(find_comp(B, "pi2_14").P, F, 2);
  Eval a = form_eval(hodge(wedge(S.phi, b7)), 2.0 * b7);
  Eval b = form_eval(hodge(wedge(S.phi, b14)), -1.0 * b14);
  return worst({a, b});
}

// ------------------------------- special Lagrangian forms, R^6 and R^8 ---

Eval ev_sl_main(int nc, const KForm& F) {
  const KForm omega = kahler_omega(nc);
  ComplexKForm W(omega, F);
  double fac = factorial(nc);
  double lhs = 0.0;
  double t0 = 0.0, t1 = 0.0, t2 = 0.0;
  if (nc == 3) {
    ComplexKForm W2 = wedge(W, W);
    ComplexKForm W3 = wedge(W2, W);
    t0 = norm2(W3) / (fac * fac);
    t1 = 2.0 * norm2(su_pq_proj_c(3, W2, 3, 1)) / 4.0;
    lhs = t0 + t1;
  } else {
    ComplexKForm W2 = wedge(W, W);
    ComplexKForm W3 = wedge(W2, W);
    ComplexKForm W4 = wedge(W3, W);
    t0 = norm2(W4) / (fac * fac);
    t1 = 2.0 * norm2(su_pq_proj_c(4, W3, 4, 2)) / 36.0;
    t2 = 8.0 * norm2(su_pq_proj_c(4, W2, 4, 0)) / 4.0;
    lhs = t0 + t1 + t2;
  }
  DetPair d = det_one_plus(F);
  Eval main = scalar_eval(lhs, d.oracle, {t0, t1, t2, d.formula});
  Eval det = scalar_eval(d.formula, d.oracle, {lhs});
  return worst({main, det});
}

Eval ev_sl3_routes(const KForm& F) {
  const auto& S = structure(StructureKind::SU3);
  KForm F2 = wedge(F, F);
  double x = norm2(wedge(S.im_omega, F));
  double y = norm2(wedge(S.re_omega, hodge(F2)));
  double t0 = norm2(cwedge_pow(ComplexKForm(S.omega, F), 3)) / 36.0;
  DetPair d = det_one_plus(F);
  Eval main = scalar_eval(t0 + x + 0.25 * y, d.oracle, {t0, x, 0.25 * y, d.formula});

  KForm p20F = su_pq_proj(3, F, 2, 0);
  KForm wF = wedge(S.omega, F);
  Eval r1 = scalar_eval(x, 2.0 * norm2(p20F), {});
  Eval r2 = scalar_eval(x, 2.0 * norm2(su_pq_proj(3, hodge(wF), 2, 0)), {});
  Eval r3 = scalar_eval(x, 2.0 * norm2(su_pq_proj(3, wF, 3, 1)), {});
  Eval r4 = scalar_eval(y, 2.0 * norm2(su_pq_proj(3, hodge(F2), 2, 0)), {});
  Eval r5 = scalar_eval(y, 2.0 * norm2(su_pq_proj(3, F2, 3, 1)), {});
  return worst({main, r1, r2, r3, r4, r5});
}

Eval ev_su3_contractions(const KForm& u) {
  const auto& S = structure(StructureKind::SU3);
  std::vector<double> v = sharp_vec(u);
  KForm iR = interior(v, S.re_omega);
  std::vector<double> Ju(6, 0.0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) Ju[i] += S.J.at(i, j) * v[j];
  Eval a = form_eval(hodge(wedge(iR, S.re_omega)), 2.0 * flat_vec(6, Ju));
  Eval b = form_eval(hodge(wedge(iR, S.im_omega)), -2.0 * u);
  Eval c = scalar_eval(norm2(iR), 2.0 * norm2(u), {});
  return worst({a, b, c});
}

Eval ev_su3_two_zero_norm(const KForm& F) {
  const auto& S = structure(StructureKind::SU3);
  double t = 2.0 * norm2(su_pq_proj(3, F, 2, 0));
  Eval a = scalar_eval(norm2(wedge(F, S.re_omega)), t, {});
  Eval b = scalar_eval(norm2(wedge(F, S.im_omega)), t, {});
  return worst({a, b});
}

Eval ev_sl4pt2(const KForm& F) {
  const auto& S = structure(StructureKind::SU4);
  KForm w2 = wedge(S.omega, S.omega);
  KForm w3 = wedge(w2, S.omega);
  KForm F2 = wedge(F, F);
  double t0 = -0.5 * star_top(wedge(w2, F2));
  double sw3F = star_top(wedge(w3, F));
  double t1 = sw3F * sw3F / 36.0;
  double t2 = 2.0 * norm2(su_pq_proj(4, F, 2, 0));
  return scalar_eval(t0 + t1 + t2, norm2(F), {t0, t1, t2});
}

Eval ev_sl4pt4(const KForm& F) {
  const auto& S = structure(StructureKind::SU4);
  KForm w2 = wedge(S.omega, S.omega);
  KForm w3 = wedge(w2, S.omega);
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  KForm F4 = wedge(F2, F2);
  KForm sF3 = hodge(F3);
  double sw2F2 = star_top(wedge(w2, F2));
  double t0 = sw2F2 * sw2F2 / 16.0;
  double t1 = star_top(F4) / 12.0;
  double t2 = -star_top(wedge(w3, F)) * star_top(wedge(S.omega, F3)) / 18.0;
  double t3 = 0.5 * norm2(su_pq_proj(4, wedge(S.omega, F2), 4, 2));
  double t4 = -(2.0 / 3.0) * inner(su_pq_proj(4, F, 2, 0), su_pq_proj(4, sF3, 2, 0));
  double t5 = 2.0 * norm2(su_pq_proj(4, F2, 4, 0));
  return scalar_eval(t0 + t1 + t2 + t3 + t4 + t5, 0.25 * norm2(F2),
                     {t0, t1, t2, t3, t4, t5});
}

Eval ev_sl4pt6(const KForm& F) {
  const auto& S = structure(StructureKind::SU4);
  KForm w2 = wedge(S.omega, S.omega);
  KForm F2 = wedge(F, F);
  KForm F3 = wedge(F2, F);
  KForm F4 = wedge(F2, F2);
  KForm sF3 = hodge(F3);
  double t0 = -star_top(wedge(w2, F2)) * star_top(F4) / 48.0;
  double swF3 = star_top(wedge(S.omega, F3));
  double t1 = swF3 * swF3 / 36.0;
  double t2 = norm2(su_pq_proj(4, sF3, 2, 0)) / 18.0;
  return scalar_eval(t0 + t1 + t2, norm2(F3) / 36.0, {t0, t1, t2});
}

Eval ev_sl4_rewrite(const KForm& F) {
  const auto& S = structure(StructureKind::SU4);
  KForm w2 = wedge(S.omega, S.omega);
  KForm F2 = wedge(F, F);
  KForm sF3 = hodge(wedge(F2, F));
  KForm swF2 = hodge(wedge(S.omega, F2));
  double lhs = 0.25 * inner(F2, w2) * inner(F2, S.re_omega);
  double c1 = (2.0 / 3.0) * inner(su4_proj_A(F, +1), su4_proj_A(sF3, +1));
  double c2 = -(2.0 / 3.0) * inner(su4_proj_A(F, -1), su4_proj_A(sF3, -1));
  double c3 = 0.5 * norm2(su4_proj_A(swF2, +1));
  double c4 = -0.5 * norm2(su4_proj_A(swF2, -1));
  return scalar_eval(lhs, c1 + c2 + c3 + c4, {c1, c2, c3, c4});
}

Eval ev_su4_re_split(const KForm& F) {
  const auto& S = structure(StructureKind::SU4);
  double lhs = star_top(wedge(S.re_omega, wedge(F, F)));
  double ap = norm2(su4_proj_A(F, +1)), am = norm2(su4_proj_A(F, -1));
  return scalar_eval(lhs, 2.0 * (ap - am), {2.0 * ap, 2.0 * am});
}

Eval ev_su4_four_split(const KForm& xi) {
  const auto& S = structure(StructureKind::SU4);
  double lhs = 2.0 * norm2(proj_wa_minus(xi));
  double rhs = norm2(su4_proj_A(hodge(wedge(S.omega, xi)), -1));
  return scalar_eval(lhs, rhs, {});
}

Eval ev_su4_spin7_compat(const KForm& F, const KForm& xi) {
  const auto& S = structure(StructureKind::SU4);
  KForm lhs2 = pi2_7_of(F);
  KForm rhs2 = (inner(F, S.omega) / 4.0) * S.omega + su4_proj_A(F, +1);
  KForm lhs4 = proj4_7(xi);
  KForm rhs4 = (inner(xi, S.im_omega) / 8.0) * S.im_omega + proj_wa_minus(xi);
  return worst({form_eval(lhs2, rhs2), form_eval(lhs4, rhs4)});
}

Eval ev_sl4_minor(const KForm& F, const KForm& xi) {
  const auto& S = structure(StructureKind::SU4);
  KForm w2 = wedge(S.omega, S.omega);
  KForm p20 = su_pq_proj(4, F, 2, 0);
  KForm half_w2F = 0.5 * wedge(w2, F);
  Eval m1a = form_eval(su_pq_proj(4, half_w2F, 4, 2), 0.5 * wedge(w2, p20));
  Eval m1b = form_eval(0.5 * wedge(w2, p20), hodge(p20));

  KForm F2 = wedge(F, F);
  KForm sF3 = hodge(wedge(F2, F));
  double lhs = inner(F2, S.re_omega) * star_top(wedge(F2, F2));
  double rhs = (2.0 / 3.0) * star_top(wedge(wedge(sF3, sF3), S.re_omega));
  Eval m2 = scalar_eval(lhs, rhs, {});

  KForm wF = wedge(S.omega, F);
  Eval m3a = form_eval(su_pq_proj(4, w2 - F2, 4, 0), -1.0 * su_pq_proj(4, F2, 4, 0));
  Eval m3b = vanish_eval(su_pq_proj(4, 2.0 * wF, 4, 0), 2.0 * std::sqrt(norm2(wF)));

  KForm rank2 = (inner(xi, S.re_omega) / 8.0) * S.re_omega +
                (inner(xi, S.im_omega) / 8.0) * S.im_omega;
  Eval m4 = form_eval(su_pq_proj(4, xi, 4, 0), rank2);
  return worst({m1a, m1b, m2, m3a, m3b, m4});
}

// --------------------------------------------------- bounds and type checks ---

Eval ev_f02(int nc, const KForm& F11) {
  ComplexKForm W(kahler_omega(nc), F11);
  double fac = factorial(nc);
  double lhs = norm2(cwedge_pow(W, nc)) / (fac * fac);
  DetPair d = det_one_plus(F11);
  Eval main = scalar_eval(lhs, d.oracle, {d.formula});
  Eval det = scalar_eval(d.formula, d.oracle, {lhs});
  return worst({main, det});
}

double calibrated_term(StructureKind context, const KForm& F, double theta) {
  switch (context) {
    case StructureKind::Spin7: {
      const auto& S = structure(StructureKind::Spin7);
      KForm F2 = wedge(F, F);
      return 1.0 - 0.5 * inner(F2, S.Phi) + star_top(wedge(F2, F2)) / 24.0;
    }
    case StructureKind::G2: {
      const auto& S = structure(StructureKind::G2);
      return 1.0 - 0.5 * inner(wedge(F, F), S.star_phi);
    }
    case StructureKind::SU3:
    case StructureKind::SU4: {
      int nc = (context == StructureKind::SU3) ? 3 : 4;
      ComplexKForm Wn = cwedge_pow(ComplexKForm(kahler_omega(nc), F), nc);
      double fac = factorial(nc);
      double a = Wn.re[0] / fac, b = Wn.im[0] / fac;
      return a * std::cos(theta) + b * std::sin(theta);
    }
  }
  throw std::logic_error("calibrated_term: unreachable");
}

Eval ev_phase(StructureKind context, const KForm& F, double theta) {
  return bound_eval(calibrated_term(context, F, theta), det_one_plus(F).formula);
}

Eval ev_restrict(bool cayley_to_asso, const KForm& F) {
  double c;
  if (cayley_to_asso) {
    static const KForm star7phi = shift_embed(structure(StructureKind::G2).star_phi);
    c = 1.0 - 0.5 * inner(wedge(F, F), star7phi);
  } else {
    static const KForm w = shift_embed(kahler_omega(3));
    static const KForm w2 = wedge(w, w);
    c = 1.0 - 0.25 * inner(wedge(F, F), w2);
  }
  return bound_eval(c, det_one_plus(F).formula);
}

// ------------------------------------------------------------ suite driver ---

/// Per-sample inputs, drawn in a fixed order so the stream is part of the
/// reproducibility contract: F, G (2-forms), xi (4-form), u, v (1-forms),
/// theta uniform in [-pi, pi).
struct SampleBundle {
  KForm F, G, xi, u, v;
  double theta = 0.0;
};

SampleBundle draw_bundle(int n, Rng& rng, double range) {
  SampleBundle b;
  auto fill = [&](KForm& f, int k) {
    f = KForm(n, k);
    for (double& c : f.coeffs) c = rng.uniform(-range, range);
  };
  fill(b.F, 2);
  fill(b.G, 2);
  fill(b.xi, 4);
  fill(b.u, 1);
  fill(b.v, 1);
  b.theta = rng.uniform(-kPi, kPi);
  return b;
}

json kform_json(const KForm& a) { return json::parse(to_json(a)); }

std::string bundle_json(const SampleBundle& b) {
  json j;
  j["F"] = kform_json(b.F);
  j["G"] = kform_json(b.G);
  j["xi"] = kform_json(b.xi);
  j["u"] = kform_json(b.u);
  j["v"] = kform_json(b.v);
  j["theta"] = b.theta;
  return j.dump();
}

struct CheckDef {
  const char* id;
  std::function<Eval(const SampleBundle&)> eval;
};

std::vector<CheckDef> make_registry(StructureKind ctx) {
  std::vector<CheckDef> r;
  switch (ctx) {
    case StructureKind::Spin7:
      r = {
          {"cayley", [](const SampleBundle& b) { return ev_cayley(b.F); }},
          {"cayley_degree2", [](const SampleBundle& b) { return ev_caypt2(b.F); }},
          {"cayley_degree4", [](const SampleBundle& b) { return ev_caypt4(b.F); }},
          {"cayley_degree6", [](const SampleBundle& b) { return ev_caypt6(b.F); }},
          {"det_formula", [](const SampleBundle& b) { return ev_det_formula(b.F); }},
          {"restrict_to_g2", [](const SampleBundle& b) { return ev_restrict(true, b.F); }},
          {"calibration_bound",
           [](const SampleBundle& b) { return ev_phase(StructureKind::Spin7, b.F, b.theta); }},
          {"cubic_square_pair",
           [](const SampleBundle& b) { return ev_cubic_square_pair(b.F, b.xi); }},
          {"seven_cube", [](const SampleBundle& b) { return ev_seven_cube(pi2_7_of(b.F)); }},
          {"seven_quartic",
           [](const SampleBundle& b) { return ev_seven_quartic(pi2_7_of(b.F)); }},
          {"twentyone_quartic",
           [](const SampleBundle& b) { return ev_twentyone_quartic(pi2_21_of(b.F)); }},
          {"mixed_quartic",
           [](const SampleBundle& b) {
             return ev_mixed_quartic(pi2_7_of(b.F), pi2_21_of(b.G));
           }},
          {"wedge_type_split",
           [](const SampleBundle& b) { return ev_wedge_type_split(b.F, b.G); }},
          {"quartic_parts", [](const SampleBundle& b) { return ev_quartic_parts(b.F); }},
      };
      break;
    case StructureKind::G2:
      r = {
          {"associator", [](const SampleBundle& b) { return ev_asso(b.F); }},
          {"det_formula", [](const SampleBundle& b) { return ev_det_formula(b.F); }},
          {"restrict_to_sl3", [](const SampleBundle& b) { return ev_restrict(false, b.F); }},
          {"calibration_bound",
           [](const SampleBundle& b) { return ev_phase(StructureKind::G2, b.F, b.theta); }},
          {"vector_contractions",
           [](const SampleBundle& b) { return ev_g2_contractions(b.u); }},
          {"metric_recovery",
           [](const SampleBundle& b) { return ev_g2_metric_recovery(b.u, b.v); }},
          {"two_form_eigen",
           [](const SampleBundle& b) { return ev_g2_two_form_eigen(b.F); }},
      };
      break;
    case StructureKind::SU3:
      r = {
          {"sl_main", [](const SampleBundle& b) { return ev_sl_main(3, b.F); }},
          {"det_formula", [](const SampleBundle& b) { return ev_det_formula(b.F); }},
          {"type_11_det",
           [](const SampleBundle& b) {
             return ev_f02(3, b.F - su_pq_proj(3, b.F, 2, 0));
           }},
          {"calibration_bound",
           [](const SampleBundle& b) { return ev_phase(StructureKind::SU3, b.F, b.theta); }},
          {"vector_contractions",
           [](const SampleBundle& b) { return ev_su3_contractions(b.u); }},
          {"two_zero_norm",
           [](const SampleBundle& b) { return ev_su3_two_zero_norm(b.F); }},
          {"projection_routes", [](const SampleBundle& b) { return ev_sl3_routes(b.F); }},
      };
      break;
    case StructureKind::SU4:
      r = {
          {"sl_main", [](const SampleBundle& b) { return ev_sl_main(4, b.F); }},
          {"sl_degree2", [](const SampleBundle& b) { return ev_sl4pt2(b.F); }},
          {"sl_degree4", [](const SampleBundle& b) { return ev_sl4pt4(b.F); }},
          {"sl_degree6", [](const SampleBundle& b) { return ev_sl4pt6(b.F); }},
          {"quartic_rewrite", [](const SampleBundle& b) { return ev_sl4_rewrite(b.F); }},
          {"det_formula", [](const SampleBundle& b) { return ev_det_formula(b.F); }},
          {"type_11_det",
           [](const SampleBundle& b) {
             return ev_f02(4, b.F - su_pq_proj(4, b.F, 2, 0));
           }},
          {"calibration_bound",
           [](const SampleBundle& b) { return ev_phase(StructureKind::SU4, b.F, b.theta); }},
          {"re_volume_split", [](const SampleBundle& b) { return ev_su4_re_split(b.F); }},
          {"four_form_split", [](const SampleBundle& b) { return ev_su4_four_split(b.xi); }},
          {"spin7_compat",
           [](const SampleBundle& b) { return ev_su4_spin7_compat(b.F, b.xi); }},
          {"minor_identities",
           [](const SampleBundle& b) { return ev_sl4_minor(b.F, b.xi); }},
      };
      break;
  }
  return r;
}

const std::vector<CheckDef>& registry(StructureKind ctx) {
  static const std::vector<CheckDef> spin7 = make_registry(StructureKind::Spin7);
  static const std::vector<CheckDef> g2 = make_registry(StructureKind::G2);
  static const std::vector<CheckDef> su3 = make_registry(StructureKind::SU3);
  static const std::vector<CheckDef> su4 = make_registry(StructureKind::SU4);
  switch (ctx) {
    case StructureKind::Spin7: return spin7;
    case StructureKind::G2: return g2;
    case StructureKind::SU3: return su3;
    case StructureKind::SU4: return su4;
  }
  throw std::logic_error("registry: unreachable");
}

ResidualReport one_sample_report(const std::string& id, Eval e, double tol,
                                 const json& inputs) {
  ResidualReport r;
  r.identity_id = id;
  r.samples = 1;
  r.max_rel_residual = e.rel;
  r.mean_rel_residual = e.rel;
  r.scale = e.scale;
  r.tolerance = tol;
  r.pass = e.rel <= tol;
  r.worst_input = inputs.dump();
  return r;
}

json named_forms(std::initializer_list<std::pair<const char*, const KForm*>> forms) {
  json j;
  for (const auto& [name, f] : forms) j[name] = kform_json(*f);
  return j;
}

void check_shape(const KForm& F, int n, int k, const char* msg) {
  require(F.n == n && F.k == k, msg);
}

/// Validates membership of `a` in the range of the Lambda^2_7 projection
/// (or its complement); used by the subspace-restricted lemmas.
void check_spin7_part(const KForm& a, bool seven, const char* msg) {
  KForm p = pi2_7_of(a);
  const KForm& want = seven ? p : a;
  KForm diff = seven ? (a - p) : p;
  (void)want;
  double rel = std::sqrt(norm2(diff)) / std::max(1.0, std::sqrt(norm2(a)));
  require(rel <= 1e-9, msg);
}

}  // namespace

// ------------------------------------------------------------- public API ---

std::string to_json(const ResidualReport& r) {
  json j;
  j["identity_id"] = r.identity_id;
  j["samples"] = r.samples;
  j["max_rel_residual"] = r.max_rel_residual;
  j["mean_rel_residual"] = r.mean_rel_residual;
  j["scale"] = r.scale;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["worst_input"] = r.worst_input.empty() ? json(nullptr) : json::parse(r.worst_input);
  return j.dump();
}

ResidualReport cayley_check(const KForm& F, double tol) {
  check_shape(F, 8, 2, "cayley_check: expected a 2-form on R^8");
  return one_sample_report("cayley", ev_cayley(F), tol, named_forms({{"F", &F}}));
}

ResidualReport cayley_degree_check(const KForm& F, double tol) {
  check_shape(F, 8, 2, "cayley_degree_check: expected a 2-form on R^8");
  Eval e = worst({ev_caypt2(F), ev_caypt4(F), ev_caypt6(F)});
  return one_sample_report("cayley_degree", e, tol, named_forms({{"F", &F}}));
}

ResidualReport associator_check(const KForm& F, double tol) {
  check_shape(F, 7, 2, "associator_check: expected a 2-form on R^7");
  return one_sample_report("associator", ev_asso(F), tol, named_forms({{"F", &F}}));
}

ResidualReport sl3_check(const KForm& F, double tol) {
  check_shape(F, 6, 2, "sl3_check: expected a 2-form on R^6");
  return one_sample_report("sl_main", ev_sl_main(3, F), tol, named_forms({{"F", &F}}));
}

ResidualReport sl4_check(const KForm& F, double tol) {
  check_shape(F, 8, 2, "sl4_check: expected a 2-form on R^8");
  Eval e = worst({ev_sl_main(4, F), ev_sl4pt2(F), ev_sl4pt4(F), ev_sl4pt6(F),
                  ev_sl4_rewrite(F)});
  return one_sample_report("sl_main_and_degrees", e, tol, named_forms({{"F", &F}}));
}

double restriction_slack(const std::string& kind, const KForm& F) {
  if (kind == "cayley_to_asso") {
    check_shape(F, 8, 2, "restriction_slack: expected a 2-form on R^8");
    static const KForm star7phi = shift_embed(structure(StructureKind::G2).star_phi);
    double c = 1.0 - 0.5 * inner(wedge(F, F), star7phi);
    return std::sqrt(det_one_plus(F).formula) - std::fabs(c);
  }
  if (kind == "asso_to_sl3") {
    check_shape(F, 7, 2, "restriction_slack: expected a 2-form on R^7");
    static const KForm w = shift_embed(kahler_omega(3));
    static const KForm w2 = wedge(w, w);
    double c = 1.0 - 0.25 * inner(wedge(F, F), w2);
    return std::sqrt(det_one_plus(F).formula) - std::fabs(c);
  }
  throw std::invalid_argument("restriction_slack: unknown kind");
}

ResidualReport restriction_bound_check(const std::string& kind, const KForm& F,
                                       double tol) {
  Eval e;
  if (kind == "cayley_to_asso") {
    check_shape(F, 8, 2, "restriction_bound_check: expected a 2-form on R^8");
    e = ev_restrict(true, F);
  } else if (kind == "asso_to_sl3") {
    check_shape(F, 7, 2, "restriction_bound_check: expected a 2-form on R^7");
    e = ev_restrict(false, F);
  } else {
    throw std::invalid_argument("restriction_bound_check: unknown kind");
  }
  return one_sample_report("restrict_" + kind, e, tol, named_forms({{"F", &F}}));
}

ResidualReport algebra_lemma_check(const std::string& lemma_id,
                                   const std::vector<KForm>& inputs, double tol) {
  auto need = [&](std::size_t cnt) {
    require(inputs.size() == cnt, "algebra_lemma_check: wrong input count");
  };
  Eval e;
  if (lemma_id == "cubic_square_pair") {
    need(2);
    check_shape(inputs[0], 8, 2, "cubic_square_pair: expected a 2-form on R^8");
    check_shape(inputs[1], 8, 4, "cubic_square_pair: expected a 4-form on R^8");
    e = ev_cubic_square_pair(inputs[0], inputs[1]);
  } else if (lemma_id == "seven_cube" || lemma_id == "seven_quartic") {
    need(1);
    check_shape(inputs[0], 8, 2, "seven-part lemma: expected a 2-form on R^8");
    check_spin7_part(inputs[0], true, "seven-part lemma: input not in Lambda^2_7");
    e = (lemma_id == "seven_cube") ? ev_seven_cube(inputs[0])
                                   : ev_seven_quartic(inputs[0]);
  } else if (lemma_id == "twentyone_quartic") {
    need(1);
    check_shape(inputs[0], 8, 2, "twentyone_quartic: expected a 2-form on R^8");
    check_spin7_part(inputs[0], false, "twentyone_quartic: input not in Lambda^2_21");
    e = ev_twentyone_quartic(inputs[0]);
  } else if (lemma_id == "mixed_quartic") {
    need(2);
    check_shape(inputs[0], 8, 2, "mixed_quartic: expected 2-forms on R^8");
    check_shape(inputs[1], 8, 2, "mixed_quartic: expected 2-forms on R^8");
    check_spin7_part(inputs[0], true, "mixed_quartic: first input not in Lambda^2_7");
    check_spin7_part(inputs[1], false, "mixed_quartic: second input not in Lambda^2_21");
    e = ev_mixed_quartic(inputs[0], inputs[1]);
  } else if (lemma_id == "wedge_type_split") {
    need(2);
    check_shape(inputs[0], 8, 2, "wedge_type_split: expected 2-forms on R^8");
    check_shape(inputs[1], 8, 2, "wedge_type_split: expected 2-forms on R^8");
    e = ev_wedge_type_split(inputs[0], inputs[1]);
  } else if (lemma_id == "quartic_parts") {
    need(1);
    check_shape(inputs[0], 8, 2, "quartic_parts: expected a 2-form on R^8");
    e = ev_quartic_parts(inputs[0]);
  } else if (lemma_id == "g2_contractions") {
    need(1);
    check_shape(inputs[0], 7, 1, "g2_contractions: expected a 1-form on R^7");
    e = ev_g2_contractions(inputs[0]);
  } else if (lemma_id == "g2_metric_recovery") {
    need(2);
    check_shape(inputs[0], 7, 1, "g2_metric_recovery: expected 1-forms on R^7");
    check_shape(inputs[1], 7, 1, "g2_metric_recovery: expected 1-forms on R^7");
    e = ev_g2_metric_recovery(inputs[0], inputs[1]);
  } else if (lemma_id == "g2_two_form_eigen") {
    need(1);
    check_shape(inputs[0], 7, 2, "g2_two_form_eigen: expected a 2-form on R^7");
    e = ev_g2_two_form_eigen(inputs[0]);
  } else if (lemma_id == "su3_contractions") {
    need(1);
    check_shape(inputs[0], 6, 1, "su3_contractions: expected a 1-form on R^6");
    e = ev_su3_contractions(inputs[0]);
  } else if (lemma_id == "su3_two_zero_norm") {
    need(1);
    check_shape(inputs[0], 6, 2, "su3_two_zero_norm: expected a 2-form on R^6");
    e = ev_su3_two_zero_norm(inputs[0]);
  } else if (lemma_id == "sl3_routes") {
    need(1);
    check_shape(inputs[0], 6, 2, "sl3_routes: expected a 2-form on R^6");
    e = ev_sl3_routes(inputs[0]);
  } else if (lemma_id == "su4_re_split") {
    need(1);
    check_shape(inputs[0], 8, 2, "su4_re_split: expected a 2-form on R^8");
    e = ev_su4_re_split(inputs[0]);
  } else if (lemma_id == "su4_four_split") {
    need(1);
    check_shape(inputs[0], 8, 4, "su4_four_split: expected a 4-form on R^8");
    e = ev_su4_four_split(inputs[0]);
  } else if (lemma_id == "su4_spin7_compat") {
    need(2);
    check_shape(inputs[0], 8, 2, "su4_spin7_compat: expected a 2-form on R^8");
    check_shape(inputs[1], 8, 4, "su4_spin7_compat: expected a 4-form on R^8");
    e = ev_su4_spin7_compat(inputs[0], inputs[1]);
  } else if (lemma_id == "sl4_minor") {
    need(2);
    check_shape(inputs[0], 8, 2, "sl4_minor: expected a 2-form on R^8");
    check_shape(inputs[1], 8, 4, "sl4_minor: expected a 4-form on R^8");
    e = ev_sl4_minor(inputs[0], inputs[1]);
  } else {
    throw std::invalid_argument("algebra_lemma_check: unknown lemma id");
  }
  json j;
  j["inputs"] = json::array();
  for (const KForm& f : inputs) j["inputs"].push_back(kform_json(f));
  return one_sample_report(lemma_id, e, tol, j);
}

ResidualReport sln_f02_check(int nc, const KForm& F, double tol) {
  require(nc >= 2 && nc <= 4, "sln_f02_check: nc must be in {2, 3, 4}");
  check_shape(F, 2 * nc, 2, "sln_f02_check: form dimension must be 2*nc");
  KForm p20 = su_pq_proj(nc, F, 2, 0);
  double rel20 = std::sqrt(norm2(p20)) / std::max(1.0, std::sqrt(norm2(F)));
  require(rel20 <= 1e-12, "sln_f02_check: [[2,0]]-part of the input is too large");
  return one_sample_report("type_11_det", ev_f02(nc, F), tol,
                           named_forms({{"F", &F}}));
}

double phase_slack(StructureKind context, const KForm& F, double theta) {
  check_shape(F, kind_dim(context), 2, "phase_slack: wrong form shape for context");
  return std::sqrt(det_one_plus(F).formula) -
         std::fabs(calibrated_term(context, F, theta));
}

ResidualReport phase_bound_check(StructureKind context, const KForm& F, double theta,
                                 double tol) {
  check_shape(F, kind_dim(context), 2, "phase_bound_check: wrong form shape for context");
  json j = named_forms({{"F", &F}});
  j["theta"] = theta;
  return one_sample_report("calibration_bound", ev_phase(context, F, theta), tol, j);
}

std::vector<std::string> suite_identity_ids(StructureKind context) {
  std::vector<std::string> ids;
  for (const auto& c : registry(context)) ids.emplace_back(c.id);
  return ids;
}

StructureKind parse_context(const std::string& name) {
  if (name == "spin7") return StructureKind::Spin7;
  if (name == "g2") return StructureKind::G2;
  if (name == "sl3" || name == "su3") return StructureKind::SU3;
  if (name == "sl4" || name == "su4") return StructureKind::SU4;
  throw std::invalid_argument("unknown identity context: " + name);
}

std::vector<ResidualReport> random_suite(StructureKind context, long count,
                                         std::uint64_t seed, double range, double tol,
                                         int threads) {
  require(count >= 1, "random_suite: count must be >= 1");
  require(range >= 0.0, "random_suite: range must be >= 0");
  const auto& checks = registry(context);
  const int n = kind_dim(context);
  const int m = static_cast<int>(checks.size());

  struct Agg {
    double max_rel = -1.0;
    double sum_rel = 0.0;
    double scale = 1.0;
    long worst_index = 0;
  };

  // Fixed-size sample blocks merged in block order keep the aggregation
  // independent of the worker count.
  const long kBlock = 256;
  const long nblocks = (count + kBlock - 1) / kBlock;
  std::vector<std::vector<Agg>> block_aggs(static_cast<std::size_t>(nblocks),
                                           std::vector<Agg>(m));

  auto run_block = [&](long bi) {
    auto& aggs = block_aggs[static_cast<std::size_t>(bi)];
    const long lo = bi * kBlock, hi = std::min(count, lo + kBlock);
    for (long i = lo; i < hi; ++i) {
      Rng rng = substream(seed, static_cast<std::uint64_t>(i));
      SampleBundle b = draw_bundle(n, rng, range);
      for (int c = 0; c < m; ++c) {
        Eval e = checks[c].eval(b);
        Agg& a = aggs[c];
        a.sum_rel += e.rel;
        if (e.rel > a.max_rel) {
          a.max_rel = e.rel;
          a.scale = e.scale;
          a.worst_index = i;
        }
      }
    }
  };

  int nw = threads;
  if (nw <= 0) nw = static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  nw = static_cast<int>(std::min<long>(nw, nblocks));
  if (nw == 1) {
    for (long bi = 0; bi < nblocks; ++bi) run_block(bi);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (long bi = next.fetch_add(1); bi < nblocks; bi = next.fetch_add(1))
          run_block(bi);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<ResidualReport> out(m);
  for (int c = 0; c < m; ++c) {
    Agg total;
    for (long bi = 0; bi < nblocks; ++bi) {
      const Agg& a = block_aggs[static_cast<std::size_t>(bi)][c];
      total.sum_rel += a.sum_rel;
      if (a.max_rel > total.max_rel) {
        total.max_rel = a.max_rel;
        total.scale = a.scale;
        total.worst_index = a.worst_index;
      }
    }
    ResidualReport& r = out[c];
    r.identity_id = checks[c].id;
    r.samples = count;
    r.max_rel_residual = std::max(0.0, total.max_rel);
    r.mean_rel_residual = total.sum_rel / static_cast<double>(count);
    r.scale = total.scale;
    r.tolerance = tol;
    r.pass = r.max_rel_residual <= tol;
    Rng rng = substream(seed, static_cast<std::uint64_t>(total.worst_index));
    r.worst_input = bundle_json(draw_bundle(n, rng, range));
  }
  return out;
}

}  // namespace mvlab
