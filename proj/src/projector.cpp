#include "mvlab/projector.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace mvlab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Matrix of alpha -> *(w ^ alpha) on Lambda^2 R^n.
Matrix wedge_star_op(const KForm& w) {
  return matrix_of(w.n, 2, 2, [&](const KForm& e) { return hodge(wedge(w, e)); });
}

/// c2 T^2 + c1 T + c0 I.
Matrix quadratic(const Matrix& T, double c2, double c1, double c0) {
  return c2 * (T * T) + c1 * T + c0 * Matrix::identity(T.rows);
}

Projector labeled(std::string label, Matrix P) {
  int r = static_cast<int>(std::lround(trace(P)));
  return Projector{std::move(label), std::move(P), r};
}

/// Rank-1 projector onto the line spanned by a unit-normalized form.
Matrix line_projector(const KForm& a) {
  double n2 = norm2(a);
  Matrix P(a.size(), a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) P.at(i, j) = a[i] * a[j] / n2;
  return P;
}

ProjectorBundle build_proj2(StructureKind kind) {
  ProjectorBundle b;
  b.kind = kind;
  b.degree = 2;
  const HolonomyStructure& s = structure(kind);
  switch (kind) {
    case StructureKind::G2: {
      // *(phi^.) has eigenvalue 2 on Lambda^2_7 and -1 on Lambda^2_14.
      Matrix T = wedge_star_op(s.phi);
      b.comps.push_back(labeled("pi2_7", quadratic(T, 0.0, 1.0 / 3.0, 1.0 / 3.0)));
      b.comps.push_back(labeled("pi2_14", quadratic(T, 0.0, -1.0 / 3.0, 2.0 / 3.0)));
      break;
    }
    case StructureKind::Spin7: {
      // *(Phi^.) has eigenvalue 3 on Lambda^2_7 and -1 on Lambda^2_21.
      Matrix S = wedge_star_op(s.Phi);
      b.comps.push_back(labeled("pi2_7", quadratic(S, 0.0, 0.25, 0.25)));
      b.comps.push_back(labeled("pi2_21", quadratic(S, 0.0, -0.25, 0.75)));
      break;
    }
    case StructureKind::SU3: {
      // *(omega^.) has eigenvalues 2 (R omega), 1 ([[2,0]]), -1 ([1,1]_0).
      Matrix K = wedge_star_op(s.omega);
      b.comps.push_back(labeled("r_omega", quadratic(K, 1.0 / 3.0, 0.0, -1.0 / 3.0)));
      b.comps.push_back(labeled("br20", quadratic(K, -0.5, 0.5, 1.0)));
      b.comps.push_back(labeled("b11_0", quadratic(K, 1.0 / 6.0, -0.5, 1.0 / 3.0)));
      break;
    }
    case StructureKind::SU4: {
      // *(omega^2^.) has eigenvalues 6 (R omega), 2 ([[2,0]]), -2 ([1,1]_0);
      // *(ReOmega^.) refines [[2,0]] into A+/A- (eigenvalues +-2, zero
      // elsewhere), so (R^2 +- 2R)/8 are already global projectors.
      Matrix K = wedge_star_op(wedge(s.omega, s.omega));
      Matrix R = wedge_star_op(s.re_omega);
      b.comps.push_back(labeled("r_omega", quadratic(K, 1.0 / 32.0, 0.0, -1.0 / 8.0)));
      b.comps.push_back(labeled("a_plus", quadratic(R, 1.0 / 8.0, 0.25, 0.0)));
      b.comps.push_back(labeled("a_minus", quadratic(R, 1.0 / 8.0, -0.25, 0.0)));
      b.comps.push_back(labeled("b11_0", quadratic(K, 1.0 / 32.0, -0.25, 3.0 / 8.0)));
      break;
    }
  }
  return b;
}

}  // namespace

const ProjectorBundle& proj2_bundle(StructureKind kind) {
  static std::map<StructureKind, ProjectorBundle> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(kind);
  if (it == cache.end()) it = cache.emplace(kind, build_proj2(kind)).first;
  return it->second;
}

const ProjectorBundle& proj4_bundle_spin7() {
  static ProjectorBundle b;
  static std::once_flag once;
  std::call_once(once, [] {
    b.kind = StructureKind::Spin7;
    b.degree = 4;
    const HolonomyStructure& s = structure(StructureKind::Spin7);
    Matrix H = matrix_of(8, 4, 4, [](const KForm& e) { return hodge(e); });
    Matrix I = Matrix::identity(H.rows);
    Matrix P1 = line_projector(s.Phi);
    Matrix P7(H.rows, H.cols);
    for (const KForm& v : lambda_frame(4))
      for (int i = 0; i < H.rows; ++i)
        for (int j = 0; j < H.cols; ++j) P7.at(i, j) += v[i] * v[j];
    Matrix Psd = 0.5 * (I + H);  // self-dual half: contains 1 + 7 + 27
    b.comps.push_back(labeled("pi4_1", P1));
    b.comps.push_back(labeled("pi4_7", P7));
    b.comps.push_back(labeled("pi4_27", Psd - P1 - P7));
    b.comps.push_back(labeled("pi4_35", 0.5 * (I - H)));
  });
  return b;
}

std::vector<std::pair<std::string, KForm>> proj2(const HolonomyStructure& s, const KForm& a) {
  require(a.n == s.n && a.k == 2, "proj2: need a 2-form matching the structure dimension");
  const ProjectorBundle& b = proj2_bundle(s.kind);
  std::vector<std::pair<std::string, KForm>> out;
  out.reserve(b.comps.size());
  for (const Projector& c : b.comps) out.emplace_back(c.label, apply(c.P, a, 2));
  return out;
}

KForm lambda_map(int k, const KForm& alpha) {
  require(alpha.n == 8 && alpha.k == 1, "lambda_map: need a 1-form on R^8");
  require(alpha[0] == 0.0, "lambda_map: e^0 component must vanish");
  const HolonomyStructure& g2 = structure(StructureKind::G2);
  static const KForm phi7 = shift_embed(g2.phi);           // on indices 1..7
  static const KForm star_phi7 = shift_embed(g2.star_phi);
  KForm e0 = KForm::basis(8, 1, {0});
  std::vector<double> v = sharp_vec(alpha);
  switch (k) {
    case 2:
      return 0.5 * (wedge(e0, alpha) + interior(v, phi7));
    case 4: {
      KForm a4 = wedge(e0, interior(v, star_phi7)) - wedge(alpha, phi7);
      return (1.0 / std::sqrt(8.0)) * a4;
    }
    case 6:
      return hodge(lambda_map(2, alpha));
    default:
      throw std::invalid_argument("lambda_map: k must be 2, 4, or 6");
  }
}

const std::vector<KForm>& lambda_frame(int k) {
  static std::map<int, std::vector<KForm>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) {
    std::vector<KForm> frame;
    frame.reserve(7);
    for (int u = 1; u <= 7; ++u) frame.push_back(lambda_map(k, KForm::basis(8, 1, {u})));
    it = cache.emplace(k, std::move(frame)).first;
  }
  return it->second;
}

KForm proj4_7(const KForm& xi) {
  require(xi.n == 8 && xi.k == 4, "proj4_7: need a 4-form on R^8");
  KForm out(8, 4);
  for (const KForm& v : lambda_frame(4)) out += inner(xi, v) * v;
  return out;
}

// --------------------------------------------------------------- su_pq ------

namespace {

/// Linear extension of a generator substitution: each index j of `a` is
/// replaced by the complex 1-form img[j] (living in the target algebra) and
/// the monomial re-expanded by iterated wedge.
ComplexKForm substitute(const ComplexKForm& a, const std::vector<ComplexKForm>& img) {
  int k = a.re.k;
  int tn = img.empty() ? a.re.n : img[0].re.n;
  ComplexKForm out{KForm(tn, k), KForm(tn, k)};
  const MultiIndexTable& t = a.re.table();
  for (int r = 0; r < t.size(); ++r) {
    double cr = a.re[r], ci = a.im[r];
    if (cr == 0.0 && ci == 0.0) continue;
    ComplexKForm m{KForm(tn, 0), KForm(tn, 0)};
    m.re[0] = 1.0;
    for (int pos = 0; pos < k; ++pos) m = wedge(m, img[t[r][pos]]);
    out.re += cr * m.re - ci * m.im;
    out.im += cr * m.im + ci * m.re;
  }
  return out;
}

/// e^{2a} = (f^a + fbar^a)/2, e^{2a+1} = (f^a - fbar^a)/(2i), with the
/// generator algebra ordered (f^0..f^{nc-1}, fbar^0..fbar^{nc-1}).
std::vector<ComplexKForm> e_to_f_images(int nc) {
  int n = 2 * nc;
  std::vector<ComplexKForm> img;
  img.reserve(n);
  for (int a = 0; a < nc; ++a) {
    img.emplace_back(KForm::basis(n, 1, {a}, 0.5) + KForm::basis(n, 1, {nc + a}, 0.5),
                     KForm(n, 1));
    img.emplace_back(KForm(n, 1),
                     KForm::basis(n, 1, {a}, -0.5) + KForm::basis(n, 1, {nc + a}, 0.5));
  }
  // interleave: built (2a, 2a+1) pairs in order already
  return img;
}

/// f^a = e^{2a} + i e^{2a+1}, fbar^a = e^{2a} - i e^{2a+1}.
std::vector<ComplexKForm> f_to_e_images(int nc) {
  int n = 2 * nc;
  std::vector<ComplexKForm> img(2 * nc);
  for (int a = 0; a < nc; ++a) {
    img[a] = ComplexKForm{KForm::basis(n, 1, {2 * a}), KForm::basis(n, 1, {2 * a + 1})};
    img[nc + a] =
        ComplexKForm{KForm::basis(n, 1, {2 * a}), KForm::basis(n, 1, {2 * a + 1}, -1.0)};
  }
  return img;
}

Matrix build_su_pq(int nc, int k, int p, int q) {
  int n = 2 * nc;
  const MultiIndexTable& t = MultiIndexTable::get(n, k);
  const std::vector<ComplexKForm> to_f = e_to_f_images(nc);
  const std::vector<ComplexKForm> to_e = f_to_e_images(nc);
  const unsigned hol_mask = (1u << nc) - 1u;
  Matrix M(t.size(), t.size());
  for (int j = 0; j < t.size(); ++j) {
    ComplexKForm col{KForm(n, k), KForm(n, k)};
    col.re[j] = 1.0;
    ComplexKForm in_f = substitute(col, to_f);
    // keep only the (p,q) and (q,p) monomials of the f-frame expansion
    for (int r = 0; r < t.size(); ++r) {
      int pr = __builtin_popcount(t.bits(r) & hol_mask);
      int qr = k - pr;
      if (!((pr == p && qr == q) || (pr == q && qr == p))) {
        in_f.re[r] = 0.0;
        in_f.im[r] = 0.0;
      }
    }
    ComplexKForm back = substitute(in_f, to_e);
    // a real input form has conjugate-symmetric (p,q)/(q,p) parts, so the
    // imaginary residue is an exact zero of the dyadic arithmetic
    require(norm2(back.im) < 1e-24, "su_pq projection produced a non-real column");
    for (int i = 0; i < t.size(); ++i) M.at(i, j) = back.re[i];
  }
  return M;
}

}  // namespace

const Matrix& su_pq_matrix(int nc, int k, int p, int q) {
  require(nc >= 2 && nc <= 4, "su_pq_matrix: nc must be 2..4");
  require(p >= q && q >= 0 && p <= nc && q <= nc, "su_pq_matrix: need nc >= p >= q >= 0");
  require(p + q == k && k <= 2 * nc, "su_pq_matrix: need p + q = k <= 2 nc");
  static std::map<std::tuple<int, int, int, int>, Matrix> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(nc, k, p, q);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_su_pq(nc, k, p, q)).first;
  return it->second;
}

KForm su_pq_proj(int nc, const KForm& a, int p, int q) {
  require(a.n == 2 * nc, "su_pq_proj: form dimension != 2 nc");
  require(a.k == p + q, "su_pq_proj: form degree != p + q");
  return apply(su_pq_matrix(nc, a.k, p, q), a, a.k);
}

KForm su4_proj_A(const KForm& beta, int sgn) {
  require(beta.n == 8 && beta.k == 2, "su4_proj_A: need a 2-form on R^8");
  require(sgn == 1 || sgn == -1, "su4_proj_A: sgn must be +-1");
  const HolonomyStructure& s = structure(StructureKind::SU4);
  KForm r1 = hodge(wedge(s.re_omega, beta));   // R beta
  KForm r2 = hodge(wedge(s.re_omega, r1));     // R^2 beta
  return (1.0 / 8.0) * (r2 + (2.0 * sgn) * r1);
}

KForm proj_r_omega(const HolonomyStructure& s, const KForm& a) {
  require(s.nc > 0, "proj_r_omega: structure has no Kaehler form");
  require(a.n == s.n && a.k == 2, "proj_r_omega: need a 2-form matching the structure");
  return (inner(a, s.omega) / s.nc) * s.omega;
}

}  // namespace mvlab
