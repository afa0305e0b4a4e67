#include "mvlab/structures.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace mvlab {

std::string kind_name(StructureKind k) {
  switch (k) {
    case StructureKind::G2: return "g2";
    case StructureKind::Spin7: return "spin7";
    case StructureKind::SU3: return "su3";
    case StructureKind::SU4: return "su4";
  }
  return "?";
}

StructureKind parse_kind(const std::string& name) {
  if (name == "g2") return StructureKind::G2;
  if (name == "spin7") return StructureKind::Spin7;
  if (name == "su3") return StructureKind::SU3;
  if (name == "su4") return StructureKind::SU4;
  throw std::invalid_argument("unknown structure kind: " + name);
}

int kind_dim(StructureKind k) {
  switch (k) {
    case StructureKind::G2: return 7;
    case StructureKind::Spin7: return 8;
    case StructureKind::SU3: return 6;
    case StructureKind::SU4: return 8;
  }
  return 0;
}

namespace {

/// The canonical G2 3-form on R^7 (0-based indices; add 1 to each index to
/// recover the familiar 1-based coefficient list).
KForm g2_phi() {
  KForm phi(7, 3);
  phi += KForm::basis(7, 3, {0, 1, 2});
  phi += KForm::basis(7, 3, {0, 3, 4});
  phi += KForm::basis(7, 3, {0, 5, 6});
  phi += KForm::basis(7, 3, {1, 3, 5});
  phi -= KForm::basis(7, 3, {1, 4, 6});
  phi -= KForm::basis(7, 3, {2, 3, 6});
  phi -= KForm::basis(7, 3, {2, 4, 5});
  return phi;
}

/// The canonical Cayley 4-form on R^8 (14 terms, all +-1).
KForm spin7_Phi() {
  KForm P(8, 4);
  P += KForm::basis(8, 4, {0, 1, 2, 3});
  P += KForm::basis(8, 4, {0, 1, 4, 5});
  P += KForm::basis(8, 4, {0, 1, 6, 7});
  P += KForm::basis(8, 4, {0, 2, 4, 6});
  P -= KForm::basis(8, 4, {0, 2, 5, 7});
  P -= KForm::basis(8, 4, {0, 3, 4, 7});
  P -= KForm::basis(8, 4, {0, 3, 5, 6});
  P += KForm::basis(8, 4, {4, 5, 6, 7});
  P += KForm::basis(8, 4, {2, 3, 6, 7});
  P += KForm::basis(8, 4, {2, 3, 4, 5});
  P += KForm::basis(8, 4, {1, 3, 5, 7});
  P -= KForm::basis(8, 4, {1, 3, 4, 6});
  P -= KForm::basis(8, 4, {1, 2, 5, 6});
  P -= KForm::basis(8, 4, {1, 2, 4, 7});
  return P;
}

/// Omega = f^0 ^ ... ^ f^{nc-1} with f^j = e^{2j} + i e^{2j+1}.
ComplexKForm holomorphic_volume(int nc) {
  int n = 2 * nc;
  ComplexKForm acc{KForm(n, 0), KForm(n, 0)};
  acc.re[0] = 1.0;
  for (int j = 0; j < nc; ++j) {
    ComplexKForm f{KForm::basis(n, 1, {2 * j}), KForm::basis(n, 1, {2 * j + 1})};
    acc = wedge(acc, f);
  }
  return acc;
}

}  // namespace

KForm kahler_omega(int nc) {
  if (nc < 2 || nc > 4) throw std::invalid_argument("kahler_omega: nc must be 2..4");
  KForm w(2 * nc, 2);
  for (int j = 0; j < nc; ++j) w += KForm::basis(2 * nc, 2, {2 * j, 2 * j + 1});
  return w;
}

Endo kahler_J(int nc) {
  if (nc < 2 || nc > 4) throw std::invalid_argument("kahler_J: nc must be 2..4");
  Endo J(2 * nc);
  for (int a = 0; a < nc; ++a) {
    J.at(2 * a + 1, 2 * a) = 1.0;   // J e_{2a} = e_{2a+1}
    J.at(2 * a, 2 * a + 1) = -1.0;  // J e_{2a+1} = -e_{2a}
  }
  return J;
}

HolonomyStructure make_structure(StructureKind kind) {
  HolonomyStructure s;
  s.kind = kind;
  s.n = kind_dim(kind);
  switch (kind) {
    case StructureKind::G2:
      s.phi = g2_phi();
      s.star_phi = hodge(s.phi);
      break;
    case StructureKind::Spin7:
      s.Phi = spin7_Phi();
      break;
    case StructureKind::SU3:
    case StructureKind::SU4: {
      s.nc = (kind == StructureKind::SU3) ? 3 : 4;
      s.omega = kahler_omega(s.nc);
      s.J = kahler_J(s.nc);
      ComplexKForm Om = holomorphic_volume(s.nc);
      s.re_omega = Om.re;
      s.im_omega = Om.im;
      if (kind == StructureKind::SU4) {
        // induced Cayley form; coincides with the canonical spin7_Phi()
        KForm w2 = wedge(s.omega, s.omega);
        s.Phi = 0.5 * w2 + s.re_omega;
      }
      break;
    }
  }
  return s;
}

const HolonomyStructure& structure(StructureKind kind) {
  static std::map<StructureKind, HolonomyStructure> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(kind);
  if (it == cache.end()) it = cache.emplace(kind, make_structure(kind)).first;
  return it->second;
}

KForm shift_embed(const KForm& a) {
  if (a.n >= kMaxDim) throw std::invalid_argument("shift_embed: already at max dimension");
  KForm out(a.n + 1, a.k);
  const auto& ti = a.table();
  const auto& to = out.table();
  for (int r = 0; r < ti.size(); ++r) {
    if (a[r] == 0.0) continue;
    out[to.rank_of_bits(ti.bits(r) << 1)] = a[r];
  }
  return out;
}

KForm product_phi_from_su3() {
  const HolonomyStructure& su3 = structure(StructureKind::SU3);
  KForm e0 = KForm::basis(7, 1, {0});
  return wedge(e0, shift_embed(su3.omega)) + shift_embed(su3.re_omega);
}

KForm product_star_phi_from_su3() {
  const HolonomyStructure& su3 = structure(StructureKind::SU3);
  KForm e0 = KForm::basis(7, 1, {0});
  KForm w2 = wedge(su3.omega, su3.omega);
  return shift_embed(0.5 * w2) - wedge(e0, shift_embed(su3.im_omega));
}

KForm product_Phi_from_g2() {
  const HolonomyStructure& g2 = structure(StructureKind::G2);
  KForm e0 = KForm::basis(8, 1, {0});
  return wedge(e0, shift_embed(g2.phi)) + shift_embed(g2.star_phi);
}

}  // namespace mvlab
