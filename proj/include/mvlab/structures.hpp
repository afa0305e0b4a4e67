// Canonical constant-coefficient holonomy structures on R^6/R^7/R^8:
// G2 (phi, *phi), Spin(7) (Phi), SU(3) and SU(4) (omega, Omega, J), plus the
// S^1-product embeddings that tie them together.
//
// Index conventions (0-based arrays everywhere):
//   - dim-7 forms: array index i corresponds to the 1-based label i+1 in the
//     usual G2 coefficient lists, so phi = e^{012} + e^{034} + ...
//   - dim-8 forms and all SU frames: array index i is the label i, with
//     holomorphic frame f^j = e^{2j} + i e^{2j+1}.
#pragma once

#include <string>

#include "mvlab/kform.hpp"

namespace mvlab {

enum class StructureKind { G2, Spin7, SU3, SU4 };

std::string kind_name(StructureKind k);
StructureKind parse_kind(const std::string& name);
int kind_dim(StructureKind k);

struct HolonomyStructure {
  StructureKind kind;
  int n = 0;

  // G2 (n = 7)
  KForm phi, star_phi;

  // Spin7 (n = 8); for SU4 this is the induced 4-form omega^2/2 + Re(Omega).
  KForm Phi;

  // SU kinds: Kaehler form, holomorphic volume form, complex structure.
  int nc = 0;
  KForm omega, re_omega, im_omega;
  Endo J;
};

/// Fresh structure with all canonical forms populated.
HolonomyStructure make_structure(StructureKind kind);

/// Shared immutable instance.
const HolonomyStructure& structure(StructureKind kind);

/// Kaehler data (omega, J) on R^{2nc} with the standard pairing
/// f^j = e^{2j} + i e^{2j+1}; nc in {2, 3, 4}. For nc = 3, 4 this matches the
/// SU3/SU4 structures; nc = 2 exists for the low-dimensional
/// special-Lagrangian identity checks.
KForm kahler_omega(int nc);
Endo kahler_J(int nc);

/// Embed a k-form on R^m into R^{m+1} shifting every index by +1 (the new
/// coordinate 0 is the circle direction of a product S^1 x Y).
KForm shift_embed(const KForm& a);

/// Product-structure consistency data:
///   spin7.Phi == e^0 ^ shift(phi) + shift(star_phi)        (7 -> 8)
///   g2.phi   == e^0 ^ shift(omega3) + shift(re_omega3)     (6 -> 7)
///   g2.star_phi == shift(omega3^2/2) - e^0 ^ shift(im_omega3)
/// Both are exact coefficient identities for the canonical structures; the
/// helpers below build the left-hand sides from the lower structure.
KForm product_phi_from_su3();
KForm product_star_phi_from_su3();
KForm product_Phi_from_g2();

}  // namespace mvlab
