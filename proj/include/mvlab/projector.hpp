// Projections onto the irreducible pieces of Lambda^k under each holonomy
// structure. Projector matrices are assembled from the structure operators
// (e.g. alpha -> *(Phi ^ alpha)) using their exact rational eigenvalues, so
// entries are rational and reproducible; no numerical eigendecomposition.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mvlab/linalg.hpp"
#include "mvlab/structures.hpp"

namespace mvlab {

struct Projector {
  std::string label;
  Matrix P;
  int rank = 0;  // trace of P, rounded; equals the component dimension
};

struct ProjectorBundle {
  StructureKind kind;
  int degree = 0;
  std::vector<Projector> comps;  // mutually orthogonal, summing to identity
};

/// Lambda^2 bundle per structure. Labels and exact operator eigenvalues:
///   G2    : pi2_7 (*(phi^.) = 2), pi2_14 (*(phi^.) = -1)
///   Spin7 : pi2_7 (*(Phi^.) = 3), pi2_21 (*(Phi^.) = -1)
///   SU3   : r_omega (*(omega^.) = 2), br20 (= 1), b11_0 (= -1)
///   SU4   : r_omega (*(omega^2^.) = 6), a_plus (*(ReOmega^.) = 2 on br20),
///           a_minus (= -2), b11_0 (*(omega^2^.) = -2)
const ProjectorBundle& proj2_bundle(StructureKind kind);

/// Spin(7) Lambda^4 bundle: pi4_1, pi4_7, pi4_27, pi4_35. The 1 and 7 pieces
/// come from Phi and the lambda^4 frame; 35 is the anti-self-dual part; 27 is
/// the self-dual complement.
const ProjectorBundle& proj4_bundle_spin7();

/// All Lambda^2 components of `a` for the structure, labeled as above.
std::vector<std::pair<std::string, KForm>> proj2(const HolonomyStructure& s, const KForm& a);

/// Lambda^k_7 isometries of Lemma-type lambda maps on R^8: alpha must be a
/// 1-form on R^8 supported on indices 1..7 (zero e^0 component).
///   lambda2(alpha) = (1/2)(e^0 ^ alpha + i(alpha#) phi~)
///   lambda4(alpha) = (1/sqrt 8)(e^0 ^ i(alpha#) *7phi~ - alpha ^ phi~)
///   lambda6(alpha) = *lambda2(alpha)
/// where phi~, *7phi~ are the 7-dim G2 forms embedded on indices 1..7.
KForm lambda_map(int k, const KForm& alpha);

/// Orthogonal projection of a 4-form on R^8 onto Lambda^4_7 via the
/// orthonormal frame {lambda4(e^u)}, u = 1..7.
KForm proj4_7(const KForm& xi);

/// Cached orthonormal frames {lambda_map(k, e^u)}, u = 1..7, for k in
/// {2, 4, 6}; component norms against these frames avoid the dense
/// projector matrices in hot loops.
const std::vector<KForm>& lambda_frame(int k);

/// Projection of a real k-form onto the real form [[Lambda^{p,q}]] (p != q,
/// spanned by the (p,q)+(q,p) monomials of the standard frame f^j) or onto
/// [Lambda^{p,p}]; requires p + q = a.k and p >= q. Cached per (nc, p, q).
KForm su_pq_proj(int nc, const KForm& a, int p, int q);
const Matrix& su_pq_matrix(int nc, int k, int p, int q);

/// A+/A- split of [[Lambda^{2,0}]] for SU4: eigenspaces of *(ReOmega ^ .)
/// with eigenvalues +2 / -2.
KForm su4_proj_A(const KForm& beta, int sgn);

/// rank-1 projection onto R omega (any SU kind): <a, omega>/|omega|^2 omega.
KForm proj_r_omega(const HolonomyStructure& s, const KForm& a);

}  // namespace mvlab
