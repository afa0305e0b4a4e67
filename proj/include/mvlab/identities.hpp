// Residual evaluators and deterministic randomized suites for the pointwise
// calibration-type identities: the Cayley-form identity on R^8, the
// associator-form identity on R^7, the special Lagrangian identities on
// Kaehler R^6/R^8, their homogeneous-degree refinements, the restriction
// inequalities between dimensions, and the supporting algebraic lemmas.
//
// All checks use real 2-forms throughout (the real form E = -iF of an
// imaginary-valued curvature); with that substitution every implemented
// identity term is even in the input, so results are invariant under
// F -> -F and the two sign conventions coincide.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvlab/kform.hpp"
#include "mvlab/structures.hpp"

namespace mvlab {

/// Aggregate residual statistics for one identity over >= 1 samples.
/// Residuals are relative: |LHS - RHS| / scale with
/// scale = max(1, |LHS|, |RHS|, largest individual term).
struct ResidualReport {
  std::string identity_id;
  long samples = 0;
  double max_rel_residual = 0.0;
  double mean_rel_residual = 0.0;
  double scale = 1.0;        // scale at the worst sample
  double tolerance = 1e-9;
  bool pass = true;          // max_rel_residual <= tolerance
  std::string worst_input;   // JSON object holding the worst sample's forms
};

/// {"identity_id":..., "samples":..., ..., "worst_input":{...}}.
std::string to_json(const ResidualReport& r);

// --------------------------------------------------------- single checks ---
// Each check evaluates one named identity (or a titled family, reporting the
// max over its members) on the given input and returns a samples = 1 report.
// Degree/dimension mismatches raise invalid-input.

/// (1 - <F^2,Phi>/2 + *F^4/24)^2 + 4|pi2_7(F - *F^3/6)|^2 + 2|pi4_7(F^2)|^2
/// = det(I + F#) for a 2-form F on R^8. The closed det formula is
/// cross-checked against the LU oracle within the same residual.
ResidualReport cayley_check(const KForm& F, double tol = 1e-9);

/// Homogeneous-degree refinements of the Cayley identity (degrees 2, 4, 6),
/// including the degree-4 cross term <pi2_7 F, pi2_7 *F^3>.
ResidualReport cayley_degree_check(const KForm& F, double tol = 1e-9);

/// (1 - <F^2,*phi>/2)^2 + |*phi^F - F^3/6|^2 + |phi^*F^2|^2/4 = det(I + F#)
/// for a 2-form F on R^7.
ResidualReport associator_check(const KForm& F, double tol = 1e-9);

/// |(w+iF)^3/3!|^2 + 2|pi[[3,1]]((w+iF)^2/2!)|^2 = det(I + F#) on R^6.
ResidualReport sl3_check(const KForm& F, double tol = 1e-9);

/// |(w+iF)^4/4!|^2 + 2|pi[[4,2]]((w+iF)^3/3!)|^2 + 8|pi[[4,0]]((w+iF)^2/2!)|^2
/// = det(I + F#) on R^8, together with its homogeneous-degree refinements
/// (degrees 2, 4, 6) and the A+/A- rewrite of the degree-4 cross term.
ResidualReport sl4_check(const KForm& F, double tol = 1e-9);

/// Restriction inequalities between dimensions. kind "cayley_to_asso":
/// |1 - <F^2, *7phi~>/2| <= sqrt(det(I8 + F#)) on R^8 with *7phi~ the
/// embedded 7-dim coassociative form; kind "asso_to_sl3":
/// |1 - <F^2, w~^2>/4| <= sqrt(det(I7 + F#)) on R^7 with w~ the embedded
/// Kaehler form. The residual is the violation (0 when the bound holds);
/// restriction_slack returns sqrt(det) - |calibrated term|.
ResidualReport restriction_bound_check(const std::string& kind, const KForm& F,
                                       double tol = 1e-9);
double restriction_slack(const std::string& kind, const KForm& F);

/// Supporting lemmas by id. Inputs whose contract names a subspace are
/// validated by projection residual and rejected as invalid-input otherwise.
///   cubic_square_pair   (F 2-form, xi 4-form on R^8):
///                       *(xi ^ (*F^3)^2) = (3/2)<F^2,xi> *F^4
///   seven_cube          (beta in Lambda^2_7): beta^3 = (3/2)|beta|^2 *beta
///   seven_quartic       (beta in Lambda^2_7): |beta|^4 = (2/3)|beta^2|^2
///   twentyone_quartic   (gamma in Lambda^2_21):
///                       |gamma|^4 = |gamma^2|^2 - (1/3)*gamma^4
///   mixed_quartic       (beta, gamma): |beta|^2|gamma|^2 = 2|beta^gamma|^2
///   wedge_type_split    (F, F2 2-forms on R^8): wedge products of
///                       Lambda^2_7/Lambda^2_21 parts land in the stated
///                       Lambda^4 components only
///   quartic_parts       (F on R^8): |pi4_j(F^2)|^2 for j = 1,7,27,35 in
///                       terms of the three partial squares of F, plus the
///                       self-duality/orthogonality side conditions
///   g2_contractions     (u 1-form on R^7): phi ^ i(u#)*phi = -4*u,
///                       *phi ^ i(u#)phi = 3*u,
///                       phi ^ i(u#)phi = 2*(i(u#)phi) = 2u ^ *phi
///   g2_metric_recovery  (u, v 1-forms on R^7):
///                       i(u#)phi ^ i(v#)phi ^ phi = 6 <u,v> vol
///   g2_two_form_eigen   (F on R^7): *(phi ^ pi2_7 F) = 2 pi2_7 F,
///                       *(phi ^ pi2_14 F) = -pi2_14 F
///   su3_contractions    (u 1-form on R^6): *((i(u#)ReO) ^ ReO) = 2(Ju),
///                       *((i(u#)ReO) ^ ImO) = -2u, |i(u#)ReO|^2 = 2|u|^2
///   su3_two_zero_norm   (F on R^6): |F^ReO|^2 = |F^ImO|^2 = 2|pi[[2,0]]F|^2
///   sl3_routes          (F on R^6): the [[3,1]]-projection routes of the
///                       6-dim special Lagrangian identity
///   su4_re_split        (F on R^8):
///                       *(ReO ^ F^2) = 2(|pi_{A+}F|^2 - |pi_{A-}F|^2)
///   su4_four_split      (xi 4-form on R^8):
///                       2|pi_{w^A-}xi|^2 = |pi_{A-}(*(w^xi))|^2
///   su4_spin7_compat    (F, xi on R^8): the Cayley-form Lambda^2_7 and
///                       Lambda^4_7 projections decompose as Rw + A+ and
///                       R ImO + w^A- respectively
///   sl4_minor           (F, xi on R^8): auxiliary 8-dim Kaehler identities
///                       (pi[[4,2]](w^2^F/2) = *pi[[2,0]]F and friends)
ResidualReport algebra_lemma_check(const std::string& lemma_id,
                                   const std::vector<KForm>& inputs,
                                   double tol = 1e-9);

/// |(w+iF)^nc/nc!|^2 = det(I + F#) for F of pure type [1,1]; nc in {2,3,4}.
/// The [[2,0]]-part of F must be below 1e-12 relative (invalid-input else).
ResidualReport sln_f02_check(int nc, const KForm& F, double tol = 1e-9);

/// Calibration bound per context: |calibrated term| <= sqrt(det(I + F#)).
/// Contexts SU3/SU4 use Re(e^{-i theta}(w+iF)^nc/nc!); G2 and Spin7 have a
/// fixed calibrated scalar, so theta is ignored there. The report's residual
/// is the violation; phase_slack gives sqrt(det) - |calibrated term|.
ResidualReport phase_bound_check(StructureKind context, const KForm& F,
                                 double theta, double tol = 1e-9);
double phase_slack(StructureKind context, const KForm& F, double theta);

// ----------------------------------------------------------- random suite ---

/// Identity ids registered for a context, in suite evaluation order.
std::vector<std::string> suite_identity_ids(StructureKind context);

/// Suite context parser: accepts "spin7", "g2", "sl3", "sl4" plus the
/// structure aliases "su3"/"su4"; anything else raises invalid-input.
StructureKind parse_context(const std::string& name);

/// Runs every identity registered for the context on `count` independent
/// samples whose coefficients are uniform in [-range, range]. Sample i is
/// drawn from substream(seed, i) in a fixed order, and per-sample results
/// are merged in fixed blocks, so reports are bit-identical for a given
/// (seed, count, range) regardless of `threads` (<= 0 picks the hardware
/// core count).
std::vector<ResidualReport> random_suite(StructureKind context, long count,
                                         std::uint64_t seed, double range,
                                         double tol = 1e-9, int threads = 1);

}  // namespace mvlab
