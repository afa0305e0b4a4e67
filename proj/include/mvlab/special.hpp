// dDT / dHYM diagnostics on torus connections: defining-tensor residuals,
// the angle function, the Dazord mean-curvature identity, energy lower
// bounds, circle pullbacks, and a Newton oracle for constant solutions.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mvlab/connection.hpp"

namespace mvlab {

/// Norms of the defining tensors of a special-connection equation.
/// kinds: "spin7" (pi27(E - *E^3/6), pi47(E^2)); "g2" (E ^ *phi - E^3/6);
/// "dhym" ([[2,0]]-part of E, Im(e^{-i theta} zeta)).
struct DdtResidual {
  std::string kind;
  double theta = 0.0;  // dhym target phase
  std::vector<std::pair<std::string, double>> l2_norms;
  std::vector<std::pair<std::string, double>> linf_norms;
  double tolerance = 1e-10;
  bool is_solution = false;
  /// spin7 only: grid minimum of |1 - <E^2,Phi>/2 + *E^4/24|, which must be
  /// bounded away from zero on solutions.
  double nowhere_vanishing_min = 0.0;
};

DdtResidual ddt_residual(const ConnectionField& C, const std::string& kind,
                         double theta = 0.0, double tol = 1e-10);
std::string to_json(const DdtResidual& r);

/// Pointwise zeta with (omega + iE)^nc = zeta * omega^nc, its modulus and
/// principal-value argument, as scalar fields.
struct AngleData {
  FormField zeta_re, zeta_im, r, theta;
  double min_r = 0.0;
};
AngleData angle_function(const ConnectionField& C);

/// Phase of the integrated zeta; the natural constant phase candidate for
/// dHYM residuals along a flow.
double average_phase(const ConnectionField& C);

struct DazordResult {
  double rel_error = 0.0;  // ||lhs - rhs||_L2 / max(1, ||lhs||_L2)
  double lhs_l2 = 0.0, rhs_l2 = 0.0, max_abs_diff = 0.0;
  double max_20_part = 0.0;  // measured L-inf of the [[2,0]] part of E
  FormField lhs, rhs;        // 1-form fields, populated when keep_fields
};

/// Compares the mean curvature against -(detG)^{1/4} (G^{-1})* (J d theta)
/// on a Kaehler torus; requires the [[2,0]] part of E below 1e-10.
DazordResult dazord_compare(const ConnectionField& C, bool keep_fields = false);

struct EnergyReport {
  double calibrated_integral = 0.0;  // modulus for SU contexts
  double V = 0.0;
  double slack = 0.0;   // V - |calibrated_integral|
  double theta = 0.0;   // SU contexts: phase of the complex integral
};
EnergyReport energy_bound_report(const ConnectionField& C);

/// S^1 pullback: SU3 torus -> G2 torus or G2 torus -> Spin7 torus, adding a
/// flat first axis; the product structure equals the canonical one.
ConnectionField pullback_circle(const ConnectionField& C, int new_axis_points = 4);

/// Minimum-norm Gauss-Newton solve of the constant dDT/dHYM system from a
/// seeded random start (ball of radius 0.5); accepts residual < 1e-12,
/// throws std::runtime_error after the iteration budget.
KForm newton_constant_ddt(StructureKind kind, std::uint64_t seed, double theta = 0.0);

}  // namespace mvlab
