// Line-bundle mean-curvature flow on a flat torus: explicit Euler steps of
// da/dt = H(a) with optional frozen-density gauge fixing, volume tracking,
// and structure-equation diagnostics along the way.
#pragma once

#include <string>
#include <vector>

#include "mvlab/connection.hpp"

namespace mvlab {

struct FlowConfig {
  double dt = 0.0;         // <= 0 selects dt = cfl * min_h^2
  double cfl = 0.1;
  long steps = 100;
  bool deturck = false;    // add -d((detG0)^{1/4} delta a), G0 frozen at t=0
  long record_every = 1;   // rows at step 0, every record_every-th, and final
  double blowup_limit = 1e6;
};

struct FlowRow {
  long step = 0;
  double t = 0.0;
  double V = 0.0;
  double H_l2 = 0.0;
  double res_1 = 0.0;  // first defining-tensor L2 norm for C.kind
  double res_2 = 0.0;  // second defining-tensor L2 norm (0 when absent)
  double slack = 0.0;  // volume minus calibrated integral
  double dt = 0.0;
};

struct FlowTrace {
  std::vector<FlowRow> rows;
  long steps_done = 0;  // updates actually applied
  bool diverged = false;
  long monotonicity_violations = 0;  // V increases beyond 1e-12 * max(1, V)
  double initial_V = 0.0;
  double final_V = 0.0;
};

/// Advances C in place. On divergence (non-finite or blowup_limit-exceeding
/// state) the last finite connection is kept and the partial trace returned.
FlowTrace run_flow(ConnectionField& C, const FlowConfig& cfg);

/// CSV with header t,V,H_l2,res_1,res_2,slack,dt and %.17g floats.
std::string trace_csv(const FlowTrace& t);

}  // namespace mvlab
