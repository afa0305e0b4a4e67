#include "mvlab/flow.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "mvlab/linalg.hpp"
#include "mvlab/special.hpp"

namespace mvlab {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool finite_below(const FormField& f, double limit) {
  for (double v : f.data) {
    if (!(std::fabs(v) <= limit)) return false;  // catches NaN as well
  }
  return true;
}

// L2 norms of the two defining tensors for the structure kind of C, plus the
// energy slack, evaluated at the current state.
void row_diagnostics(const ConnectionField& C, double* res_1, double* res_2,
                     double* slack) {
  std::string kind;
  double theta = 0.0;
  switch (C.kind) {
    case StructureKind::G2:
      kind = "g2";
      break;
    case StructureKind::Spin7:
      kind = "spin7";
      break;
    default:
      kind = "dhym";
      theta = average_phase(C);
      break;
  }
  DdtResidual r = ddt_residual(C, kind, theta);
  *res_1 = r.l2_norms.at(0).second;
  *res_2 = r.l2_norms.size() > 1 ? r.l2_norms.at(1).second : 0.0;
  *slack = energy_bound_report(C).slack;
}

}  // namespace

FlowTrace run_flow(ConnectionField& C, const FlowConfig& cfg) {
  require(cfg.steps >= 0, "flow: steps must be >= 0");
  require(cfg.record_every >= 1, "flow: record_every must be >= 1");
  require(cfg.dt > 0.0 || cfg.cfl > 0.0, "flow: need dt > 0 or cfl > 0");
  const TorusGrid& g = C.grid;
  const int n = g.n;
  const double hmin = g.min_h();
  const double dt = cfg.dt > 0.0 ? cfg.dt : cfg.cfl * hmin * hmin;

  // Frozen gauge-fixing density (detG)^{1/4} from the initial state.
  FormField c0;
  if (cfg.deturck) {
    c0 = FormField(g, 0);
    GridWalker w(g);
    double E[28];
    for (long p = 0; p < g.npoints; ++p, w.advance()) {
      curvature_at(C, w, p, E);
      c0.at(p)[0] = density_kernel(n, E);
    }
  }

  FlowTrace tr;
  double prev_v = 0.0;
  for (long k = 0; k <= cfg.steps; ++k) {
    FormField K(g, 2);
    double v = 0.0;
    bool step_ok = true;
    try {
      GridWalker w(g);
      double E[28];
      KahanSum vs;
      for (long p = 0; p < g.npoints; ++p, w.advance()) {
        curvature_at(C, w, p, E);
        vs.add(gradient_kernel(n, E, K.at(p)));
      }
      v = vs.get() * g.cell();
    } catch (const std::exception&) {
      step_ok = false;
    }
    if (!step_ok || !std::isfinite(v)) {
      tr.diverged = true;
      break;
    }
    if (k == 0) tr.initial_V = v;
    if (k > 0 && v > prev_v + 1e-12 * std::max(1.0, prev_v)) {
      ++tr.monotonicity_violations;
    }
    prev_v = v;
    tr.final_V = v;

    FormField H = delta_field(K);
    H *= -1.0;
    if (cfg.deturck) {
      FormField s = delta_field(C.potential);
      for (long p = 0; p < g.npoints; ++p) s.at(p)[0] *= c0.at(p)[0];
      FormField ds = d_field(s);
      H -= ds;
    }

    if (k % cfg.record_every == 0 || k == cfg.steps) {
      FlowRow row;
      row.step = k;
      row.t = k * dt;
      row.V = v;
      row.H_l2 = field_norm_l2(H);
      row_diagnostics(C, &row.res_1, &row.res_2, &row.slack);
      row.dt = dt;
      tr.rows.push_back(row);
    }
    if (k == cfg.steps) break;

    if (!finite_below(H, std::numeric_limits<double>::max())) {
      tr.diverged = true;
      break;
    }
    FormField update = H;
    update *= dt;
    C.potential += update;
    if (!finite_below(C.potential, cfg.blowup_limit)) {
      // Roll the state back so the caller keeps the last finite connection.
      C.potential -= update;
      tr.diverged = true;
      break;
    }
    ++tr.steps_done;
  }
  return tr;
}

std::string trace_csv(const FlowTrace& t) {
  std::string out = "t,V,H_l2,res_1,res_2,slack,dt\n";
  char buf[320];
  for (const FlowRow& r : t.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.V, r.H_l2, r.res_1, r.res_2, r.slack, r.dt);
    out += buf;
  }
  return out;
}

}  // namespace mvlab
