// mvlab command-line frontend: identity verification suites, structure and
// projection dumps, line-bundle mean-curvature flow on flat tori, dDT/dHYM
// diagnostics, and report consolidation.
//
// Exit codes: 0 success, 1 identity/verification failure, 2 usage or invalid
// input, 3 numerical divergence or search failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvlab/cfld.hpp"
#include "mvlab/flow.hpp"
#include "mvlab/identities.hpp"
#include "mvlab/projector.hpp"
#include "mvlab/report.hpp"
#include "mvlab/rng.hpp"
#include "mvlab/special.hpp"

namespace {

using nlohmann::json;
using namespace mvlab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;
constexpr double kTau = 6.28318530717958647693;

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write: " + path);
  out << text;
}

// ------------------------------------------------------ config file merge ---
// Flags override the config file; config file overrides defaults. Unknown
// config keys are rejected so a run stays reproducible from config + seed.

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j = json::parse(read_text(path));
  if (!j.is_object()) throw std::invalid_argument("config: top-level JSON object required");
  return j;
}

template <typename T>
void merge_key(CLI::App* cmd, const json& cfg, const std::string& name, T* v,
               std::set<std::string>* used) {
  if (cfg.contains(name)) {
    used->insert(name);
    if (cmd->count("--" + name) == 0) *v = cfg.at(name).get<T>();
  }
}

void check_config_used(const json& cfg, const std::set<std::string>& used) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (!used.count(it.key())) {
      throw std::invalid_argument("config: unknown key: " + it.key());
    }
  }
}

// --------------------------------------------------------- field generator ---
// Seeded random connection: constant background 2-form with coefficients
// uniform in [-f0_scale, f0_scale] (substream 0) and, per potential
// component i, `modes` waves A sin(tau k.x + phase) with integer k in
// {-2..2}^n \ {0}, A uniform in [-amplitude, amplitude] (substream 1 + i).

ConnectionField generate_connection(StructureKind kind, const std::vector<int>& counts,
                                    std::uint64_t seed, double amplitude, int modes,
                                    double f0_scale) {
  const int n = kind_dim(kind);
  TorusGrid grid(n, counts);
  KForm F0(n, 2);
  {
    Rng rng = substream(seed, 0);
    for (double& c : F0.coeffs) c = rng.uniform(-f0_scale, f0_scale);
  }
  ConnectionField C(grid, kind, F0);

  struct Mode {
    double k[8];
    double amp, phase;
  };
  std::vector<std::vector<Mode>> comp_modes(n);
  for (int i = 0; i < n; ++i) {
    Rng rng = substream(seed, 1 + static_cast<std::uint64_t>(i));
    for (int m = 0; m < modes; ++m) {
      Mode md{};
      bool nonzero = false;
      while (!nonzero) {
        for (int a = 0; a < n; ++a) {
          md.k[a] = std::floor(rng.uniform(0.0, 5.0)) - 2.0;
          if (md.k[a] != 0.0) nonzero = true;
        }
      }
      md.amp = rng.uniform(-amplitude, amplitude);
      md.phase = rng.uniform(0.0, kTau);
      comp_modes[i].push_back(md);
    }
  }

  GridWalker w(grid);
  for (long p = 0; p < grid.npoints; ++p, w.advance()) {
    double* a = C.potential.at(p);
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (const Mode& md : comp_modes[i]) {
        double arg = md.phase;
        for (int ax = 0; ax < n; ++ax) arg += kTau * md.k[ax] * w.coord(ax);
        v += md.amp * std::sin(arg);
      }
      a[i] = v;
    }
  }
  return C;
}

std::string default_equation(StructureKind k) {
  switch (k) {
    case StructureKind::G2: return "g2";
    case StructureKind::Spin7: return "spin7";
    default: return "dhym";
  }
}

json kform_json(const KForm& f) { return json::parse(to_json(f)); }

// ------------------------------------------------------------------ verify ---

struct VerifyOpts {
  std::string context = "spin7";
  long samples = 10000;
  std::uint64_t seed = 1;
  double range = 2.0;
  double tolerance = 1e-9;
  int threads = 0;
  std::string output;
  std::string config;
};

int run_verify(CLI::App* cmd, VerifyOpts& o) {
  json cfg = load_config(o.config);
  std::set<std::string> used;
  merge_key(cmd, cfg, "context", &o.context, &used);
  merge_key(cmd, cfg, "samples", &o.samples, &used);
  merge_key(cmd, cfg, "seed", &o.seed, &used);
  merge_key(cmd, cfg, "range", &o.range, &used);
  merge_key(cmd, cfg, "tolerance", &o.tolerance, &used);
  merge_key(cmd, cfg, "threads", &o.threads, &used);
  merge_key(cmd, cfg, "output", &o.output, &used);
  check_config_used(cfg, used);
  if (o.samples <= 0) throw std::invalid_argument("verify: samples must be positive");
  if (!(o.range > 0.0)) throw std::invalid_argument("verify: range must be positive");

  StructureKind context = parse_context(o.context);
  std::vector<ResidualReport> results =
      random_suite(context, o.samples, o.seed, o.range, o.tolerance, o.threads);

  bool all_pass = true;
  json jres = json::array();
  for (const ResidualReport& r : results) {
    all_pass = all_pass && r.pass;
    jres.push_back(json::parse(to_json(r)));
  }
  json out;
  out["command"] = "verify";
  out["tool_version"] = tool_version();
  // threads is intentionally not embedded: it changes scheduling only and
  // reports are bit-identical across thread counts.
  out["config"] = {{"context", o.context}, {"samples", o.samples},
                   {"seed", o.seed},       {"range", o.range},
                   {"tolerance", o.tolerance}};
  out["results"] = jres;
  out["all_pass"] = all_pass;
  std::string text = out.dump(2) + "\n";
  if (!o.output.empty()) write_text(o.output, text);
  write_text("-", text);
  return all_pass ? kExitPass : kExitFail;
}

// ----------------------------------------------------------------- project ---

struct ProjectOpts {
  std::string kind = "spin7";
  std::string input = "-";
  std::string output;
};

int run_project(ProjectOpts& o) {
  StructureKind kind = parse_kind(o.kind);
  const HolonomyStructure& s = structure(kind);
  KForm f = kform_from_json(read_text(o.input));
  if (f.n != s.n) throw std::invalid_argument("project: form dimension does not match kind");

  json comps = json::array();
  if (f.k == 2) {
    for (const auto& kv : proj2(s, f)) {
      comps.push_back({{"label", kv.first},
                       {"form", kform_json(kv.second)},
                       {"norm", std::sqrt(norm2(kv.second))}});
    }
  } else if (f.k == 4 && kind == StructureKind::Spin7) {
    for (const Projector& P : proj4_bundle_spin7().comps) {
      KForm part = apply(P.P, f, 4);
      comps.push_back({{"label", P.label},
                       {"form", kform_json(part)},
                       {"norm", std::sqrt(norm2(part))}});
    }
  } else {
    throw std::invalid_argument(
        "project: degree 2 (any kind) or degree 4 (spin7) supported");
  }
  json out;
  out["command"] = "project";
  out["tool_version"] = tool_version();
  out["config"] = {{"kind", o.kind}, {"input", o.input}};
  out["degree"] = f.k;
  out["components"] = comps;
  write_text(o.output.empty() ? "-" : o.output, out.dump(2) + "\n");
  return kExitPass;
}

// -------------------------------------------------------- structure dump ---

struct DumpOpts {
  std::string kind = "spin7";
  std::string output;
};

int run_dump(DumpOpts& o) {
  StructureKind kind = parse_kind(o.kind);
  const HolonomyStructure& s = structure(kind);
  json out;
  out["command"] = "structure dump";
  out["tool_version"] = tool_version();
  out["kind"] = o.kind;
  out["n"] = s.n;
  if (kind == StructureKind::G2) {
    out["phi"] = kform_json(s.phi);
    out["star_phi"] = kform_json(s.star_phi);
  } else if (kind == StructureKind::Spin7) {
    out["Phi"] = kform_json(s.Phi);
  } else {
    out["omega"] = kform_json(s.omega);
    out["re_omega"] = kform_json(s.re_omega);
    out["im_omega"] = kform_json(s.im_omega);
    json J = json::array();
    for (int i = 0; i < s.n; ++i) {
      json row = json::array();
      for (int j = 0; j < s.n; ++j) row.push_back(s.J.at(i, j));
      J.push_back(row);
    }
    out["J"] = J;
    if (kind == StructureKind::SU4) out["Phi"] = kform_json(s.Phi);
  }
  write_text(o.output.empty() ? "-" : o.output, out.dump(2) + "\n");
  return kExitPass;
}

// -------------------------------------------------------------------- flow ---

struct FlowOpts {
  std::string input;
  std::string kind = "g2";
  std::vector<int> grid;
  std::uint64_t seed = 1;
  double amplitude = 0.05;
  int modes = 3;
  double f0_scale = 0.0;
  double dt = 0.0;
  double cfl = 0.1;
  long steps = 100;
  bool deturck = false;
  long record_every = 1;
  double blowup_limit = 1e6;
  std::string trace;
  std::string final_state;
  std::string summary;
  std::string config;
};

int run_flow_cmd(CLI::App* cmd, FlowOpts& o) {
  json cfg = load_config(o.config);
  std::set<std::string> used;
  merge_key(cmd, cfg, "input", &o.input, &used);
  merge_key(cmd, cfg, "kind", &o.kind, &used);
  merge_key(cmd, cfg, "grid", &o.grid, &used);
  merge_key(cmd, cfg, "seed", &o.seed, &used);
  merge_key(cmd, cfg, "amplitude", &o.amplitude, &used);
  merge_key(cmd, cfg, "modes", &o.modes, &used);
  merge_key(cmd, cfg, "f0-scale", &o.f0_scale, &used);
  merge_key(cmd, cfg, "dt", &o.dt, &used);
  merge_key(cmd, cfg, "cfl", &o.cfl, &used);
  merge_key(cmd, cfg, "steps", &o.steps, &used);
  merge_key(cmd, cfg, "deturck", &o.deturck, &used);
  merge_key(cmd, cfg, "record-every", &o.record_every, &used);
  merge_key(cmd, cfg, "blowup-limit", &o.blowup_limit, &used);
  merge_key(cmd, cfg, "trace", &o.trace, &used);
  merge_key(cmd, cfg, "final", &o.final_state, &used);
  merge_key(cmd, cfg, "summary", &o.summary, &used);
  check_config_used(cfg, used);

  ConnectionField C;
  json source;
  if (!o.input.empty()) {
    C = read_cfld(o.input);
    source = {{"input", o.input}};
  } else {
    if (o.grid.empty()) {
      throw std::invalid_argument("flow: need --input or --grid with generator flags");
    }
    C = generate_connection(parse_kind(o.kind), o.grid, o.seed, o.amplitude,
                            o.modes, o.f0_scale);
    source = {{"kind", o.kind},           {"grid", o.grid},
              {"seed", o.seed},           {"amplitude", o.amplitude},
              {"modes", o.modes},         {"f0-scale", o.f0_scale}};
  }

  FlowConfig fc;
  fc.dt = o.dt;
  fc.cfl = o.cfl;
  fc.steps = o.steps;
  fc.deturck = o.deturck;
  fc.record_every = o.record_every;
  fc.blowup_limit = o.blowup_limit;
  FlowTrace tr = run_flow(C, fc);

  if (!o.trace.empty()) write_text(o.trace, trace_csv(tr));
  if (!o.final_state.empty()) write_cfld(o.final_state, C);

  json out;
  out["command"] = "flow";
  out["tool_version"] = tool_version();
  out["config"] = {{"source", source},
                   {"dt", o.dt},
                   {"cfl", o.cfl},
                   {"steps", o.steps},
                   {"deturck", o.deturck},
                   {"record-every", o.record_every},
                   {"blowup-limit", o.blowup_limit}};
  out["initial_V"] = tr.initial_V;
  out["final_V"] = tr.final_V;
  out["steps_done"] = tr.steps_done;
  out["monotonicity_violations"] = tr.monotonicity_violations;
  out["diverged"] = tr.diverged;
  out["rows"] = tr.rows.size();
  if (!tr.rows.empty()) {
    const FlowRow& last = tr.rows.back();
    out["final_row"] = {{"t", last.t},         {"V", last.V},
                        {"H_l2", last.H_l2},   {"res_1", last.res_1},
                        {"res_2", last.res_2}, {"slack", last.slack}};
  }
  std::string text = out.dump(2) + "\n";
  if (!o.summary.empty()) write_text(o.summary, text);
  write_text("-", text);
  return tr.diverged ? kExitDiverged : kExitPass;
}

// --------------------------------------------------------------- residuals ---

struct ResidualOpts {
  std::string input;
  std::string equation;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 1e-10;
  bool require_solution = false;
  std::string output;
};

int run_residuals(ResidualOpts& o) {
  ConnectionField C = read_cfld(o.input);
  std::string eq = o.equation.empty() ? default_equation(C.kind) : o.equation;
  double theta = o.theta;
  if (std::isnan(theta)) {
    theta = (eq == "dhym") ? average_phase(C) : 0.0;
  }
  DdtResidual r = ddt_residual(C, eq, theta, o.tolerance);
  json out;
  out["command"] = "residuals";
  out["tool_version"] = tool_version();
  out["config"] = {{"input", o.input},
                   {"equation", eq},
                   {"theta", theta},
                   {"tolerance", o.tolerance}};
  out["result"] = json::parse(to_json(r));
  write_text(o.output.empty() ? "-" : o.output, out.dump(2) + "\n");
  if (o.require_solution && !r.is_solution) return kExitFail;
  return kExitPass;
}

// ------------------------------------------------------------ dazord-check ---

struct DazordOpts {
  std::string input;
  std::string output;
};

int run_dazord(DazordOpts& o) {
  ConnectionField C = read_cfld(o.input);
  DazordResult r = dazord_compare(C);
  json out;
  out["command"] = "dazord-check";
  out["tool_version"] = tool_version();
  out["config"] = {{"input", o.input}};
  out["rel_error"] = r.rel_error;
  out["lhs_l2"] = r.lhs_l2;
  out["rhs_l2"] = r.rhs_l2;
  out["max_abs_diff"] = r.max_abs_diff;
  out["max_20_part"] = r.max_20_part;
  write_text(o.output.empty() ? "-" : o.output, out.dump(2) + "\n");
  return kExitPass;
}

// --------------------------------------------------------- newton-constant ---

struct NewtonOpts {
  std::string kind = "g2";
  std::uint64_t seed = 1;
  double theta = 0.0;
  std::string output;
};

int run_newton(NewtonOpts& o) {
  StructureKind kind = parse_kind(o.kind);
  KForm F = newton_constant_ddt(kind, o.seed, o.theta);

  // Re-verify on a minimal constant-curvature torus: residual and slack.
  std::vector<int> counts(static_cast<std::size_t>(kind_dim(kind)), 4);
  TorusGrid grid(kind_dim(kind), counts);
  ConnectionField C(grid, kind, F);
  DdtResidual r = ddt_residual(C, default_equation(kind), o.theta, 1e-12);
  EnergyReport e = energy_bound_report(C);

  json out;
  out["command"] = "newton-constant";
  out["tool_version"] = tool_version();
  out["config"] = {{"kind", o.kind}, {"seed", o.seed}, {"theta", o.theta}};
  out["F"] = kform_json(F);
  out["residual"] = json::parse(to_json(r));
  out["V"] = e.V;
  out["calibrated_integral"] = e.calibrated_integral;
  out["slack"] = e.slack;
  write_text(o.output.empty() ? "-" : o.output, out.dump(2) + "\n");
  return kExitPass;
}

// ---------------------------------------------------------------- pullback ---

struct PullbackOpts {
  std::string input;
  std::string output;
  int axis_points = 4;
};

int run_pullback(PullbackOpts& o) {
  ConnectionField C = read_cfld(o.input);
  ConnectionField P = pullback_circle(C, o.axis_points);
  write_cfld(o.output, P);

  // The exact-pullback statement needs phase 0 on the complex side.
  DdtResidual rs = ddt_residual(C, default_equation(C.kind), 0.0);
  DdtResidual rt = ddt_residual(P, default_equation(P.kind));
  json out;
  out["command"] = "pullback";
  out["tool_version"] = tool_version();
  out["config"] = {{"input", o.input}, {"output", o.output}, {"axis-points", o.axis_points}};
  out["source_kind"] = kind_name(C.kind);
  out["target_kind"] = kind_name(P.kind);
  out["source_residual"] = json::parse(to_json(rs));
  out["target_residual"] = json::parse(to_json(rt));
  write_text("-", out.dump(2) + "\n");
  return kExitPass;
}

// ------------------------------------------------------------------ report ---

struct ReportOpts {
  std::vector<std::string> paths;
  std::string summary = "-";
  std::string csv;
};

int run_report(ReportOpts& o) {
  MergeResult m = merge_reports(o.paths);
  if (!m.missing.empty()) {
    for (const std::string& p : m.missing) {
      std::fprintf(stderr, "report: missing or unreadable: %s\n", p.c_str());
    }
    return kExitUsage;
  }
  if (m.files_merged == 0) {
    std::fprintf(stderr, "report: no .json or .csv inputs found\n");
    return kExitUsage;
  }
  write_text(o.summary, m.summary_json + "\n");
  if (!o.csv.empty()) write_text(o.csv, m.long_csv);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mvlab: exterior-algebra identity suites and line-bundle "
               "mean-curvature flow on flat tori"};
  app.require_subcommand(1);

  VerifyOpts vo;
  CLI::App* verify = app.add_subcommand("verify", "Run a randomized identity suite");
  verify->add_option("--context", vo.context, "spin7|g2|sl3|sl4 (su3/su4 are aliases)")
      ->capture_default_str();
  verify->add_option("--samples", vo.samples, "sample count")->capture_default_str();
  verify->add_option("--seed", vo.seed, "PRNG seed")->capture_default_str();
  verify->add_option("--range", vo.range, "coefficient range [-range,range]")
      ->capture_default_str();
  verify->add_option("--tolerance", vo.tolerance, "max relative residual")
      ->capture_default_str();
  verify->add_option("--threads", vo.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  verify->add_option("--output", vo.output, "also write the JSON report here");
  verify->add_option("--config", vo.config, "JSON config file (flags override)");

  ProjectOpts po;
  CLI::App* project = app.add_subcommand("project", "Split a form into irreducible components");
  project->add_option("--kind", po.kind, "g2|spin7|su3|su4")->capture_default_str();
  project->add_option("--input", po.input, "KForm JSON file ('-' = stdin)")
      ->capture_default_str();
  project->add_option("--output", po.output, "output path (default stdout)");

  DumpOpts so;
  CLI::App* structure_cmd = app.add_subcommand("structure", "Structure form utilities");
  structure_cmd->require_subcommand(1);
  CLI::App* dump = structure_cmd->add_subcommand("dump", "Emit canonical structure forms");
  dump->add_option("--kind", so.kind, "g2|spin7|su3|su4")->capture_default_str();
  dump->add_option("--output", so.output, "output path (default stdout)");

  FlowOpts fo;
  CLI::App* flow = app.add_subcommand("flow", "Run the mean-curvature flow");
  flow->add_option("--input", fo.input, "CFLD initial state (overrides generator)");
  flow->add_option("--kind", fo.kind, "generator: structure kind")->capture_default_str();
  flow->add_option("--grid", fo.grid, "generator: points per axis (n values)")
      ->delimiter(',');
  flow->add_option("--seed", fo.seed, "generator: PRNG seed")->capture_default_str();
  flow->add_option("--amplitude", fo.amplitude, "generator: mode amplitude")
      ->capture_default_str();
  flow->add_option("--modes", fo.modes, "generator: modes per component")
      ->capture_default_str();
  flow->add_option("--f0-scale", fo.f0_scale, "generator: background coefficient range")
      ->capture_default_str();
  flow->add_option("--dt", fo.dt, "time step (<= 0 selects cfl * min_h^2)")
      ->capture_default_str();
  flow->add_option("--cfl", fo.cfl, "auto-dt factor")->capture_default_str();
  flow->add_option("--steps", fo.steps, "Euler steps")->capture_default_str();
  flow->add_flag("--deturck", fo.deturck, "add the frozen-density gauge-fixing term");
  flow->add_option("--record-every", fo.record_every, "trace row stride")
      ->capture_default_str();
  flow->add_option("--blowup-limit", fo.blowup_limit, "divergence threshold")
      ->capture_default_str();
  flow->add_option("--trace", fo.trace, "write the trace CSV here");
  flow->add_option("--final", fo.final_state, "write the final CFLD state here");
  flow->add_option("--summary", fo.summary, "also write the summary JSON here");
  flow->add_option("--config", fo.config, "JSON config file (flags override)");

  ResidualOpts ro;
  CLI::App* residuals = app.add_subcommand("residuals", "Structure-equation residuals of a field");
  residuals->add_option("--input", ro.input, "CFLD connection")->required();
  residuals->add_option("--equation", ro.equation, "spin7|g2|dhym (default from kind)");
  residuals->add_option("--theta", ro.theta, "dhym phase (default: average phase)");
  residuals->add_option("--tolerance", ro.tolerance, "solution threshold")
      ->capture_default_str();
  residuals->add_flag("--require-solution", ro.require_solution,
                      "exit 1 unless is_solution");
  residuals->add_option("--output", ro.output, "output path (default stdout)");

  DazordOpts dz;
  CLI::App* dazord = app.add_subcommand("dazord-check", "Mean curvature vs angle-gradient identity");
  dazord->add_option("--input", dz.input, "CFLD connection (SU kind, [1,1] curvature)")
      ->required();
  dazord->add_option("--output", dz.output, "output path (default stdout)");

  NewtonOpts no;
  CLI::App* newton = app.add_subcommand("newton-constant", "Solve for a constant solution");
  newton->add_option("--kind", no.kind, "g2|spin7|su3|su4")->capture_default_str();
  newton->add_option("--seed", no.seed, "start seed")->capture_default_str();
  newton->add_option("--theta", no.theta, "dhym phase")->capture_default_str();
  newton->add_option("--output", no.output, "output path (default stdout)");

  PullbackOpts pb;
  CLI::App* pullback = app.add_subcommand("pullback", "S^1 pullback su3->g2 or g2->spin7");
  pullback->add_option("--input", pb.input, "CFLD connection")->required();
  pullback->add_option("--output", pb.output, "CFLD output path")->required();
  pullback->add_option("--axis-points", pb.axis_points, "points on the new axis")
      ->capture_default_str();

  ReportOpts rp;
  CLI::App* report = app.add_subcommand("report", "Merge reports into one summary");
  report->add_option("paths", rp.paths, "report files or directories")->required();
  report->add_option("--summary", rp.summary, "summary JSON path (default stdout)")
      ->capture_default_str();
  report->add_option("--csv", rp.csv, "plot-ready long CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) return run_verify(verify, vo);
    if (project->parsed()) return run_project(po);
    if (structure_cmd->parsed()) return run_dump(so);
    if (flow->parsed()) return run_flow_cmd(flow, fo);
    if (residuals->parsed()) return run_residuals(ro);
    if (dazord->parsed()) return run_dazord(dz);
    if (newton->parsed()) return run_newton(no);
    if (pullback->parsed()) return run_pullback(pb);
    if (report->parsed()) return run_report(rp);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDiverged;
  }
  return kExitUsage;
}
