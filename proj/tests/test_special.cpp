// Tests for the dDT/dHYM diagnostics: defining-tensor residuals, the angle
// function, the Dazord comparison, energy bounds, circle pullbacks, the
// constant-solution Newton oracle, CFLD serialization, and report merging.
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvlab/cfld.hpp"
#include "mvlab/connection.hpp"
#include "mvlab/flow.hpp"
#include "mvlab/grid.hpp"
#include "mvlab/kform.hpp"
#include "mvlab/identities.hpp"
#include "mvlab/projector.hpp"
#include "mvlab/report.hpp"
#include "mvlab/rng.hpp"
#include "mvlab/special.hpp"
#include "mvlab/structures.hpp"

namespace mvlab {
namespace {

constexpr double kTau = 6.283185307179586476925287;

TorusGrid cube_grid(int dim, int points) {
  return TorusGrid(dim, std::vector<int>(dim, points));
}

// Constant-coefficient random 2-form with entries in [-amp, amp].
KForm random_two_form(int n, std::uint64_t seed, double amp) {
  KForm f(n, 2);
  Rng rng = substream(seed, 7);
  for (double& c : f.coeffs) c = amp * rng.uniform(-1.0, 1.0);
  return f;
}

// Random [[1,1]] 2-form on R^6 for SU3 connections.
KForm random_one_one(std::uint64_t seed) {
  KForm f(6, 2);
  Rng rng = substream(seed, 77);
  for (double& c : f.coeffs) c = rng.uniform(-1.0, 1.0);
  return su_pq_proj(3, f, 1, 1);
}

// Non-constant gauge potential whose axis pairing matches the standard
// complex structure on the 6-torus (components 2b, 2b+1 driven by the
// coordinates of block b).
void fill_block_diag(ConnectionField& C) {
  GridWalker w(C.grid);
  for (long p = 0; p < C.grid.npoints; ++p, w.advance()) {
    double* a = C.potential.at(p);
    for (int b = 0; b < 3; ++b) {
      a[2 * b + 1] = 0.1 * std::sin(kTau * w.coord(2 * b) + 0.3 * b);
      a[2 * b] = 0.08 * std::cos(kTau * w.coord(2 * b + 1) - 0.2 * b);
    }
  }
}

double linf_of(const DdtResidual& r) {
  double m = 0.0;
  for (const auto& kv : r.linf_norms) m = std::max(m, kv.second);
  return m;
}

struct WitnessCase {
  StructureKind kind;
  const char* equation;
  double theta;
};

const WitnessCase kWitnessCases[] = {
    {StructureKind::G2, "g2", 0.0},
    {StructureKind::Spin7, "spin7", 0.0},
    {StructureKind::SU3, "dhym", 0.0},
    {StructureKind::SU4, "dhym", 0.3},
};

TEST(DdtResidualTest, FlatConnectionsSolveEveryEquation) {
  for (const WitnessCase& c : kWitnessCases) {
    const int n = kind_dim(c.kind);
    ConnectionField flat(cube_grid(n, 4), c.kind, KForm(n, 2));
    // Flat connections solve every equation at target phase zero.
    DdtResidual r = ddt_residual(flat, c.equation, 0.0);
    EXPECT_TRUE(r.is_solution) << c.equation;
    EXPECT_EQ(r.kind, c.equation);
    EXPECT_EQ(r.theta, 0.0);
    ASSERT_FALSE(r.l2_norms.empty());
    ASSERT_EQ(r.l2_norms.size(), r.linf_norms.size());
    for (const auto& kv : r.l2_norms) EXPECT_EQ(kv.second, 0.0) << kv.first;
    for (const auto& kv : r.linf_norms) EXPECT_EQ(kv.second, 0.0) << kv.first;
    if (c.kind == StructureKind::Spin7) {
      // |1 - <E^2,Phi>/2 + *E^4/24| == 1 identically at E = 0.
      EXPECT_EQ(r.nowhere_vanishing_min, 1.0);
    }
  }
  // The flat dHYM angle is zeta == 1 everywhere.
  ConnectionField flat6(cube_grid(6, 4), StructureKind::SU3, KForm(6, 2));
  AngleData a = angle_function(flat6);
  EXPECT_EQ(a.min_r, 1.0);
  EXPECT_EQ(a.zeta_re.at(0)[0], 1.0);
  EXPECT_EQ(a.zeta_im.at(0)[0], 0.0);
  EXPECT_EQ(a.theta.at(0)[0], 0.0);
  EXPECT_EQ(average_phase(flat6), 0.0);
}

TEST(DdtResidualTest, ValidatesKindAndStructurePairing) {
  ConnectionField su3(cube_grid(6, 4), StructureKind::SU3, KForm(6, 2));
  ConnectionField g2(cube_grid(7, 4), StructureKind::G2, KForm(7, 2));
  try {
    ddt_residual(su3, "g2");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("needs a G2 connection"),
              std::string::npos);
  }
  EXPECT_THROW(ddt_residual(g2, "spin7"), std::invalid_argument);
  EXPECT_THROW(ddt_residual(g2, "dhym"), std::invalid_argument);
  try {
    ddt_residual(su3, "bogus");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("spin7, g2, or dhym"),
              std::string::npos);
  }
}

TEST(DdtResidualTest, NewtonWitnessesAreExactSolutions) {
  for (const WitnessCase& c : kWitnessCases) {
    KForm w = newton_constant_ddt(c.kind, 11, c.theta);
    const int n = w.n;
    ASSERT_EQ(n, kind_dim(c.kind));
    EXPECT_GT(std::sqrt(norm2(w)), 1e-3);  // a genuinely nonzero solution
    ConnectionField conn(cube_grid(n, 4), c.kind, w);
    DdtResidual r = ddt_residual(conn, c.equation, c.theta);
    EXPECT_TRUE(r.is_solution) << kind_name(c.kind);
    EXPECT_LE(linf_of(r), 1e-12) << kind_name(c.kind);
    if (c.kind == StructureKind::Spin7) {
      EXPECT_GT(r.nowhere_vanishing_min, 0.5);
    }

    // The calibrated energy bound is saturated at a constant solution.
    EnergyReport er = energy_bound_report(conn);
    EXPECT_GT(er.V, 1.0);
    EXPECT_GE(er.slack, -1e-12) << kind_name(c.kind);
    EXPECT_LE(er.slack, 1e-9) << kind_name(c.kind);
    if (c.kind == StructureKind::SU4) {
      EXPECT_NEAR(er.theta, c.theta, 1e-12);
    }

    if (c.kind == StructureKind::G2) {
      // Constant associative solutions are automatically coassociative-free:
      // phi ^ *E^2 vanishes to rounding at the witness.
      HolonomyStructure s = structure(StructureKind::G2);
      KForm coassoc = wedge(s.phi, hodge(wedge_pow(w, 2)));
      EXPECT_LE(std::sqrt(norm2(coassoc)), 1e-13);
    }
  }
}

TEST(DdtResidualTest, PerturbedWitnessesViolateTheBoundStrictly) {
  for (const WitnessCase& c : kWitnessCases) {
    KForm w = newton_constant_ddt(c.kind, 11, c.theta);
    const int n = w.n;
    Rng rng = substream(500, static_cast<std::uint64_t>(c.kind));
    KForm bump(n, 2);
    for (double& x : bump.coeffs) x = 0.01 * rng.uniform(-1.0, 1.0);
    KForm wp = w;
    wp += bump;
    ConnectionField conn(cube_grid(n, 4), c.kind, wp);
    DdtResidual r = ddt_residual(conn, c.equation, c.theta);
    EXPECT_FALSE(r.is_solution) << kind_name(c.kind);
    EXPECT_GT(linf_of(r), 1e-6);
    EnergyReport er = energy_bound_report(conn);
    EXPECT_GT(er.slack, 1e-6) << kind_name(c.kind);
  }
}

TEST(DdtResidualTest, JsonSerializes) {
  ConnectionField conn(cube_grid(7, 4), StructureKind::G2,
                       newton_constant_ddt(StructureKind::G2, 11));
  DdtResidual r = ddt_residual(conn, "g2");
  nlohmann::json j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j.at("kind").get<std::string>(), "g2");
  EXPECT_TRUE(j.at("is_solution").get<bool>());
  EXPECT_TRUE(j.contains("l2_norms"));
  EXPECT_TRUE(j.contains("linf_norms"));
  EXPECT_TRUE(j.contains("tolerance"));
  EXPECT_TRUE(j.contains("nowhere_vanishing_min"));
}

TEST(AngleTest, ConstantFieldMatchesPointwiseKernel) {
  KForm F0 = random_one_one(21);
  F0 *= 0.3;
  ConnectionField conn(cube_grid(6, 4), StructureKind::SU3, F0);
  AngleData a = angle_function(conn);

  // Constant curvature: every grid point carries the same zeta.
  const double r0 = a.r.at(0)[0];
  const double t0 = a.theta.at(0)[0];
  for (long p : {1L, conn.grid.npoints / 2, conn.grid.npoints - 1}) {
    EXPECT_EQ(a.r.at(p)[0], r0);
    EXPECT_EQ(a.theta.at(p)[0], t0);
    EXPECT_EQ(a.zeta_re.at(p)[0], a.zeta_re.at(0)[0]);
    EXPECT_EQ(a.zeta_im.at(p)[0], a.zeta_im.at(0)[0]);
  }
  EXPECT_EQ(a.min_r, r0);
  EXPECT_DOUBLE_EQ(t0, std::atan2(a.zeta_im.at(0)[0], a.zeta_re.at(0)[0]));

  // |zeta| equals the volume density of the graph metric.
  const double dens = density_kernel(6, F0.coeffs.data());
  EXPECT_NEAR(r0, dens, 1e-14 * dens);

  // Phase averaging and the energy bound collapse for constant fields:
  // V == integral of r == |calibrated integral|, so the slack vanishes.
  EXPECT_NEAR(average_phase(conn), t0, 1e-12);
  EnergyReport er = energy_bound_report(conn);
  EXPECT_NEAR(er.theta, t0, 1e-12);
  EXPECT_NEAR(er.V, volume(conn), 1e-12 * er.V);
  EXPECT_NEAR(er.slack, 0.0, 1e-12);
  EXPECT_NEAR(er.calibrated_integral, er.V, 1e-12 * er.V);
}

TEST(DazordTest, BlockDiagonalDataConvergesUnderRefinement) {
  double errs[2] = {0.0, 0.0};
  const int sizes[2] = {4, 8};
  for (int i = 0; i < 2; ++i) {
    ConnectionField conn(cube_grid(6, sizes[i]), StructureKind::SU3,
                         0.12 * random_one_one(6));
    fill_block_diag(conn);
    DazordResult res = dazord_compare(conn);
    errs[i] = res.rel_error;
    // The potential's axis pairing keeps the curvature exactly [[1,1]].
    EXPECT_EQ(res.max_20_part, 0.0);
    EXPECT_GT(res.lhs_l2, 0.0);
    EXPECT_GT(res.rhs_l2, 0.0);
  }
  // Both sides are discretized with second-order stencils; the identity
  // residual must shrink under grid refinement.  (The asymptotic factor-4
  // regime starts at finer grids than a unit test can afford.)
  EXPECT_LT(errs[0], 5e-2);
  EXPECT_LT(errs[1], errs[0]);
}

TEST(DazordTest, KeepFieldsExposesBothSidesConsistently) {
  ConnectionField conn(cube_grid(6, 4), StructureKind::SU3,
                       0.12 * random_one_one(6));
  fill_block_diag(conn);

  DazordResult bare = dazord_compare(conn, /*keep_fields=*/false);
  EXPECT_TRUE(bare.lhs.data.empty());
  EXPECT_TRUE(bare.rhs.data.empty());

  DazordResult res = dazord_compare(conn, /*keep_fields=*/true);
  ASSERT_EQ(res.lhs.k, 1);
  ASSERT_EQ(res.rhs.k, 1);
  ASSERT_EQ(res.lhs.grid.npoints, conn.grid.npoints);
  ASSERT_EQ(res.lhs.data.size(), res.rhs.data.size());

  // The summary numbers are exactly the norms of the returned fields.
  FormField diff = res.lhs;
  diff -= res.rhs;
  const double lhs_l2 = field_norm_l2(res.lhs);
  EXPECT_NEAR(lhs_l2, res.lhs_l2, 1e-12 * std::max(1.0, lhs_l2));
  EXPECT_NEAR(field_norm_l2(res.rhs), res.rhs_l2, 1e-12);
  EXPECT_NEAR(field_norm_l2(diff) / std::max(1.0, lhs_l2), res.rel_error,
              1e-12);
  EXPECT_NEAR(field_norm_linf(diff), res.max_abs_diff, 1e-14);

  // The left side is the mean-curvature one-form of the connection.
  FormField H = mean_curvature(conn);
  FormField hdiff = H;
  hdiff -= res.lhs;
  EXPECT_LE(field_norm_linf(hdiff), 1e-12);
}

TEST(DazordTest, RejectsTwoZeroViolation) {
  ConnectionField bad(cube_grid(6, 4), StructureKind::SU3,
                      random_two_form(6, 3, 0.5));
  try {
    dazord_compare(bad);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("[[2,0]]"), std::string::npos);
  }
}

TEST(PullbackTest, LiftsSolutionsAcrossTheChain) {
  // SU3 constant solution -> G2 -> Spin7, staying a solution at every stage.
  KForm w3 = newton_constant_ddt(StructureKind::SU3, 11);
  ConnectionField c3(cube_grid(6, 4), StructureKind::SU3, w3);
  const double v3 = volume(c3);

  ConnectionField c7 = pullback_circle(c3);
  EXPECT_EQ(c7.kind, StructureKind::G2);
  EXPECT_EQ(c7.grid.n, 7);
  EXPECT_EQ(c7.grid.shape[0], 4);
  KForm emb = shift_embed(w3);
  emb -= c7.background;
  EXPECT_EQ(norm2(emb), 0.0);
  EXPECT_NEAR(volume(c7), v3, 1e-12 * v3);
  EXPECT_LE(linf_of(ddt_residual(c7, "g2")), 1e-12);

  ConnectionField c8 = pullback_circle(c7);
  EXPECT_EQ(c8.kind, StructureKind::Spin7);
  EXPECT_EQ(c8.grid.n, 8);
  EXPECT_NEAR(volume(c8), v3, 1e-12 * v3);
  DdtResidual r8 = ddt_residual(c8, "spin7");
  EXPECT_LE(linf_of(r8), 1e-12);
  EXPECT_GT(r8.nowhere_vanishing_min, 0.5);

  // G2 witness -> Spin7 directly.
  KForm wg = newton_constant_ddt(StructureKind::G2, 11);
  ConnectionField cg(cube_grid(7, 4), StructureKind::G2, wg);
  ConnectionField cs = pullback_circle(cg, 6);
  EXPECT_EQ(cs.grid.shape[0], 6);
  EXPECT_LE(linf_of(ddt_residual(cs, "spin7")), 1e-12);
}

TEST(PullbackTest, ReplicatesPotentialAlongTheNewAxis) {
  TorusGrid g(6, {4, 6, 4, 4, 6, 4});
  ConnectionField src(g, StructureKind::SU3, 0.1 * random_one_one(4));
  Rng rng = substream(31, 0);
  for (double& v : src.potential.data) v = 0.05 * rng.uniform(-1.0, 1.0);

  ConnectionField pb = pullback_circle(src);
  ASSERT_EQ(pb.grid.n, 7);
  const long per_slice = src.grid.npoints;
  ASSERT_EQ(pb.grid.npoints, 4 * per_slice);
  for (long x0 = 0; x0 < 4; ++x0) {
    for (long q : {0L, 37L, per_slice - 1}) {
      const double* lifted = pb.potential.at(x0 * per_slice + q);
      const double* orig = src.potential.at(q);
      EXPECT_EQ(lifted[0], 0.0);  // no component along the flat circle
      for (int i = 0; i < 6; ++i) EXPECT_EQ(lifted[i + 1], orig[i]);
    }
  }
  EXPECT_NEAR(volume(pb), volume(src), 1e-12 * volume(src));
}

TEST(PullbackTest, RejectsInvalidSources) {
  ConnectionField s7(cube_grid(8, 4), StructureKind::Spin7, KForm(8, 2));
  ConnectionField s4(cube_grid(8, 4), StructureKind::SU4, KForm(8, 2));
  ConnectionField s3(cube_grid(6, 4), StructureKind::SU3, KForm(6, 2));
  EXPECT_THROW(pullback_circle(s7), std::invalid_argument);
  try {
    pullback_circle(s4);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("must be SU3 or G2"),
              std::string::npos);
  }
  EXPECT_THROW(pullback_circle(s3, 3), std::invalid_argument);  // odd axis
  EXPECT_THROW(pullback_circle(s3, 2), std::invalid_argument);  // too short
}

TEST(CfldTest, RoundTripIsBitwise) {
  TorusGrid g(6, {4, 6, 4, 4, 6, 4});
  ConnectionField conn(g, StructureKind::SU3, random_two_form(6, 9, 0.1));
  Rng rng = substream(9, 1);
  for (double& v : conn.potential.data) v = 1e-3 * rng.uniform(-1.0, 1.0);

  const std::string path = testing::TempDir() + "roundtrip.cfld";
  write_cfld(path, conn);

  // The file starts with the one-line JSON manifest, then raw float64s.
  std::ifstream in(path, std::ios::binary);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, cfld_manifest(conn));
  nlohmann::json j = nlohmann::json::parse(line);
  EXPECT_EQ(j.size(), 5u);
  EXPECT_EQ(j.at("n").get<int>(), 6);
  EXPECT_EQ(j.at("structure_kind").get<std::string>(), "su3");
  EXPECT_EQ(j.at("shape").get<std::vector<int>>(),
            (std::vector<int>{4, 6, 4, 4, 6, 4}));
  EXPECT_EQ(j.at("payload_bytes").get<long>(),
            static_cast<long>(conn.potential.data.size() * sizeof(double)));
  EXPECT_EQ(j.at("background_coeffs").get<std::vector<double>>(),
            conn.background.coeffs);

  ConnectionField back = read_cfld(path);
  EXPECT_EQ(back.kind, conn.kind);
  EXPECT_EQ(back.grid.shape, conn.grid.shape);
  EXPECT_EQ(back.background.coeffs, conn.background.coeffs);
  EXPECT_EQ(back.potential.data, conn.potential.data);
}

TEST(CfldTest, RejectsCorruptFiles) {
  ConnectionField conn(cube_grid(6, 4), StructureKind::SU3, KForm(6, 2));
  const std::string good = testing::TempDir() + "good.cfld";
  write_cfld(good, conn);

  std::ifstream in(good, std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  in.close();

  const std::string trunc = testing::TempDir() + "trunc.cfld";
  std::ofstream(trunc, std::ios::binary)
      .write(all.data(), static_cast<long>(all.size()) - 64);
  try {
    read_cfld(trunc);
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("truncated payload"),
              std::string::npos);
  }

  const std::string garbled = testing::TempDir() + "garbled.cfld";
  std::ofstream(garbled) << "not a manifest\n";
  EXPECT_THROW(read_cfld(garbled), std::runtime_error);

  EXPECT_THROW(read_cfld(testing::TempDir() + "does_not_exist.cfld"),
               std::runtime_error);
}

TEST(ReportTest, MergesCsvAndJsonIntoLongFormat) {
  EXPECT_EQ(tool_version(), "0.1.0");

  const std::string dir = testing::TempDir() + "merge_inputs";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  // One real residual report...
  KForm F = random_two_form(8, 5, 0.4);
  ResidualReport rep = cayley_check(F);
  std::ofstream(dir + "/cayley.json") << to_json(rep) << "\n";

  // ...and one real flow trace.
  ConnectionField conn(cube_grid(6, 4), StructureKind::SU3,
                       0.1 * random_one_one(12));
  FlowConfig cfg;
  cfg.steps = 3;
  cfg.record_every = 1;
  FlowTrace trace = run_flow(conn, cfg);
  std::ofstream(dir + "/trace.csv") << trace_csv(trace);

  MergeResult mr = merge_reports({dir});
  EXPECT_EQ(mr.files_merged, 2);
  EXPECT_TRUE(mr.missing.empty());
  EXPECT_EQ(mr.long_csv.rfind("source,series,x,y\n", 0), 0u);
  EXPECT_NE(mr.long_csv.find("max_rel_residual"), std::string::npos);
  EXPECT_NE(mr.long_csv.find(",V,"), std::string::npos);
  nlohmann::json summary = nlohmann::json::parse(mr.summary_json);
  EXPECT_TRUE(summary.is_object());
  EXPECT_FALSE(summary.empty());
}

TEST(ReportTest, ListsMissingInputsWithoutFailing) {
  const std::string dir = testing::TempDir() + "merge_missing";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir + "/only.json")
      << to_json(cayley_check(random_two_form(8, 6, 0.3))) << "\n";

  const std::string ghost = dir + "/ghost.json";
  MergeResult mr = merge_reports({dir + "/only.json", ghost});
  EXPECT_EQ(mr.files_merged, 1);
  ASSERT_EQ(mr.missing.size(), 1u);
  EXPECT_EQ(mr.missing[0], ghost);

  const std::string empty_dir = testing::TempDir() + "merge_empty";
  std::filesystem::remove_all(empty_dir);
  std::filesystem::create_directories(empty_dir);
  MergeResult none = merge_reports({empty_dir});
  EXPECT_EQ(none.files_merged, 0);
}

}  // namespace
}  // namespace mvlab
