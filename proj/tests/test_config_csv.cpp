#include <sstream>

#include <gtest/gtest.h>

#include "mvam/config.hpp"
#include "mvam/csv.hpp"
#include "mvam/error.hpp"

using namespace mvam;

namespace {

const char* kMinimal = R"({
  "components": [
    {"name": "block", "mass_kg": 4.3, "bounds": {"xmin": 0.0, "xmax": 0.0, "ymin": 0.0, "ymax": 0.0}}
  ],
  "base": {"mass_kg": 0.0, "com_m": [0, 0], "inertia_kgm2": 0.1}
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const RunConfig c = parse_config(kMinimal);
  ASSERT_EQ(c.space.components.size(), 1u);
  EXPECT_EQ(c.evaluation.gait.speed, 0.2);
  EXPECT_EQ(c.evaluation.gait.period, 0.25);
  EXPECT_EQ(c.evaluation.actuators.knee.gear_ratio, 30.0);
  EXPECT_EQ(c.evaluation.actuators.hip_sagittal.gear_ratio, 50.0);
  EXPECT_EQ(c.evaluation.actuators.hip_frontal.gear_ratio, 100.0);
  EXPECT_EQ(c.evaluation.payload.cap, 5.0);
  EXPECT_EQ(c.ga.population_size, 50);
  EXPECT_EQ(c.space.geometry.knee, KneeDirection::Rearward);
}

TEST(Config, RoundTripThroughJson) {
  for (const char* name : {"husky_default.json", "husky_nominal.json", "coarse.json"}) {
    const RunConfig a = load_config(std::string(MVAM_CONFIG_DIR) + "/" + name);
    const std::string text = to_json(a);
    EXPECT_EQ(to_json(parse_config(text)), text) << name;
  }
}

TEST(Config, ManifestIsAccepted) {
  const RunConfig a = parse_config(kMinimal);
  const std::string manifest = "{\"command\": \"sweep\", \"resolved_config\": " + to_json(a) + "}";
  EXPECT_EQ(to_json(parse_config(manifest)), to_json(a));
}

TEST(Config, MalformedJsonReportsLine) {
  const std::string msg = error_of("{\n  \"components\": [\n  }\n");
  EXPECT_NE(msg.find("test.json:3:"), std::string::npos) << msg;
}

TEST(Config, FieldErrorsNameThePath) {
  std::string bad = kMinimal;
  bad.replace(bad.find("4.3"), 3, "\"heavy\"");
  EXPECT_NE(error_of(bad).find("components[0].mass_kg"), std::string::npos) << error_of(bad);

  bad = kMinimal;
  bad.replace(bad.find("\"base\""), 6, "\"bsae\"");
  EXPECT_NE(error_of(bad).find("bsae"), std::string::npos);

  EXPECT_NE(error_of("{}").find("components"), std::string::npos);
}

TEST(Config, ValidationErrorsAreConfigErrors) {
  std::string bad = kMinimal;
  bad.replace(bad.find("4.3"), 3, "-1");
  EXPECT_NE(error_of(bad).find("mass must be positive"), std::string::npos);
  const std::string ga = std::string(kMinimal).insert(1, "\"ga\": {\"population_size\": 1},");
  EXPECT_NE(error_of(ga).find("population"), std::string::npos);
}

TEST(Csv, RecordsRoundTripExactly) {
  std::vector<EvaluationRecord> rs(3);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    rs[i].id = i;
    rs[i].body.mass = 4.3;
    rs[i].body.com_offset = {0.1 / 3.0 * static_cast<double>(i), -0.05};
    rs[i].body.inertia_sagittal = 0.1 + 1e-17;
    rs[i].tcot = 0.38 + static_cast<double>(i) / 7.0;
    rs[i].payload_margin = 18.89;
    rs[i].min_stability_margin = 0.16020000000000004;
    rs[i].feasible = true;
  }
  rs[1].feasible = false;
  rs[1].tcot.reset();
  rs[1].payload_margin.reset();
  std::stringstream ss;
  write_records_csv(ss, rs);
  const auto rows = read_records_csv(ss);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].cx, rs[i].body.com_offset.x);
    EXPECT_EQ(rows[i].ib, rs[i].body.inertia_sagittal);
    EXPECT_EQ(rows[i].tcot, rs[i].tcot);
    EXPECT_EQ(rows[i].feasible, rs[i].feasible);
  }
}

TEST(Csv, RecordHeaderIsFixed) {
  std::stringstream ss;
  write_records_csv(ss, {});
  EXPECT_EQ(ss.str(), "id,cx_m,cy_m,ib_kgm2,mass_kg,tcot,payload_margin_kg,min_stability_margin_m,feasible\n");
}

TEST(Csv, BadRowNamesLine) {
  std::stringstream ss(std::string(kRecordHeader) + "\n0,1,2,3,4,5,6,7,1\n1,x,2,3,4,5,6,7,1\n");
  try {
    read_records_csv(ss, "r.csv");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("r.csv:3"), std::string::npos);
  }
}

TEST(Csv, TraceHeader) {
  const std::string h = trace_header();
  EXPECT_EQ(h.rfind("t_s,x_m,z_m,theta_rad,fl_phi_rad,fl_ell_m,fl_tau_hip_Nm,fl_tau_knee_Nm,fl_Fx_N,fl_Fz_N", 0), 0u);
  EXPECT_EQ(h.substr(h.size() - 9), ",margin_m");
}

TEST(Slice, SnapsToNearestCy) {
  std::vector<RecordRow> rows;
  for (int i = 0; i < 6; ++i) {
    RecordRow r;
    r.id = static_cast<std::size_t>(i);
    r.cy = i % 2 == 0 ? -0.05 : 0.05;
    rows.push_back(r);
  }
  const Slice s = slice_at_cy(rows, 0.04);
  ASSERT_TRUE(s.snapped_cy);
  EXPECT_EQ(*s.snapped_cy, 0.05);
  EXPECT_EQ(s.rows.size(), 3u);
  EXPECT_TRUE(slice_at_cy({}, 0.0).rows.empty());
}
