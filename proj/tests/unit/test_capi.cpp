#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <istn/istn.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string serialize(const istn_scenario* s) {
  size_t needed = 0;
  REQUIRE(istn_scenario_serialize(s, nullptr, 0, &needed) == ISTN_OK);
  std::string buf(needed, '\0');
  REQUIRE(istn_scenario_serialize(s, buf.data(), buf.size(), &needed) == ISTN_OK);
  buf.resize(needed - 1);
  return buf;
}

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(istn_version()) == "0.1.0");
  istn_scenario* s = nullptr;
  CHECK(istn_scenario_from_string("no_such_key = 1\n", &s) == ISTN_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(istn_last_error()).find("no_such_key") != std::string::npos);
  CHECK(istn_scenario_reference(&s) == ISTN_OK);
  CHECK(std::string(istn_last_error()).empty());
  CHECK(istn_scenario_reference(nullptr) == ISTN_INVALID_ARGUMENT);
  CHECK(istn_scenario_set(s, nullptr, "1") == ISTN_INVALID_ARGUMENT);
  CHECK(istn_scenario_set(s, "mean_height_m", "tall") == ISTN_CONFIG);
  CHECK(istn_scenario_from_file("/nonexistent/x.scenario", &s) != ISTN_OK);
  istn_scenario_free(s);
  istn_scenario_free(nullptr);
  istn_model_free(nullptr);
}

TEST_CASE("scenario round trip") {
  istn_scenario* s = nullptr;
  REQUIRE(istn_scenario_reference(&s) == ISTN_OK);
  REQUIRE(istn_scenario_set(s, "mean_height_m", "35") == ISTN_OK);
  double h = 0.0;
  CHECK(istn_scenario_get(s, "mean_height_m", &h) == ISTN_OK);
  CHECK(h == 35.0);
  CHECK(istn_scenario_get(s, "user_density_per_km2_missing", &h) != ISTN_OK);

  const std::string text = serialize(s);
  istn_scenario* t = nullptr;
  REQUIRE(istn_scenario_from_string(text.c_str(), &t) == ISTN_OK);
  CHECK(serialize(t) == text);

  char small[8];
  size_t needed = 0;
  CHECK(istn_scenario_serialize(s, small, sizeof small, &needed) == ISTN_INVALID_ARGUMENT);
  CHECK(needed == text.size() + 1);
  CHECK(std::string(small) == text.substr(0, 7));

  const auto path = fs::temp_directory_path() / "istn_capi_test.scenario";
  std::ofstream(path) << text;
  istn_scenario* u = nullptr;
  REQUIRE(istn_scenario_from_file(path.c_str(), &u) == ISTN_OK);
  CHECK(serialize(u) == text);
  istn_scenario_free(s);
  istn_scenario_free(t);
  istn_scenario_free(u);
}

TEST_CASE("coverage through the C interface") {
  istn_scenario* s = nullptr;
  REQUIRE(istn_scenario_reference(&s) == ISTN_OK);
  istn_model* m = nullptr;
  REQUIRE(istn_model_create(s, nullptr, &m) == ISTN_OK);

  double sat = 0, ter = 0, both = 0, err = -1;
  REQUIRE(istn_analytic_coverage(m, ISTN_TIER_SAT, 0.0, &sat, &err) == ISTN_OK);
  CHECK(err >= 0.0);
  REQUIRE(istn_analytic_coverage(m, ISTN_TIER_TER, 0.0, &ter, nullptr) == ISTN_OK);
  REQUIRE(istn_analytic_coverage(m, ISTN_TIER_ISTN, 0.0, &both, nullptr) == ISTN_OK);
  CHECK(both == doctest::Approx(1 - (1 - sat) * (1 - ter)).epsilon(1e-14));
  CHECK(istn_analytic_coverage(m, static_cast<istn_tier>(7), 0.0, &sat, nullptr) == ISTN_INVALID_ARGUMENT);
  CHECK(istn_analytic_coverage(m, ISTN_TIER_SAT, NAN, &sat, nullptr) == ISTN_INVALID_ARGUMENT);

  istn_mc_options o;
  istn_mc_options_init(&o);
  CHECK(o.trials == 200000);
  o.trials = 20000;
  double mean = 0, hw = 0;
  REQUIRE(istn_mc_coverage(m, ISTN_TIER_TER, 0.0, &o, &mean, &hw) == ISTN_OK);
  CHECK(hw > 0.0);
  CHECK(std::abs(mean - ter) <= 0.015);
  o.trials = 0;
  CHECK(istn_mc_coverage(m, ISTN_TIER_TER, 0.0, &o, &mean, &hw) == ISTN_INVALID_ARGUMENT);

  istn_model_options mo;
  istn_model_options_init(&mo);
  CHECK(mo.strict_ter_sum == 0);
  mo.strict_ter_sum = 1;
  istn_model* strict = nullptr;
  REQUIRE(istn_model_create(s, &mo, &strict) == ISTN_OK);
  double literal = 0;
  REQUIRE(istn_analytic_coverage(strict, ISTN_TIER_TER, 0.0, &literal, nullptr) == ISTN_OK);
  CHECK(literal != ter);

  REQUIRE(istn_scenario_set(s, "blockage_density_per_km2", "-1") == ISTN_OK);
  istn_model* bad = nullptr;
  CHECK(istn_model_create(s, nullptr, &bad) == ISTN_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::string(istn_last_error()).find("blockage_density_per_km2") != std::string::npos);

  istn_model_free(m);
  istn_model_free(strict);
  istn_scenario_free(s);
}

TEST_CASE("runs through the C interface") {
  const auto dir = fs::temp_directory_path() / "istn_capi_run";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "bad.scenario") << "blockage_density_per_km2 = -2\n";

  istn_run_options o;
  istn_run_options_init(&o);
  CHECK(o.tol_tier == 0.015);
  CHECK(o.tol_istn == 0.02);
  const std::string bad = (dir / "bad.scenario").string();
  const std::string out = (dir / "out").string();
  o.scenario_path = bad.c_str();
  o.out_dir = out.c_str();
  CHECK(istn_run(&o, nullptr) == ISTN_CONFIG);

  o.scenario_path = nullptr;
  o.preset = "fig4";
  o.emit_only = 1;
  istn_run_summary summary{};
  REQUIRE(istn_run(&o, &summary) == ISTN_OK);
  CHECK(summary.rows == 0);
  CHECK(fs::exists(dir / "out" / "fig4.sweep"));
  CHECK(fs::exists(dir / "out" / "fig4_ref.scenario"));

  CHECK(istn_emit_preset("fig2a", out.c_str()) == ISTN_OK);
  CHECK(fs::exists(dir / "out" / "fig2a_ns100-h20.scenario"));
  CHECK(istn_emit_preset("fig7", out.c_str()) == ISTN_CONFIG);

  o.preset = nullptr;
  o.emit_only = 0;
  const std::string ref = (dir / "out" / "fig4_ref.scenario").string();
  o.scenario_path = ref.c_str();
  o.methods = "analytic";
  o.tiers = "ter";
  REQUIRE(istn_run(&o, &summary) == ISTN_OK);
  CHECK(summary.rows == 1);
  CHECK(fs::exists(dir / "out" / "results.csv"));
  CHECK(istn_run(nullptr, nullptr) == ISTN_INVALID_ARGUMENT);
}
