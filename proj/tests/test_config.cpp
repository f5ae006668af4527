#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sarsim/config.hpp"

using namespace sarsim;

TEST_CASE("config json round trip") {
  PipelineConfig c;
  c.patch_radius = 2;
  c.tre.looks = 2;
  c.tre.perturb_scope = PerturbScope::Omega;
  c.tre.conduction = Conduction::Rational;
  c.master_seed = 0xDEADBEEFULL;
  c.split_fraction = 0.75;
  auto back = PipelineConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
}

TEST_CASE("unknown keys and bad versions are rejected") {
  PipelineConfig c;
  auto j = c.to_json();
  j["mystery_knob"] = 3;
  CHECK_THROWS_AS(PipelineConfig::from_json(j), InputError);

  auto j2 = c.to_json();
  j2["version"] = 7;
  CHECK_THROWS_AS(PipelineConfig::from_json(j2), InputError);
}

TEST_CASE("partial configs keep defaults") {
  nlohmann::json j = {{"version", 1}, {"looks", 8}};
  auto c = PipelineConfig::from_json(j);
  CHECK(c.tre.looks == 8);
  CHECK(c.patch_radius == 3);
  CHECK(c.split_fraction == 0.9);
  CHECK(c.hash() != PipelineConfig{}.hash());
}

TEST_CASE("validation bounds") {
  PipelineConfig c;
  SUBCASE("split fraction") {
    c.split_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), InputError);
  }
  SUBCASE("remove prob") {
    c.vessel_remove_prob = 1.5;
    CHECK_THROWS_AS(c.validate(), InputError);
  }
  SUBCASE("shift range") {
    c.vessel_shift_min = 10;
    c.vessel_shift_max = 5;
    CHECK_THROWS_AS(c.validate(), InputError);
  }
  SUBCASE("lambda stability bound") {
    c.tre.diffusion_lambda = 0.3;
    CHECK_THROWS_AS(c.validate(), InputError);
  }
  SUBCASE("even drift box") {
    c.tre.drift_box = 4;
    CHECK_THROWS_AS(c.validate(), InputError);
  }
  SUBCASE("defaults are valid") { CHECK_NOTHROW(c.validate()); }
}

TEST_CASE("config load from file") {
  auto path = std::filesystem::temp_directory_path() / "sarsim_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"version": 1, "looks": 3, "enable_drift": false})";
  }
  auto c = PipelineConfig::load(path.string());
  CHECK(c.tre.looks == 3);
  CHECK_FALSE(c.tre.enable_drift);
  CHECK_THROWS_AS(PipelineConfig::load("/nonexistent/cfg.json"), InputError);
}
