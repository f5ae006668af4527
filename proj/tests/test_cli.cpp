#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarsim/raster_io.hpp"
#include "sarsim/tre.hpp"

using namespace sarsim;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SARSIM_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

struct CliFixture {
  fs::path dir;

  CliFixture() {
    dir = fs::temp_directory_path() / "sarsim_cli_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto post = sample_speckle(64, 64, 4, 5);
    LabelMask labels(64, 64, 0);
    for (int y = 20; y < 36; ++y)
      for (int x = 20; x < 36; ++x) {
        post(x, y) *= 0.4f;
        labels.set(x, y, 1);
      }
    save_raster(post, dir / "post.fras");
    save_label_mask(labels, dir / "labels.png");
  }

  std::string path(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli synth is byte-stable and honors exit codes") {
  CliFixture fx;
  const std::string base = "synth --post " + fx.path("post.fras") +
                           " --labels " + fx.path("labels.png") + " --seed 3";
  REQUIRE(run_cli(base + " --out-dir " + fx.path("out1")) == 0);
  REQUIRE(run_cli(base + " --out-dir " + fx.path("out2")) == 0);
  CHECK(slurp(fx.dir / "out1/pre.fras") == slurp(fx.dir / "out2/pre.fras"));
  CHECK(fs::exists(fx.dir / "out1/change_gt.png"));
  CHECK(fs::exists(fx.dir / "out1/provenance.json"));

  // missing input -> 2
  CHECK(run_cli("synth --post " + fx.path("nope.fras") + " --labels " +
                fx.path("labels.png") + " --out-dir " + fx.path("o")) == 2);
  // unknown flag -> 2
  CHECK(run_cli("synth --bogus 1") == 2);
  // degenerate scene -> 3
  {
    LabelMask all_oil(16, 16, 1);
    save_label_mask(all_oil, fx.dir / "alloil.png");
    IntensityRaster flat(16, 16, 1.0f);
    save_raster(flat, fx.dir / "flat.fras");
    CHECK(run_cli("synth --post " + fx.path("flat.fras") + " --labels " +
                  fx.path("alloil.png") + " --out-dir " + fx.path("o3")) == 3);
  }
}

TEST_CASE("cli cd round trip") {
  CliFixture fx;
  IntensityRaster pre(32, 32, 1.0f);
  auto post = pre;
  for (int y = 8; y < 16; ++y)
    for (int x = 8; x < 16; ++x) post(x, y) = 0.2f;
  save_raster(pre, fx.dir / "a.fras");
  save_raster(post, fx.dir / "b.fras");
  REQUIRE(run_cli("cd diff-otsu --pre " + fx.path("a.fras") + " --post " +
                  fx.path("b.fras") + " --out " + fx.path("chg.png")) == 0);
  REQUIRE(run_cli("cd eval --pred " + fx.path("chg.png") + " --gt " +
                  fx.path("chg.png") + " --report " + fx.path("rep.json")) ==
          0);
  std::ifstream in(fx.dir / "rep.json");
  nlohmann::json rep;
  in >> rep;
  CHECK(rep.at("f1").at("value").get<double>() == 1.0);
  CHECK(rep.at("fp").get<int>() == 0);
}

TEST_CASE("cli eval restore writes a versioned report") {
  CliFixture fx;
  REQUIRE(run_cli("synth --post " + fx.path("post.fras") + " --labels " +
                  fx.path("labels.png") + " --seed 1 --out-dir " +
                  fx.path("synth")) == 0);
  BinaryMask sea(64, 64);
  for (int y = 2; y < 16; ++y)
    for (int x = 2; x < 62; ++x) sea.set(x, y);
  save_binary_mask(sea, fx.dir / "sea.png");
  BinaryMask omega(64, 64);
  for (int y = 20; y < 36; ++y)
    for (int x = 20; x < 36; ++x) omega.set(x, y);
  save_binary_mask(omega, fx.dir / "omega.png");
  REQUIRE(run_cli("eval restore --original " + fx.path("post.fras") +
                  " --restored " + (fx.dir / "synth/pre.fras").string() +
                  " --omega " + fx.path("omega.png") + " --sea-roi " +
                  fx.path("sea.png") + " --report " + fx.path("qr.json")) ==
          0);
  std::ifstream in(fx.dir / "qr.json");
  nlohmann::json rep;
  in >> rep;
  CHECK(rep.at("version") == 1);
  CHECK(rep.at("original").contains("enl"));
  CHECK(rep.at("restored").at("residual_dice").contains("defined"));
}

TEST_CASE("cli dataset build/stats and jobs determinism") {
  CliFixture fx;
  nlohmann::json inputs = nlohmann::json::array();
  for (int i = 0; i < 4; ++i)
    inputs.push_back({{"id", "s" + std::to_string(i)},
                      {"post", fx.path("post.fras")},
                      {"labels", fx.path("labels.png")}});
  {
    std::ofstream out(fx.dir / "inputs.json");
    out << inputs.dump();
  }
  const std::string base = "dataset build --inputs " + fx.path("inputs.json") +
                           " --seed 11 --split 0.75";
  REQUIRE(run_cli(base + " --jobs 1 --out " + fx.path("ds1")) == 0);
  REQUIRE(run_cli(base + " --jobs 8 --out " + fx.path("ds8")) == 0);
  for (const char* split : {"train", "test"})
    for (const auto& entry :
         fs::recursive_directory_iterator(fx.dir / "ds1" / split))
      if (entry.is_regular_file()) {
        auto rel = fs::relative(entry.path(), fx.dir / "ds1");
        CHECK(slurp(entry.path()) == slurp(fx.dir / "ds8" / rel));
      }
  CHECK(run_cli("dataset stats --dataset " + fx.path("ds1")) == 0);
  CHECK(run_cli("dataset stats --dataset " + fx.path("missing")) == 2);
}
