// Runs the bmsynth binary end to end.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "temp_dir.hpp"

#include "bodymap_synth/raster.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kExe = BMSYNTH_EXE;
const fs::path kSourceDir = BMS_SOURCE_DIR;

struct Result {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Result run(const std::string& args) {
  const std::string cmd = quote(kExe) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Result r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_pngs(const fs::path& root) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    n += e.path().extension() == ".png" ? 1 : 0;
  }
  return n;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json manifest_of(const fs::path& root) { return json::parse(slurp(root / "manifest.json")); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate, validate, subset") {
  bms::testing::TempDir dir;
  const std::string d = (dir / "d").string();

  const Result gen = run("generate basic3 --out " + quote(d) + " --seed 42 --per-class-train 4 --per-class-test 2");
  REQUIRE(gen.code == 0);
  CHECK(gen.out.find("18 images") != std::string::npos);
  CHECK(count_pngs(d) == 18);
  CHECK(fs::exists(fs::path(d) / "manifest.json"));

  const Result porcelain = run("generate basic3 --porcelain --out " + quote(d) +
                               " --seed 42 --per-class-train 4 --per-class-test 2");
  REQUIRE(porcelain.code == 0);
  const json summary = json::parse(porcelain.out);
  CHECK(summary["images"] == 18);
  CHECK(summary["train"] == 12);
  CHECK(summary["test"] == 6);
  CHECK(summary["config_digest"] == manifest_of(d)["config_digest"]);

  const Result ok = run("validate --in " + quote(d));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("0 violation") != std::string::npos);

  const Result sub = run("subset --in " + quote(d) + " --out " + quote((dir / "s").string()) +
                         " --train-per-class 2 --test-per-class 1");
  CHECK(sub.code == 0);
  CHECK(count_pngs(dir / "s") == 9);
  CHECK(run("validate --in " + quote((dir / "s").string())).code == 0);

  const Result over = run("subset --in " + quote(d) + " --out " + quote((dir / "s2").string()) +
                          " --train-per-class 5 --test-per-class 1");
  CHECK(over.code == 2);

  SUBCASE("tampered manifest") {
    json m = manifest_of(d);
    m["entries"][0]["label"]["kind"] = "point_cluster";
    std::ofstream(fs::path(d) / "manifest.json") << m.dump(2);
    const Result bad = run("validate --in " + quote(d));
    CHECK(bad.code == 5);
    CHECK(bad.out.find("violation entry=0 kind=label-mismatch") != std::string::npos);
  }
}

TEST_CASE("regions36 with an empty test split") {
  bms::testing::TempDir dir;
  const Result r = run("generate regions36 --out " + quote((dir / "r").string()) +
                       " --seed 1 --per-class-train 2 --per-class-test 0 --jobs 2");
  REQUIRE(r.code == 0);
  CHECK(count_pngs(dir / "r") == 72);
  CHECK_FALSE(fs::exists(dir / "r" / "test"));
}

TEST_CASE("jobs do not change the output") {
  bms::testing::TempDir dir;
  const std::string common = " --seed 5 --per-class-train 3 --per-class-test 1 --size 500x400";
  REQUIRE(run("generate diagnoses --out " + quote((dir / "a").string()) + common + " --jobs 1").code == 0);
  REQUIRE(run("generate diagnoses --out " + quote((dir / "b").string()) + common + " --jobs 4").code == 0);
  CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));
  for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
    if (e.path().extension() == ".png") {
      const fs::path rel = fs::relative(e.path(), dir / "a");
      CHECK(slurp(e.path()) == slurp(dir / "b" / rel));
    }
  }
}

TEST_CASE("config file precedence") {
  bms::testing::TempDir dir;
  std::ofstream(dir / "cfg.json") << R"({
    // comments are allowed
    "out": "from-file",
    "seed": 5,
    "per_class_train": 2,
    "per_class_test": 1,
    "width": 500,
    "height": 400
  })";
  const std::string cfg = quote((dir / "cfg.json").string());

  REQUIRE(run("generate basic3 --config " + cfg).code == 0);
  const json file_only = manifest_of(dir / "from-file");
  CHECK(file_only["master_seed"] == 5);
  CHECK(file_only["config"]["canvas"]["width"] == 500);

  REQUIRE(run("generate basic3 --config " + cfg + " --seed 6 --out " + quote((dir / "flags").string())).code == 0);
  const json flagged = manifest_of(dir / "flags");
  CHECK(flagged["master_seed"] == 6);
  CHECK(flagged["counts"]["train_per_class"] == 2);
  CHECK(flagged["config_digest"] != file_only["config_digest"]);

  std::ofstream(dir / "bad.json") << R"({"sede": 5})";
  CHECK(run("generate basic3 --out x --config " + quote((dir / "bad.json").string())).code == 2);
}

TEST_CASE("the shipped scenario file reproduces the built-in one") {
  bms::testing::TempDir dir;
  const std::string common = " --seed 2 --per-class-train 1 --per-class-test 0 --porcelain";
  const Result a = run("generate diagnoses --out " + quote((dir / "a").string()) + common);
  const Result b = run("generate diagnoses --out " + quote((dir / "b").string()) + common + " --scenario " +
                       quote((kSourceDir / "data/scenarios/default.json").string()));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(json::parse(a.out)["config_digest"] == json::parse(b.out)["config_digest"]);
}

TEST_CASE("exit codes") {
  bms::testing::TempDir dir;
  const std::string out = quote((dir / "o").string());
  CHECK(run("").code == 2);
  CHECK(run("generate").code == 2);
  CHECK(run("generate trees --out " + out).code == 2);
  CHECK(run("generate basic3 --out " + out + " --bogus").code == 2);
  CHECK(run("generate basic3 --out " + out + " --size 100by80").code == 2);
  CHECK(run("generate basic3 --out " + out + " --grid 5x5").code == 2);
  CHECK(run("generate basic3").code == 2);
  CHECK(run("generate basic3 --out " + out + " --mask " + quote((dir / "none.png").string())).code == 4);
  CHECK(run("validate --in " + quote((dir / "missing").string())).code == 4);
  CHECK(run("--help").code == 0);
  CHECK_FALSE(fs::exists(dir / "o"));

  SUBCASE("generation failure leaves only the partial marker") {
    std::ofstream(dir / "tight.json") << R"({"limits": {"max_retries": 1, "max_point_tries": 1}})";
    const Result r = run("generate regions36 --out " + out + " --per-class-train 3 --per-class-test 0 --config " +
                         quote((dir / "tight.json").string()));
    CHECK(r.code == 3);
    std::vector<std::string> left;
    for (const auto& e : fs::directory_iterator(dir / "o")) {
      left.push_back(e.path().filename().string());
    }
    CHECK(left == std::vector<std::string>{".partial"});
    const Result v = run("validate --in " + out);
    CHECK(v.code == 5);
    CHECK(v.out.find("partial-output") != std::string::npos);
  }
}

TEST_CASE("regions") {
  bms::testing::TempDir dir;
  for (const std::string grid : {"3x4", "2x6", "12x1"}) {
    const fs::path png = dir / ("regions-" + grid + ".png");
    REQUIRE(run("regions --out " + quote(png.string()) + " --size 600x400 --grid " + grid).code == 0);
    const bms::Canvas img = bms::read_png(png);
    CHECK(img.width() == 600);
    std::set<std::uint32_t> colors;
    for (const bms::Rgba c : img.pixels()) {
      if (!(c == bms::kWhite)) {
        colors.insert((std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b);
      }
    }
    CHECK(colors.size() == 12);
  }
  CHECK(run("regions --out " + quote((dir / "x.png").string()) + " --grid 5x5").code == 2);
  CHECK_FALSE(fs::exists(dir / "x.png"));
}

}  // TEST_SUITE
