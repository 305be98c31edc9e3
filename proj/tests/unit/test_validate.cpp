#include <fstream>

#include "doctest.h"
#include "temp_dir.hpp"

#include "bodymap_synth/build.hpp"
#include "bodymap_synth/error.hpp"
#include "bodymap_synth/validate.hpp"

using namespace bms;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

DatasetConfig small_config(Family family) {
  DatasetConfig c = default_config(family);
  c.master_seed = 17;
  c.width = 400;
  c.height = 320;
  c.margin = 20;
  c.per_class_train = 2;
  c.per_class_test = 1;
  return c;
}

json load_json(const fs::path& file) {
  std::ifstream in(file);
  return json::parse(in);
}

void save_json(const fs::path& file, const json& doc) { std::ofstream(file) << doc.dump(2); }

std::size_t first_entry(const json& doc, const std::string& kind) {
  for (std::size_t i = 0; i < doc["entries"].size(); ++i) {
    if (doc["entries"][i]["geometry"][0]["kind"] == kind) {
      return i;
    }
  }
  FAIL("no entry of kind " << kind);
  return 0;
}

// Asserts the report holds exactly one violation, of `kind`, on `entry`.
void expect_single(const ValidationReport& r, ViolationKind kind, std::optional<std::size_t> entry) {
  REQUIRE_MESSAGE(r.violations.size() == 1, "got " << r.violations.size() << " violations");
  CHECK(r.violations[0].kind == kind);
  CHECK(r.violations[0].entry == entry);
}

struct Built {
  bms::testing::TempDir dir;
  fs::path root;
  explicit Built(Family f, const std::function<void(DatasetConfig&)>& edit = {}) : root(dir / "ds") {
    DatasetConfig c = small_config(f);
    if (edit) {
      edit(c);
    }
    generate_dataset(make_context(c), root, 2);
  }
  fs::path manifest() const { return root / kManifestName; }
};

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("kind names") {
  CHECK(to_string(ViolationKind::RegionMismatch) == "region-mismatch");
  CHECK(to_string(ViolationKind::MissingFile) == "missing-file");
}

TEST_CASE("fresh datasets are clean") {
  for (const Family f : {Family::Basic3, Family::Region36, Family::Diagnosis5}) {
    const Built b(f);
    const ValidationReport r = validate_dataset(b.root);
    CHECK(r.ok());
    CHECK(r.entries_checked == enumerate_labels(f).size() * 3);
    CHECK(validate_dataset(b.root, 4).ok());
  }
}

TEST_CASE("fault: swapped region label") {
  const Built b(Family::Region36);
  json doc = load_json(b.manifest());
  doc["entries"][10]["label"]["region"] = (doc["entries"][10]["label"]["region"].get<int>() + 5) % 12;
  save_json(b.manifest(), doc);
  expect_single(validate_dataset(b.root), ViolationKind::RegionMismatch, 10);
}

TEST_CASE("fault: deleted image") {
  const Built b(Family::Basic3);
  fs::remove(b.root / "test/dashed_line/00000.png");
  const ValidationReport r = validate_dataset(b.root);
  expect_single(r, ViolationKind::MissingFile, 5);
}

TEST_CASE("fault: edited geometry") {
  const Built b(Family::Basic3);
  json doc = load_json(b.manifest());
  SUBCASE("line endpoint pushed past the radius") {
    const std::size_t i = first_entry(doc, "line");
    json& g = doc["entries"][i]["geometry"][0];
    const double sx = g["control_points"][0][0];
    const double sy = g["control_points"][0][1];
    // Straight quadratic towards the farthest mask corner (at least 228 px
    // away), 210 px long, so it stays inside the rectangle.
    double cx = 0;
    double cy = 0;
    for (const double x : {21.0, 378.0}) {
      for (const double y : {21.0, 298.0}) {
        if (std::hypot(x - sx, y - sy) > std::hypot(cx - sx, cy - sy)) {
          cx = x;
          cy = y;
        }
      }
    }
    const double dx = cx - sx;
    const double dy = cy - sy;
    const double norm = std::hypot(dx, dy);
    const double ex = sx + 210.0 * dx / norm;
    const double ey = sy + 210.0 * dy / norm;
    g["degree"] = 2;
    g["control_points"] = {{sx, sy}, {(sx + ex) / 2, (sy + ey) / 2}, {ex, ey}};
    save_json(b.manifest(), doc);
    expect_single(validate_dataset(b.root), ViolationKind::Bounds, i);
  }
  SUBCASE("cluster step stretched") {
    const std::size_t i = first_entry(doc, "point_cluster");
    json& pts = doc["entries"][i]["geometry"][0]["points"];
    const double x0 = pts[0][0];
    const double y0 = pts[0][1];
    pts[1] = {x0 + (x0 < 200 ? 25.0 : -25.0), y0};
    save_json(b.manifest(), doc);
    expect_single(validate_dataset(b.root), ViolationKind::Bounds, i);
  }
  SUBCASE("cluster point moved off the mask") {
    const std::size_t i = first_entry(doc, "point_cluster");
    json& pts = doc["entries"][i]["geometry"][0]["points"];
    pts[pts.size() - 1] = {5.0, 5.0};
    save_json(b.manifest(), doc);
    const ValidationReport r = validate_dataset(b.root);
    CHECK(r.count(ViolationKind::Containment) == 1);
  }
}

TEST_CASE("other findings") {
  SUBCASE("wrong primitive kind for the label") {
    const Built b(Family::Basic3);
    json doc = load_json(b.manifest());
    const std::size_t i = first_entry(doc, "dashed_line");
    doc["entries"][i]["label"]["kind"] = "line";
    save_json(b.manifest(), doc);
    expect_single(validate_dataset(b.root), ViolationKind::LabelMismatch, i);
  }
  SUBCASE("diagnosis label swapped") {
    const Built b(Family::Diagnosis5);
    json doc = load_json(b.manifest());
    doc["entries"][0]["label"]["diagnosis"] = "high_blood_pressure";
    save_json(b.manifest(), doc);
    const ValidationReport r = validate_dataset(b.root);
    CHECK(r.count(ViolationKind::LabelMismatch) == 1);
    for (const Violation& v : r.violations) {
      CHECK(v.entry == std::optional<std::size_t>{0});
    }
  }
  SUBCASE("corrupt and resized images") {
    const Built b(Family::Basic3);
    std::ofstream(b.root / "train/line/00001.png") << "not a png";
    write_png(b.root / "train/point_cluster/00000.png", Canvas(10, 10, kWhite));
    const ValidationReport r = validate_dataset(b.root);
    CHECK(r.violations.size() == 2);
    CHECK(r.count(ViolationKind::CorruptFile) == 1);
    CHECK(r.count(ViolationKind::DimensionMismatch) == 1);
  }
  SUBCASE("tampered config") {
    const Built b(Family::Basic3);
    json doc = load_json(b.manifest());
    doc["config"]["line"]["endpoint_radius"] = 500.0;
    save_json(b.manifest(), doc);
    CHECK(validate_dataset(b.root).count(ViolationKind::DigestMismatch) == 1);
  }
  SUBCASE("duplicate path and imbalance") {
    const Built b(Family::Basic3);
    json doc = load_json(b.manifest());
    doc["entries"][1]["path"] = doc["entries"][0]["path"];
    save_json(b.manifest(), doc);
    const ValidationReport r = validate_dataset(b.root);
    CHECK(r.count(ViolationKind::DuplicatePath) == 1);
    CHECK(r.count(ViolationKind::Balance) == 0);

    doc["entries"].erase(1);
    save_json(b.manifest(), doc);
    const ValidationReport r2 = validate_dataset(b.root);
    expect_single(r2, ViolationKind::Balance, std::nullopt);
  }
  SUBCASE("partial marker") {
    const Built b(Family::Basic3);
    std::ofstream(b.root / kPartialMarkerName).flush();
    expect_single(validate_dataset(b.root), ViolationKind::PartialOutput, std::nullopt);
    fs::remove(b.manifest());
    expect_single(validate_dataset(b.root), ViolationKind::PartialOutput, std::nullopt);
  }
  SUBCASE("mask copy replaced") {
    bms::testing::TempDir masks;
    write_png(masks / "mask.png", Canvas(400, 320, kWhite));
    const Built b(Family::Basic3, [&masks](DatasetConfig& c) { c.mask_file = masks / "mask.png"; });
    CHECK(validate_dataset(b.root).ok());
    Canvas other(400, 320, kWhite);
    other.at(0, 0) = kBlack;
    write_png(b.root / kMaskCopyName, other);
    CHECK(validate_dataset(b.root).count(ViolationKind::DigestMismatch) == 1);
  }
}

TEST_CASE("unreadable datasets are I/O errors") {
  bms::testing::TempDir dir;
  CHECK_THROWS_AS(validate_dataset(dir / "absent"), IoError);
  CHECK_THROWS_AS(validate_dataset(dir.path()), IoError);
  std::ofstream(dir / kManifestName) << "{ not json";
  CHECK_THROWS_AS(validate_dataset(dir.path()), IoError);
}

TEST_CASE("parallel checks equal the serial reference") {
  const Built b(Family::Region36);
  json doc = load_json(b.manifest());
  for (const int i : {3, 40, 77}) {
    doc["entries"][i]["label"]["region"] = (doc["entries"][i]["label"]["region"].get<int>() + 1) % 12;
  }
  fs::remove(b.root / doc["entries"][50]["path"].get<std::string>());
  save_json(b.manifest(), doc);

  const Manifest m = read_manifest(b.manifest());
  const CheckContext ctx = make_check_context(m, b.root);
  const auto serial = check_entries_serial(ctx, m.entries);
  CHECK(serial.size() == 4);
  for (const int jobs : {1, 2, 8}) {
    const auto parallel = check_entries_parallel(ctx, m.entries, jobs);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
      CHECK(parallel[k].entry == serial[k].entry);
      CHECK(parallel[k].kind == serial[k].kind);
      CHECK(parallel[k].message == serial[k].message);
    }
  }
}

}  // TEST_SUITE
