#include "bodymap_synth/validate.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "bodymap_synth/error.hpp"
#include "bodymap_synth/raster.hpp"

namespace bms {

namespace fs = std::filesystem;

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::PartialOutput:
      return "partial-output";
    case ViolationKind::DigestMismatch:
      return "digest-mismatch";
    case ViolationKind::DuplicatePath:
      return "duplicate-path";
    case ViolationKind::Balance:
      return "balance";
    case ViolationKind::MissingFile:
      return "missing-file";
    case ViolationKind::CorruptFile:
      return "corrupt-file";
    case ViolationKind::DimensionMismatch:
      return "dimension-mismatch";
    case ViolationKind::LabelMismatch:
      return "label-mismatch";
    case ViolationKind::Bounds:
      return "bounds";
    case ViolationKind::Containment:
      return "containment";
    case ViolationKind::RegionMismatch:
      return "region-mismatch";
  }
  return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

CheckContext make_check_context(const Manifest& manifest, const fs::path& root) {
  DatasetConfig config;
  try {
    config = config_from_canonical(manifest.config, root);
  } catch (const ConfigError& e) {
    throw IoError(std::string("corrupt manifest: ") + e.what());
  }
  BodyMask mask = config.mask_file ? load_mask(*config.mask_file)
                                   : default_mask(config.width, config.height, config.margin);
  std::optional<RegionPartition> partition;
  if (config.family != Family::Basic3) {
    partition = config.region_map_file ? load_partition(mask, *config.region_map_file)
                                       : build_partition(mask, config.grid_rows, config.grid_cols);
  }
  std::optional<ScenarioSpec> scenario = config.scenario;
  if (config.family == Family::Diagnosis5 && !scenario) {
    throw IoError("corrupt manifest: diagnoses config without a scenario");
  }
  return CheckContext{std::move(config), std::move(mask), std::move(partition), std::move(scenario), root};
}

namespace {

// Collects at most one finding per kind.
class Findings {
public:
  Findings(std::size_t entry) : entry_(entry) {}

  void add(ViolationKind kind, const std::string& message) { found_.try_emplace(kind, message); }

  std::vector<Violation> take() {
    std::vector<Violation> out;
    for (auto& [kind, message] : found_) {
      out.push_back({entry_, kind, std::move(message)});
    }
    return out;
  }

private:
  std::size_t entry_;
  std::map<ViolationKind, std::string> found_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void check_curve_bounds(const BezierCurve& curve, const LineParams& params, std::size_t p, Findings& f) {
  const Point s = curve.start();
  const Point e = curve.end();
  const double chord = distance(s, e);
  if (!(chord <= params.endpoint_radius)) {
    f.add(ViolationKind::Bounds, "primitive " + std::to_string(p) + ": endpoint distance " + fmt(chord) +
                                     " exceeds " + fmt(params.endpoint_radius));
  }
  const auto cp = curve.control_points();
  for (int k = 1; k < curve.degree(); ++k) {
    const double dev = distance(cp[static_cast<std::size_t>(k)], chord_point(s, e, k, curve.degree()));
    if (!(dev <= params.control_deviation)) {
      f.add(ViolationKind::Bounds, "primitive " + std::to_string(p) + ": control point " + std::to_string(k) +
                                       " is " + fmt(dev) + " from its chord point (limit " +
                                       fmt(params.control_deviation) + ")");
    }
  }
}

void check_cluster_bounds(const PointClusterPrimitive& cluster, const ClusterParams& params, double point_radius,
                          std::size_t p, Findings& f) {
  const auto n = static_cast<int>(cluster.points.size());
  if (n < params.n_min || n > params.n_max) {
    f.add(ViolationKind::Bounds, "primitive " + std::to_string(p) + ": cluster has " + std::to_string(n) +
                                     " points, outside [" + std::to_string(params.n_min) + ", " +
                                     std::to_string(params.n_max) + "]");
  }
  for (std::size_t i = 1; i < cluster.points.size(); ++i) {
    const double step = distance(cluster.points[i - 1], cluster.points[i]);
    if (!(step <= params.step_radius)) {
      f.add(ViolationKind::Bounds, "primitive " + std::to_string(p) + ": step " + std::to_string(i) + " is " +
                                       fmt(step) + " (limit " + fmt(params.step_radius) + ")");
    }
  }
  if (cluster.point_radius != point_radius) {
    f.add(ViolationKind::Bounds, "primitive " + std::to_string(p) + ": point radius " + fmt(cluster.point_radius) +
                                     " differs from " + fmt(point_radius));
  }
}

}  // namespace

std::vector<Violation> check_geometry(const CheckContext& ctx, const ManifestEntry& entry, std::size_t index) {
  Findings f(index);
  const DatasetConfig& c = ctx.config;
  const ClassLabel& label = entry.label;

  if (label.family != c.family) {
    f.add(ViolationKind::LabelMismatch, "label family differs from the dataset family");
    return f.take();
  }
  if (label.family == Family::Region36 && (label.region < 0 || label.region >= kRegionCount)) {
    f.add(ViolationKind::LabelMismatch, "label region " + std::to_string(label.region) + " out of range");
    return f.take();
  }

  const std::vector<ScenarioRule>* rules = nullptr;
  if (label.family == Family::Diagnosis5) {
    rules = &ctx.scenario->rules_for(label.diagnosis);
    std::vector<int> per_rule(rules->size(), 0);
    for (const PlacedPrimitive& placed : entry.geometry) {
      if (placed.rule >= 0 && static_cast<std::size_t>(placed.rule) < rules->size()) {
        ++per_rule[static_cast<std::size_t>(placed.rule)];
      }
    }
    for (std::size_t r = 0; r < rules->size(); ++r) {
      if (per_rule[r] < (*rules)[r].count_min || per_rule[r] > (*rules)[r].count_max) {
        f.add(ViolationKind::LabelMismatch, "rule " + std::to_string(r) + " drew " + std::to_string(per_rule[r]) +
                                                " primitives, outside its count range");
      }
    }
  } else if (entry.geometry.size() != 1) {
    f.add(ViolationKind::LabelMismatch,
          "expected exactly one primitive, found " + std::to_string(entry.geometry.size()));
  }

  for (std::size_t p = 0; p < entry.geometry.size(); ++p) {
    const PlacedPrimitive& placed = entry.geometry[p];
    const PrimitiveKind kind = kind_of(placed.primitive);

    ParamOverrides overrides;
    std::optional<int> domain_region;
    Rgba expected_color = c.stroke.color;
    PrimitiveKind expected_kind = label.kind;
    if (rules) {
      if (placed.rule < 0 || static_cast<std::size_t>(placed.rule) >= rules->size()) {
        f.add(ViolationKind::LabelMismatch, "primitive " + std::to_string(p) + " references unknown rule " +
                                                std::to_string(placed.rule));
        continue;
      }
      const ScenarioRule& rule = (*rules)[static_cast<std::size_t>(placed.rule)];
      overrides = rule.params;
      domain_region = rule.region;
      expected_color = rule.color;
      expected_kind = rule.kind;
    }
    if (kind != expected_kind) {
      f.add(ViolationKind::LabelMismatch, "primitive " + std::to_string(p) + " is a " +
                                              std::string(to_string(kind)) + ", expected " +
                                              std::string(to_string(expected_kind)));
    }
    if (!(placed.color == expected_color)) {
      f.add(ViolationKind::LabelMismatch, "primitive " + std::to_string(p) + " has an unexpected color");
    }

    // Parameter bounds.
    if (const auto* line = std::get_if<LinePrimitive>(&placed.primitive)) {
      check_curve_bounds(line->curve, overrides.apply(c.line), p, f);
    } else if (const auto* dashed = std::get_if<DashedLinePrimitive>(&placed.primitive)) {
      check_curve_bounds(dashed->curve, overrides.apply(c.line), p, f);
      if (!(dashed->dash == overrides.apply(c.dash))) {
        f.add(ViolationKind::Bounds, "primitive " + std::to_string(p) + ": dash pattern differs from the config");
      }
    } else {
      check_cluster_bounds(std::get<PointClusterPrimitive>(placed.primitive), overrides.apply(c.cluster),
                           c.stroke.point_radius, p, f);
    }

    // Containment, by direct pixel lookup of every governing vertex.
    std::set<int> regions;
    bool all_inside = true;
    for (const Point& v : governing_vertices(placed.primitive, c.limits.flatten_tolerance)) {
      const int x = pixel_index(v.x);
      const int y = pixel_index(v.y);
      if (!ctx.mask.inside(x, y)) {
        all_inside = false;
        continue;
      }
      if (ctx.partition) {
        regions.insert(ctx.partition->region_at(x, y));
      }
    }
    if (!all_inside) {
      f.add(ViolationKind::Containment, "primitive " + std::to_string(p) + " leaves the mask");
      continue;
    }
    if (label.family == Family::Region36) {
      if (regions.size() != 1) {
        f.add(ViolationKind::Containment,
              "primitive " + std::to_string(p) + " spans " + std::to_string(regions.size()) + " regions");
      } else if (*regions.begin() != label.region) {
        f.add(ViolationKind::RegionMismatch, "geometry lies in region " + std::to_string(*regions.begin()) +
                                                 ", label says region " + std::to_string(label.region));
      }
    } else if (domain_region && (regions.size() != 1 || *regions.begin() != *domain_region)) {
      f.add(ViolationKind::Containment,
            "primitive " + std::to_string(p) + " leaves rule region " + std::to_string(*domain_region));
    }
  }
  return f.take();
}

std::vector<Violation> check_entry(const CheckContext& ctx, const ManifestEntry& entry, std::size_t index) {
  std::vector<Violation> out;
  const fs::path file = ctx.root / entry.path;
  if (!fs::is_regular_file(file)) {
    out.push_back({index, ViolationKind::MissingFile, "missing image " + entry.path});
  } else {
    try {
      const Canvas image = read_png(file);
      if (image.width() != ctx.config.width || image.height() != ctx.config.height) {
        out.push_back({index, ViolationKind::DimensionMismatch,
                       entry.path + " is " + std::to_string(image.width()) + "x" + std::to_string(image.height())});
      }
    } catch (const IoError& e) {
      out.push_back({index, ViolationKind::CorruptFile, e.what()});
    }
  }
  auto geometry = check_geometry(ctx, entry, index);
  out.insert(out.end(), std::make_move_iterator(geometry.begin()), std::make_move_iterator(geometry.end()));
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) { return a.kind < b.kind; });
  return out;
}

std::vector<Violation> check_entries_serial(const CheckContext& ctx, std::span<const ManifestEntry> entries) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto found = check_entry(ctx, entries[i], i);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

std::vector<Violation> check_entries_parallel(const CheckContext& ctx, std::span<const ManifestEntry> entries,
                                              int jobs) {
  std::vector<std::vector<Violation>> per_entry(entries.size());
  std::vector<std::exception_ptr> errors(entries.size());
  const auto n = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      per_entry[k] = check_entry(ctx, entries[k], k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
  std::vector<Violation> out;
  for (auto& found : per_entry) {
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

namespace {

// "<split>/<class>/<index>.png" -> "<class>"; falls back to the label.
std::string class_dir_of(const ManifestEntry& e) {
  const fs::path p(e.path);
  const fs::path parent = p.parent_path();
  if (!parent.empty() && !parent.parent_path().empty()) {
    return parent.filename().string();
  }
  return e.label.class_name();
}

}  // namespace

ValidationReport validate_dataset(const fs::path& dir, int jobs) {
  if (!fs::is_directory(dir)) {
    throw IoError("dataset directory " + dir.string() + " does not exist");
  }
  ValidationReport report;
  const bool partial = fs::exists(dir / kPartialMarkerName);
  if (partial) {
    report.violations.push_back({std::nullopt, ViolationKind::PartialOutput, "partial-output marker present"});
    if (!fs::exists(dir / kManifestName)) {
      return report;
    }
  }

  const Manifest manifest = read_manifest(dir / kManifestName);
  const auto dataset_level = [&report](ViolationKind kind, std::string message) {
    report.violations.push_back({std::nullopt, kind, std::move(message)});
  };

  if (sha256_hex(manifest.config.dump()) != manifest.config_digest) {
    dataset_level(ViolationKind::DigestMismatch, "config digest does not match the recorded config");
  }
  const CheckContext ctx = make_check_context(manifest, dir);
  if (ctx.config.family != manifest.family) {
    dataset_level(ViolationKind::DigestMismatch, "config family differs from the manifest family");
  }
  if (ctx.config.mask_file &&
      sha256_hex(read_file(*ctx.config.mask_file)) != manifest.config.at("mask").value("sha256", "")) {
    dataset_level(ViolationKind::DigestMismatch, std::string(kMaskCopyName) + " differs from the recorded mask");
  }
  if (ctx.config.region_map_file &&
      sha256_hex(read_file(*ctx.config.region_map_file)) != manifest.config.at("partition").value("sha256", "")) {
    dataset_level(ViolationKind::DigestMismatch,
                  std::string(kRegionMapCopyName) + " differs from the recorded region map");
  }

  // Balance is counted from the class directories, which is what a
  // folder-per-class loader sees. A wrong label is caught by the geometry checks.
  std::set<std::string> seen;
  std::map<std::pair<std::string, Split>, int> counts;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    if (!seen.insert(e.path).second) {
      report.violations.push_back({i, ViolationKind::DuplicatePath, "duplicate path " + e.path});
    }
    ++counts[{class_dir_of(e), e.split}];
  }
  for (const ClassLabel& label : enumerate_labels(manifest.family)) {
    for (const auto& [split, expected] :
         {std::pair{Split::Train, manifest.train_per_class}, std::pair{Split::Test, manifest.test_per_class}}) {
      const int got = counts[{label.class_name(), split}];
      if (got != expected) {
        dataset_level(ViolationKind::Balance, "class " + label.class_name() + " has " + std::to_string(got) + " " +
                                                  std::string(to_string(split)) + " entries, expected " +
                                                  std::to_string(expected));
      }
    }
  }

  auto found = jobs > 1 ? check_entries_parallel(ctx, manifest.entries, jobs)
                        : check_entries_serial(ctx, manifest.entries);
  report.violations.insert(report.violations.end(), std::make_move_iterator(found.begin()),
                           std::make_move_iterator(found.end()));
  report.entries_checked = manifest.entries.size();
  return report;
}

}  // namespace bms
