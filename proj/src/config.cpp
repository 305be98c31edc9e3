#include "bodymap_synth/config.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "bodymap_synth/error.hpp"
#include "json_util.hpp"

namespace bms {

using nlohmann::json;
using detail::expect_keys;
using detail::get_as;
using detail::read_if_present;

DatasetConfig default_config(Family family) {
  DatasetConfig config;
  config.family = family;
  if (family == Family::Diagnosis5) {
    config.per_class_train = kDefaultDiagnosisTrain;
    config.per_class_test = kDefaultDiagnosisTest;
  }
  return config;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * size);
  for (unsigned int i = 0; i < size; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_hex(std::string_view text) {
  return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

SampleDomain BuildContext::domain(std::optional<int> region) const {
  if (!region) {
    return SampleDomain::whole(mask);
  }
  if (!partition) {
    throw ConfigError("region-constrained generation needs a region partition");
  }
  return SampleDomain::region(mask, *partition, *region);
}

namespace {

void check_config(const DatasetConfig& c) {
  if (c.per_class_train < 0 || c.per_class_test < 0) {
    throw ConfigError("per-class image counts must be non-negative");
  }
  if (c.width < 1 || c.height < 1 || c.width > 16384 || c.height > 16384) {
    throw ConfigError("canvas size must be between 1x1 and 16384x16384");
  }
  if (c.grid_rows * c.grid_cols != kRegionCount || c.grid_rows < 1) {
    throw ConfigError("partition grid " + std::to_string(c.grid_rows) + "x" + std::to_string(c.grid_cols) +
                      " does not have 12 cells");
  }
  check_params(c.line);
  check_params(c.cluster);
  check_params(c.dash);
  if (!(c.stroke.width >= 1.0) || !(c.stroke.point_radius >= 1.0)) {
    throw ConfigError("stroke width and point radius must be at least 1 px");
  }
  if (c.limits.max_retries < 1 || c.limits.max_point_tries < 1 || !(c.limits.flatten_tolerance > 0.0)) {
    throw ConfigError("retry limits must be >= 1 and the flattening tolerance positive");
  }
}

std::string file_digest(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

json stroke_json(const StrokeStyle& s) {
  return {{"width", s.width}, {"point_radius", s.point_radius}, {"color", detail::color_json(s.color)}};
}

json canonical_json(const DatasetConfig& c, const std::optional<ScenarioSpec>& scenario) {
  json doc;
  doc["family"] = std::string(to_string(c.family));
  doc["master_seed"] = c.master_seed;
  doc["per_class_train"] = c.per_class_train;
  doc["per_class_test"] = c.per_class_test;
  doc["canvas"] = {{"width", c.width}, {"height", c.height}};
  doc["mask"] = c.mask_file ? json{{"source", "file"}, {"sha256", file_digest(*c.mask_file)}}
                            : json{{"source", "rect"}, {"margin", c.margin}};
  doc["partition"] = c.region_map_file ? json{{"source", "file"}, {"sha256", file_digest(*c.region_map_file)}}
                                       : json{{"source", "grid"}, {"rows", c.grid_rows}, {"cols", c.grid_cols}};
  doc["line"] = {{"endpoint_radius", c.line.endpoint_radius}, {"control_deviation", c.line.control_deviation}};
  doc["cluster"] = {{"n_min", c.cluster.n_min}, {"n_max", c.cluster.n_max}, {"step_radius", c.cluster.step_radius}};
  doc["dash"] = {{"on", c.dash.on_length}, {"off", c.dash.off_length}};
  doc["stroke"] = stroke_json(c.stroke);
  doc["background"] = c.template_file
                          ? json{{"source", "file"}, {"sha256", file_digest(*c.template_file)}}
                          : json{{"source", "color"}, {"color", detail::color_json(c.background)}};
  doc["scenario"] = scenario ? scenario_to_json(*scenario) : json(nullptr);
  doc["limits"] = {{"max_retries", c.limits.max_retries},
                   {"max_point_tries", c.limits.max_point_tries},
                   {"flatten_tolerance", c.limits.flatten_tolerance}};
  return doc;
}

void check_scenario(const ScenarioSpec& scenario, const DatasetConfig& c) {
  for (const Diagnosis d : kAllDiagnoses) {
    const auto& rules = scenario.rules_for(d);
    if (rules.empty()) {
      throw ConfigError("scenario diagnosis '" + std::string(to_string(d)) + "' has no rules");
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const ScenarioRule& r = rules[i];
      try {
        if (r.region && (*r.region < 0 || *r.region >= kRegionCount)) {
          throw ConfigError("region out of range");
        }
        if (r.count_min < 0 || r.count_min > r.count_max) {
          throw ConfigError("empty count range");
        }
        check_params(r.params.apply(c.line));
        check_params(r.params.apply(c.cluster));
        check_params(r.params.apply(c.dash));
      } catch (const ConfigError& e) {
        throw ConfigError("scenario diagnosis '" + std::string(to_string(d)) + "' rule " + std::to_string(i) + ": " +
                          e.what());
      }
    }
  }
}

}  // namespace

BuildContext make_context(const DatasetConfig& config) {
  check_config(config);

  BodyMask mask = config.mask_file ? load_mask(*config.mask_file)
                                   : default_mask(config.width, config.height, config.margin);
  if (mask.width() != config.width || mask.height() != config.height) {
    throw ConfigError("mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                      " but the canvas is " + std::to_string(config.width) + "x" + std::to_string(config.height));
  }

  std::optional<RegionPartition> partition;
  if (config.family != Family::Basic3) {
    partition = config.region_map_file ? load_partition(mask, *config.region_map_file)
                                       : build_partition(mask, config.grid_rows, config.grid_cols);
  }

  std::optional<ScenarioSpec> scenario;
  if (config.family == Family::Diagnosis5) {
    scenario = config.scenario ? *config.scenario
                               : config.scenario_file ? load_scenario(*config.scenario_file) : default_scenario();
    check_scenario(*scenario, config);
  }

  Canvas background = config.template_file ? read_png(*config.template_file)
                                           : Canvas(config.width, config.height, config.background);
  if (background.width() != config.width || background.height() != config.height) {
    throw ConfigError("template is " + std::to_string(background.width()) + "x" +
                      std::to_string(background.height()) + " but the canvas is " + std::to_string(config.width) +
                      "x" + std::to_string(config.height));
  }

  json canonical = canonical_json(config, scenario);
  std::string digest = sha256_hex(canonical.dump());
  return BuildContext{config,
                      std::move(mask),
                      std::move(partition),
                      std::move(scenario),
                      std::move(background),
                      std::move(canonical),
                      std::move(digest)};
}

DatasetConfig config_from_canonical(const json& doc, const std::filesystem::path& root) {
  const std::string where = "manifest config";
  expect_keys(doc, {"family", "master_seed", "per_class_train", "per_class_test", "canvas", "mask", "partition",
                    "line", "cluster", "dash", "stroke", "background", "scenario", "limits"},
              where);
  DatasetConfig c;
  c.family = parse_family(get_as<std::string>(doc, "family", where));
  c.master_seed = get_as<std::uint64_t>(doc, "master_seed", where);
  c.per_class_train = get_as<int>(doc, "per_class_train", where);
  c.per_class_test = get_as<int>(doc, "per_class_test", where);

  const json& canvas = doc.at("canvas");
  c.width = get_as<int>(canvas, "width", where);
  c.height = get_as<int>(canvas, "height", where);

  const json& mask = doc.at("mask");
  if (get_as<std::string>(mask, "source", where) == "file") {
    c.mask_file = root / kMaskCopyName;
  } else {
    c.margin = get_as<int>(mask, "margin", where);
  }
  const json& partition = doc.at("partition");
  if (get_as<std::string>(partition, "source", where) == "file") {
    c.region_map_file = root / kRegionMapCopyName;
  } else {
    c.grid_rows = get_as<int>(partition, "rows", where);
    c.grid_cols = get_as<int>(partition, "cols", where);
  }

  const json& line = doc.at("line");
  c.line.endpoint_radius = get_as<double>(line, "endpoint_radius", where);
  c.line.control_deviation = get_as<double>(line, "control_deviation", where);
  const json& cluster = doc.at("cluster");
  c.cluster.n_min = get_as<int>(cluster, "n_min", where);
  c.cluster.n_max = get_as<int>(cluster, "n_max", where);
  c.cluster.step_radius = get_as<double>(cluster, "step_radius", where);
  const json& dash = doc.at("dash");
  c.dash.on_length = get_as<double>(dash, "on", where);
  c.dash.off_length = get_as<double>(dash, "off", where);
  const json& stroke = doc.at("stroke");
  c.stroke.width = get_as<double>(stroke, "width", where);
  c.stroke.point_radius = get_as<double>(stroke, "point_radius", where);
  c.stroke.color = detail::parse_color(stroke.at("color"), where);

  const json& background = doc.at("background");
  if (get_as<std::string>(background, "source", where) == "color") {
    c.background = detail::parse_color(background.at("color"), where);
  }
  if (!doc.at("scenario").is_null()) {
    c.scenario = parse_scenario(doc.at("scenario"));
  }
  const json& limits = doc.at("limits");
  c.limits.max_retries = get_as<int>(limits, "max_retries", where);
  c.limits.max_point_tries = get_as<int>(limits, "max_point_tries", where);
  c.limits.flatten_tolerance = get_as<double>(limits, "flatten_tolerance", where);
  return c;
}

ConfigFileExtras apply_config_json(const json& doc, DatasetConfig& c, const std::filesystem::path& base_dir) {
  const std::string where = "config file";
  expect_keys(doc,
              {"family", "out", "jobs", "seed", "per_class_train", "per_class_test", "width", "height", "margin",
               "mask", "region_map", "grid", "template", "scenario", "line", "cluster", "dash", "stroke",
               "background", "limits"},
              where);
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  if (doc.contains("family") && parse_family(get_as<std::string>(doc, "family", where)) != c.family) {
    throw ConfigError("config file family '" + doc.at("family").get<std::string>() +
                      "' does not match the requested family '" + std::string(to_string(c.family)) + "'");
  }
  ConfigFileExtras extras;
  if (doc.contains("out")) {
    extras.out = resolve(get_as<std::string>(doc, "out", where));
  }
  if (doc.contains("jobs")) {
    extras.jobs = get_as<int>(doc, "jobs", where);
  }
  read_if_present(doc, "seed", c.master_seed, where);
  read_if_present(doc, "per_class_train", c.per_class_train, where);
  read_if_present(doc, "per_class_test", c.per_class_test, where);
  read_if_present(doc, "width", c.width, where);
  read_if_present(doc, "height", c.height, where);
  read_if_present(doc, "margin", c.margin, where);
  if (doc.contains("mask")) {
    c.mask_file = resolve(get_as<std::string>(doc, "mask", where));
  }
  if (doc.contains("region_map")) {
    c.region_map_file = resolve(get_as<std::string>(doc, "region_map", where));
  }
  if (doc.contains("template")) {
    c.template_file = resolve(get_as<std::string>(doc, "template", where));
  }
  if (doc.contains("grid")) {
    const json& grid = doc.at("grid");
    if (!grid.is_array() || grid.size() != 2 || !grid[0].is_number_integer() || !grid[1].is_number_integer()) {
      throw ConfigError(where + ": grid must be [rows, cols]");
    }
    c.grid_rows = grid[0].get<int>();
    c.grid_cols = grid[1].get<int>();
  }
  if (doc.contains("scenario")) {
    const json& scenario = doc.at("scenario");
    if (scenario.is_string()) {
      c.scenario_file = resolve(scenario.get<std::string>());
      c.scenario.reset();
    } else {
      c.scenario = parse_scenario(scenario);
    }
  }
  if (doc.contains("line")) {
    const json& line = doc.at("line");
    expect_keys(line, {"endpoint_radius", "control_deviation"}, where + ".line");
    read_if_present(line, "endpoint_radius", c.line.endpoint_radius, where);
    read_if_present(line, "control_deviation", c.line.control_deviation, where);
  }
  if (doc.contains("cluster")) {
    const json& cluster = doc.at("cluster");
    expect_keys(cluster, {"n_min", "n_max", "step_radius"}, where + ".cluster");
    read_if_present(cluster, "n_min", c.cluster.n_min, where);
    read_if_present(cluster, "n_max", c.cluster.n_max, where);
    read_if_present(cluster, "step_radius", c.cluster.step_radius, where);
  }
  if (doc.contains("dash")) {
    const json& dash = doc.at("dash");
    expect_keys(dash, {"on", "off"}, where + ".dash");
    read_if_present(dash, "on", c.dash.on_length, where);
    read_if_present(dash, "off", c.dash.off_length, where);
  }
  if (doc.contains("stroke")) {
    const json& stroke = doc.at("stroke");
    expect_keys(stroke, {"width", "point_radius", "color"}, where + ".stroke");
    read_if_present(stroke, "width", c.stroke.width, where);
    read_if_present(stroke, "point_radius", c.stroke.point_radius, where);
    if (stroke.contains("color")) {
      c.stroke.color = detail::parse_color(stroke.at("color"), where + ".stroke");
    }
  }
  if (doc.contains("background")) {
    c.background = detail::parse_color(doc.at("background"), where + ".background");
  }
  if (doc.contains("limits")) {
    const json& limits = doc.at("limits");
    expect_keys(limits, {"max_retries", "max_point_tries", "flatten_tolerance"}, where + ".limits");
    read_if_present(limits, "max_retries", c.limits.max_retries, where);
    read_if_present(limits, "max_point_tries", c.limits.max_point_tries, where);
    read_if_present(limits, "flatten_tolerance", c.limits.flatten_tolerance, where);
  }
  return extras;
}

}  // namespace bms
