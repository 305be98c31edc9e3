#include "bodymap_synth/scenario.hpp"

#include <fstream>
#include <string>

#include "bodymap_synth/bodymap.hpp"
#include "bodymap_synth/error.hpp"
#include "json_util.hpp"

namespace bms {

using nlohmann::json;
using detail::expect_keys;
using detail::get_as;

LineParams ParamOverrides::apply(LineParams base) const noexcept {
  base.endpoint_radius = endpoint_radius.value_or(base.endpoint_radius);
  base.control_deviation = control_deviation.value_or(base.control_deviation);
  return base;
}

ClusterParams ParamOverrides::apply(ClusterParams base) const noexcept {
  base.n_min = n_min.value_or(base.n_min);
  base.n_max = n_max.value_or(base.n_max);
  base.step_radius = step_radius.value_or(base.step_radius);
  return base;
}

DashPattern ParamOverrides::apply(DashPattern base) const noexcept {
  base.on_length = dash_on.value_or(base.on_length);
  base.off_length = dash_off.value_or(base.off_length);
  return base;
}

ScenarioSpec default_scenario() {
  constexpr Rgba kRed{255, 0, 0, 255};
  constexpr Rgba kBlue{0, 0, 255, 255};
  constexpr Rgba kGreen{0, 160, 0, 255};
  constexpr Rgba kOrange{255, 140, 0, 255};

  ScenarioSpec s;
  const auto set = [&s](Diagnosis d, ScenarioRule rule) { s.rules[static_cast<std::size_t>(d)] = {rule}; };
  set(Diagnosis::PelvicContusion, {PrimitiveKind::PointCluster, kPelvicRegion, kRed, 1, 3, {}});
  set(Diagnosis::AtrophyHypertrophyForelimb, {PrimitiveKind::Line, kForelimbRegion, kBlue, 1, 2, {}});
  set(Diagnosis::AtrophyHypertrophyHindlimb, {PrimitiveKind::Line, kHindlimbRegion, kBlue, 1, 2, {}});
  set(Diagnosis::LowBloodPressure, {PrimitiveKind::DashedLine, kTorsoRegion, kGreen, 1, 2, {}});
  set(Diagnosis::HighBloodPressure, {PrimitiveKind::DashedLine, kTorsoRegion, kOrange, 1, 2, {}});
  return s;
}

namespace {

ParamOverrides parse_overrides(const json& obj, const std::string& where) {
  expect_keys(obj, {"endpoint_radius", "control_deviation", "n_min", "n_max", "step_radius", "dash_on", "dash_off"},
              where);
  ParamOverrides p;
  const auto opt_double = [&](std::string_view key, std::optional<double>& target) {
    if (obj.contains(key)) {
      target = get_as<double>(obj, key, where);
    }
  };
  const auto opt_int = [&](std::string_view key, std::optional<int>& target) {
    if (obj.contains(key)) {
      target = get_as<int>(obj, key, where);
    }
  };
  opt_double("endpoint_radius", p.endpoint_radius);
  opt_double("control_deviation", p.control_deviation);
  opt_int("n_min", p.n_min);
  opt_int("n_max", p.n_max);
  opt_double("step_radius", p.step_radius);
  opt_double("dash_on", p.dash_on);
  opt_double("dash_off", p.dash_off);
  return p;
}

ScenarioRule parse_rule(const json& obj, const std::string& where) {
  expect_keys(obj, {"kind", "region", "color", "count", "params", "note"}, where);
  ScenarioRule rule;
  rule.kind = parse_primitive_kind(get_as<std::string>(obj, "kind", where));

  const auto region = obj.find("region");
  if (region == obj.end() || (region->is_string() && region->get<std::string>() == "any")) {
    rule.region.reset();
  } else if (region->is_number_integer()) {
    const int id = region->get<int>();
    if (id < 0 || id >= kRegionCount) {
      throw ConfigError(where + ": region " + std::to_string(id) + " out of range 0..11");
    }
    rule.region = id;
  } else {
    throw ConfigError(where + ": region must be an integer 0..11 or \"any\"");
  }

  if (obj.contains("color")) {
    rule.color = detail::parse_color(obj.at("color"), where);
  }

  const json count = obj.contains("count") ? obj.at("count") : json::array({1, 1});
  if (!count.is_array() || count.size() != 2 || !count[0].is_number_integer() || !count[1].is_number_integer()) {
    throw ConfigError(where + ": count must be [min, max]");
  }
  rule.count_min = count[0].get<int>();
  rule.count_max = count[1].get<int>();
  if (rule.count_min < 0 || rule.count_min > rule.count_max) {
    throw ConfigError(where + ": count range must satisfy 0 <= min <= max");
  }

  if (obj.contains("params")) {
    rule.params = parse_overrides(obj.at("params"), where + ".params");
  }
  return rule;
}

}  // namespace

ScenarioSpec parse_scenario(const json& doc) {
  expect_keys(doc, {"version", "note", "diagnoses"}, "scenario");
  if (doc.contains("version") && doc.at("version") != 1) {
    throw ConfigError("scenario: unsupported version");
  }
  const json& diagnoses = doc.contains("diagnoses") ? doc.at("diagnoses") : json::object();
  detail::require_object(diagnoses, "scenario.diagnoses");
  for (const auto& [name, value] : diagnoses.items()) {
    parse_diagnosis(name);  // rejects unknown diagnoses
  }

  ScenarioSpec spec;
  for (const Diagnosis d : kAllDiagnoses) {
    const std::string where = "scenario diagnosis '" + std::string(to_string(d)) + "'";
    const auto it = diagnoses.find(to_string(d));
    if (it == diagnoses.end() || !it->is_array() || it->empty()) {
      throw ConfigError(where + ": needs at least one rule");
    }
    auto& rules = spec.rules[static_cast<std::size_t>(d)];
    for (std::size_t i = 0; i < it->size(); ++i) {
      rules.push_back(parse_rule((*it)[i], where + " rule " + std::to_string(i)));
    }
  }
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw IoError("cannot open scenario file " + file.string());
  }
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

json scenario_to_json(const ScenarioSpec& scenario) {
  json diagnoses = json::object();
  for (const Diagnosis d : kAllDiagnoses) {
    json rules = json::array();
    for (const ScenarioRule& rule : scenario.rules_for(d)) {
      json r = {{"kind", to_string(rule.kind)},
                {"color", detail::color_json(rule.color)},
                {"count", json::array({rule.count_min, rule.count_max})}};
      r["region"] = rule.region ? json(*rule.region) : json("any");
      json params = json::object();
      const ParamOverrides& p = rule.params;
      if (p.endpoint_radius) params["endpoint_radius"] = *p.endpoint_radius;
      if (p.control_deviation) params["control_deviation"] = *p.control_deviation;
      if (p.n_min) params["n_min"] = *p.n_min;
      if (p.n_max) params["n_max"] = *p.n_max;
      if (p.step_radius) params["step_radius"] = *p.step_radius;
      if (p.dash_on) params["dash_on"] = *p.dash_on;
      if (p.dash_off) params["dash_off"] = *p.dash_off;
      if (!params.empty()) {
        r["params"] = params;
      }
      rules.push_back(std::move(r));
    }
    diagnoses[std::string(to_string(d))] = std::move(rules);
  }
  return json{{"version", 1}, {"diagnoses", diagnoses}};
}

}  // namespace bms
