#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"

#include "bodymap_synth/labels.hpp"
#include "bodymap_synth/primitives.hpp"
#include "bodymap_synth/style.hpp"

namespace bms {

/// Optional per-rule parameter overrides. Unset fields fall back to the
/// dataset-wide defaults.
struct ParamOverrides {
  std::optional<double> endpoint_radius;
  std::optional<double> control_deviation;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::optional<double> step_radius;
  std::optional<double> dash_on;
  std::optional<double> dash_off;

  LineParams apply(LineParams base) const noexcept;
  ClusterParams apply(ClusterParams base) const noexcept;
  DashPattern apply(DashPattern base) const noexcept;

  friend bool operator==(const ParamOverrides&, const ParamOverrides&) = default;
};

/// One drawing rule: draw count_min..count_max primitives of `kind`, in
/// `region` (or anywhere on the mask), stroked in `color`.
struct ScenarioRule {
  PrimitiveKind kind = PrimitiveKind::Line;
  std::optional<int> region;
  Rgba color = kBlack;
  int count_min = 1;
  int count_max = 1;
  ParamOverrides params;

  friend bool operator==(const ScenarioRule&, const ScenarioRule&) = default;
};

/// Drawing rules per diagnosis, indexed by Diagnosis.
struct ScenarioSpec {
  std::array<std::vector<ScenarioRule>, kAllDiagnoses.size()> rules;

  const std::vector<ScenarioRule>& rules_for(Diagnosis d) const noexcept {
    return rules[static_cast<std::size_t>(d)];
  }

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// Region ids of the default 3x4 grid used by the built-in scenario
// (row 0 = top of the map, column 0 = head side).
inline constexpr int kTorsoRegion = 6;
inline constexpr int kPelvicRegion = 7;
inline constexpr int kForelimbRegion = 9;
inline constexpr int kHindlimbRegion = 11;

/// Built-in scenario. Only the pelvic-contusion rule (red point clusters over
/// the pelvis) reflects a documented encoding; the other four are placeholders
/// meant to be overridden with a scenario file.
ScenarioSpec default_scenario();

/// Throws ConfigError naming the diagnosis and rule index for any invalid rule
/// (unknown keys, bad region, empty count range, missing diagnosis...).
ScenarioSpec parse_scenario(const nlohmann::json& doc);
ScenarioSpec load_scenario(const std::filesystem::path& file);

/// Canonical JSON form (no comments; parse_scenario(to_json(s)) == s).
nlohmann::json scenario_to_json(const ScenarioSpec& scenario);

}  // namespace bms
