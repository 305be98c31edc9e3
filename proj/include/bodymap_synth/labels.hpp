#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "bodymap_synth/primitives.hpp"

namespace bms {

enum class Family { Basic3, Region36, Diagnosis5 };

enum class Diagnosis {
  PelvicContusion,
  AtrophyHypertrophyForelimb,
  AtrophyHypertrophyHindlimb,
  LowBloodPressure,
  HighBloodPressure,
};

inline constexpr std::array<Diagnosis, 5> kAllDiagnoses{
    Diagnosis::PelvicContusion, Diagnosis::AtrophyHypertrophyForelimb, Diagnosis::AtrophyHypertrophyHindlimb,
    Diagnosis::LowBloodPressure, Diagnosis::HighBloodPressure};

enum class Split { Train, Test };

// Names: basic3 / regions36 / diagnoses; pelvic_contusion, ...; train / test.
std::string_view to_string(Family family) noexcept;
std::string_view to_string(Diagnosis diagnosis) noexcept;
std::string_view to_string(Split split) noexcept;
Family parse_family(std::string_view name);
Diagnosis parse_diagnosis(std::string_view name);
Split parse_split(std::string_view name);

struct ClassLabel {
  Family family = Family::Basic3;
  PrimitiveKind kind = PrimitiveKind::Line;  // Basic3, Region36
  int region = -1;                           // Region36
  Diagnosis diagnosis = Diagnosis::PelvicContusion;  // Diagnosis5

  static ClassLabel basic(PrimitiveKind kind) noexcept { return {Family::Basic3, kind, -1, {}}; }
  static ClassLabel regional(PrimitiveKind kind, int region) noexcept { return {Family::Region36, kind, region, {}}; }
  static ClassLabel diagnosis_label(Diagnosis d) noexcept { return {Family::Diagnosis5, {}, -1, d}; }

  /// Directory name: "line", "r07_point_cluster", "pelvic_contusion", ...
  std::string class_name() const;

  friend bool operator==(const ClassLabel& a, const ClassLabel& b) noexcept;
};

/// All labels of a family in canonical order (3, 36 or 5 entries).
/// Region36 order is region-major: r00_line, r00_dashed_line, r00_point_cluster, r01_line, ...
std::vector<ClassLabel> enumerate_labels(Family family);

}  // namespace bms
