#include "bodymap_synth/labels.hpp"

#include <cstdio>

#include "bodymap_synth/error.hpp"

namespace bms {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Basic3:
      return "basic3";
    case Family::Region36:
      return "regions36";
    case Family::Diagnosis5:
      return "diagnoses";
  }
  return "unknown";
}

std::string_view to_string(Diagnosis diagnosis) noexcept {
  switch (diagnosis) {
    case Diagnosis::PelvicContusion:
      return "pelvic_contusion";
    case Diagnosis::AtrophyHypertrophyForelimb:
      return "atrophy_hypertrophy_forelimb";
    case Diagnosis::AtrophyHypertrophyHindlimb:
      return "atrophy_hypertrophy_hindlimb";
    case Diagnosis::LowBloodPressure:
      return "low_blood_pressure";
    case Diagnosis::HighBloodPressure:
      return "high_blood_pressure";
  }
  return "unknown";
}

std::string_view to_string(Split split) noexcept { return split == Split::Train ? "train" : "test"; }

Family parse_family(std::string_view name) {
  for (const Family f : {Family::Basic3, Family::Region36, Family::Diagnosis5}) {
    if (to_string(f) == name) {
      return f;
    }
  }
  throw ConfigError("unknown dataset family '" + std::string(name) + "' (expected basic3, regions36 or diagnoses)");
}

Diagnosis parse_diagnosis(std::string_view name) {
  for (const Diagnosis d : kAllDiagnoses) {
    if (to_string(d) == name) {
      return d;
    }
  }
  throw ConfigError("unknown diagnosis '" + std::string(name) + "'");
}

Split parse_split(std::string_view name) {
  if (name == "train") {
    return Split::Train;
  }
  if (name == "test") {
    return Split::Test;
  }
  throw ConfigError("unknown split '" + std::string(name) + "'");
}

std::string ClassLabel::class_name() const {
  switch (family) {
    case Family::Basic3:
      return std::string(to_string(kind));
    case Family::Region36: {
      char prefix[8];
      std::snprintf(prefix, sizeof prefix, "r%02d_", region);
      return prefix + std::string(to_string(kind));
    }
    case Family::Diagnosis5:
      return std::string(to_string(diagnosis));
  }
  return "unknown";
}

bool operator==(const ClassLabel& a, const ClassLabel& b) noexcept {
  if (a.family != b.family) {
    return false;
  }
  switch (a.family) {
    case Family::Basic3:
      return a.kind == b.kind;
    case Family::Region36:
      return a.kind == b.kind && a.region == b.region;
    case Family::Diagnosis5:
      return a.diagnosis == b.diagnosis;
  }
  return false;
}

std::vector<ClassLabel> enumerate_labels(Family family) {
  std::vector<ClassLabel> labels;
  switch (family) {
    case Family::Basic3:
      for (const PrimitiveKind kind : kAllPrimitiveKinds) {
        labels.push_back(ClassLabel::basic(kind));
      }
      break;
    case Family::Region36:
      for (int region = 0; region < kRegionCount; ++region) {
        for (const PrimitiveKind kind : kAllPrimitiveKinds) {
          labels.push_back(ClassLabel::regional(kind, region));
        }
      }
      break;
    case Family::Diagnosis5:
      for (const Diagnosis d : kAllDiagnoses) {
        labels.push_back(ClassLabel::diagnosis_label(d));
      }
      break;
  }
  return labels;
}

}  // namespace bms
