#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"

#include "bodymap_synth/bodymap.hpp"
#include "bodymap_synth/labels.hpp"
#include "bodymap_synth/primitives.hpp"
#include "bodymap_synth/raster.hpp"
#include "bodymap_synth/scenario.hpp"
#include "bodymap_synth/style.hpp"

namespace bms {

/// Default image counts per class. The diagnoses family mirrors the 50 train /
/// 10 test maps per diagnosis of the evaluation set.
inline constexpr int kDefaultSyntheticTrain = 1000;
inline constexpr int kDefaultSyntheticTest = 100;
inline constexpr int kDefaultDiagnosisTrain = 50;
inline constexpr int kDefaultDiagnosisTest = 10;

struct DatasetConfig {
  Family family = Family::Basic3;
  std::uint64_t master_seed = 0;
  int per_class_train = kDefaultSyntheticTrain;
  int per_class_test = kDefaultSyntheticTest;

  int width = kDefaultWidth;
  int height = kDefaultHeight;
  int margin = kDefaultMargin;  // used only without mask_file
  std::optional<std::filesystem::path> mask_file;
  std::optional<std::filesystem::path> region_map_file;  // overrides the grid
  int grid_rows = kDefaultGridRows;
  int grid_cols = kDefaultGridCols;

  LineParams line;
  ClusterParams cluster;
  DashPattern dash;
  StrokeStyle stroke;
  Rgba background = kWhite;  // used only without template_file
  std::optional<std::filesystem::path> template_file;

  // Diagnosis5 only: inline scenario wins over scenario_file, which wins over
  // the built-in default.
  std::optional<ScenarioSpec> scenario;
  std::optional<std::filesystem::path> scenario_file;

  GenerationLimits limits;
};

DatasetConfig default_config(Family family);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

/// Everything needed to generate (or check) images: the config with every
/// external file loaded, plus its canonical JSON and digest.
///
/// The canonical JSON replaces file paths by the SHA-256 of the file contents,
/// so the digest identifies what was generated, not where inputs lived. The
/// digest is the lowercase hex SHA-256 of canonical.dump() (compact, keys in
/// lexicographic order, shortest round-trip number formatting).
struct BuildContext {
  DatasetConfig config;
  BodyMask mask;
  std::optional<RegionPartition> partition;
  std::optional<ScenarioSpec> scenario;
  Canvas background;
  nlohmann::json canonical;
  std::string digest;

  SampleDomain domain(std::optional<int> region) const;
};

/// Validates the config and loads mask, region map, template and scenario.
/// Throws ConfigError / IoError.
BuildContext make_context(const DatasetConfig& config);

/// Inverse of the canonical form, for reading manifests back. File-backed
/// inputs are taken from `dataset_root` ("mask.png", "regions.png"); the
/// template, which checking does not need, is dropped.
DatasetConfig config_from_canonical(const nlohmann::json& canonical, const std::filesystem::path& dataset_root);

inline constexpr const char* kMaskCopyName = "mask.png";
inline constexpr const char* kRegionMapCopyName = "regions.png";

struct ConfigFileExtras {
  std::optional<std::filesystem::path> out;
  std::optional<int> jobs;
};

/// Applies a JSON config file (the CLI's --config) onto `config`. Unknown keys
/// are rejected; relative paths resolve against `base_dir`. Returns the "out"
/// and "jobs" entries when present.
ConfigFileExtras apply_config_json(const nlohmann::json& doc, DatasetConfig& config,
                                   const std::filesystem::path& base_dir = {});

}  // namespace bms
