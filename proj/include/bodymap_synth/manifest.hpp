#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bodymap_synth/labels.hpp"
#include "bodymap_synth/primitives.hpp"
#include "bodymap_synth/style.hpp"

namespace bms {

/// A generated primitive together with how it was drawn.
struct PlacedPrimitive {
  Primitive primitive;
  Rgba color = kBlack;
  int rule = -1;  // scenario rule index (diagnoses only)

  friend bool operator==(const PlacedPrimitive&, const PlacedPrimitive&) = default;
};

struct ManifestEntry {
  std::string path;  // relative to the dataset root, '/'-separated
  ClassLabel label;
  Split split = Split::Train;
  int index = 0;
  std::vector<PlacedPrimitive> geometry;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kPartialMarkerName = ".partial";

/// manifest.json:
///   {version, family, config_digest, master_seed,
///    counts: {train_per_class, test_per_class}, config: <canonical config>,
///    entries: [{path, label, split, index, geometry: [...]}]}
/// Numbers are written in shortest round-trip form, so stored geometry reads
/// back bit-identical.
struct Manifest {
  int version = kManifestVersion;
  Family family = Family::Basic3;
  std::string config_digest;
  std::uint64_t master_seed = 0;
  int train_per_class = 0;
  int test_per_class = 0;
  nlohmann::json config;
  std::vector<ManifestEntry> entries;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

nlohmann::json primitive_to_json(const PlacedPrimitive& placed);
nlohmann::json label_to_json(const ClassLabel& label);
nlohmann::json manifest_to_json(const Manifest& manifest);

/// Throws IoError on structurally invalid documents.
Manifest manifest_from_json(const nlohmann::json& doc);

/// Two-space indented JSON followed by a newline.
std::string serialize_manifest(const Manifest& manifest);
void write_manifest(const std::filesystem::path& file, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& file);

}  // namespace bms
