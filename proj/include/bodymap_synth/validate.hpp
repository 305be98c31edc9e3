#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bodymap_synth/config.hpp"
#include "bodymap_synth/manifest.hpp"

namespace bms {

enum class ViolationKind {
  PartialOutput,      // the partial-output marker is present
  DigestMismatch,     // config digest or input-file digest disagrees
  DuplicatePath,
  Balance,            // per-class counts differ from the manifest counts
  MissingFile,
  CorruptFile,        // image does not decode
  DimensionMismatch,  // image size differs from the config
  LabelMismatch,      // primitive kinds/rules inconsistent with the label
  Bounds,             // geometric parameter bounds broken
  Containment,        // a governing vertex leaves its domain
  RegionMismatch,     // recomputed region differs from the Region36 label
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  std::optional<std::size_t> entry;  // manifest entry index; empty for dataset-level findings
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::size_t entries_checked = 0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const noexcept;
};

/// Inputs for per-entry checks, reconstructed from a manifest.
struct CheckContext {
  DatasetConfig config;
  BodyMask mask;
  std::optional<RegionPartition> partition;
  std::optional<ScenarioSpec> scenario;
  std::filesystem::path root;
};

CheckContext make_check_context(const Manifest& manifest, const std::filesystem::path& root);

/// All findings for one entry, at most one per ViolationKind, in enum order.
std::vector<Violation> check_entry(const CheckContext& context, const ManifestEntry& entry, std::size_t index);

/// Geometry-only part of check_entry (no file access).
std::vector<Violation> check_geometry(const CheckContext& context, const ManifestEntry& entry, std::size_t index);

std::vector<Violation> check_entries_serial(const CheckContext& context, std::span<const ManifestEntry> entries);
/// OpenMP version; returns exactly what the serial version returns.
std::vector<Violation> check_entries_parallel(const CheckContext& context, std::span<const ManifestEntry> entries,
                                              int jobs);

/// Full dataset check: partial marker, manifest digest, input-file digests,
/// duplicate paths, class balance, then every entry. Throws IoError if the
/// directory or manifest is missing or unreadable (a partial marker without
/// manifest is reported as a violation instead).
ValidationReport validate_dataset(const std::filesystem::path& dir, int jobs = 1);

}  // namespace bms
