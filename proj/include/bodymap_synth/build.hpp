#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bodymap_synth/config.hpp"
#include "bodymap_synth/labels.hpp"
#include "bodymap_synth/manifest.hpp"
#include "bodymap_synth/raster.hpp"

namespace bms {

/// One image to generate. Each item owns its random stream, derived from
/// "<family>/<class>/<split>/<index>", so items can run in any order.
struct WorkItem {
  ClassLabel label;
  Split split = Split::Train;
  int index = 0;

  std::string stream_label() const;
  /// "<split>/<class>/<index:05>.png"
  std::string relative_path() const;
};

/// Items in manifest order: class (canonical label order), then split
/// (train before test), then index.
std::vector<WorkItem> plan_work(const DatasetConfig& config);

struct RenderedImage {
  ManifestEntry entry;
  Canvas image;
};

/// Pure function of (context, item). Throws GenerationFailed carrying the class,
/// split and index on failure.
RenderedImage build_image(const BuildContext& context, const WorkItem& item);

using ImageSink = std::function<void(const RenderedImage&)>;

/// Reference implementation: items in order on the calling thread.
std::vector<ManifestEntry> build_entries_serial(const BuildContext& context, std::span<const WorkItem> items,
                                                const ImageSink& sink);

/// OpenMP work-sharing over items with `jobs` threads. The sink is called from
/// worker threads. Output (and the error reported, if any) is identical to the
/// serial version: entries come back in item order and the failing item with
/// the lowest index wins.
std::vector<ManifestEntry> build_entries_parallel(const BuildContext& context, std::span<const WorkItem> items,
                                                  int jobs, const ImageSink& sink);

Manifest make_manifest(const BuildContext& context, std::vector<ManifestEntry> entries);

/// Writes images, mask/region-map copies and manifest.json under `out`.
/// While running, `out/.partial` exists; on failure every written file is
/// removed again except that marker. `out` must be absent, empty, or a
/// previous output of this tool.
Manifest generate_dataset(const BuildContext& context, const std::filesystem::path& out, int jobs = 1);

/// First `train_per_class` / `test_per_class` entries (by image index) of
/// every class. Throws ConfigError if a class has fewer entries.
Manifest extract_subset(const Manifest& manifest, int train_per_class, int test_per_class);

/// extract_subset on a dataset directory, copying the referenced images (and
/// mask/region-map copies) into `out`.
Manifest subset_dataset(const std::filesystem::path& in, const std::filesystem::path& out, int train_per_class,
                        int test_per_class);

/// Partition visualisation: region r painted with partition_palette(r),
/// everything outside the mask white.
Canvas partition_image(const RegionPartition& partition);
Rgba partition_palette(int region) noexcept;

/// Region-map encoding of a partition (gray level 10 + 20 r, black outside).
Canvas region_map_image(const RegionPartition& partition);

}  // namespace bms
