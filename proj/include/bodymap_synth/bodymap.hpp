#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "bodymap_synth/geometry.hpp"

namespace bms {

class Canvas;

/// Inclusive pixel rectangle.
struct PixelBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool empty() const noexcept { return x1 < x0 || y1 < y0; }
  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
};

/// Drawable area of the body map: one boolean per pixel.
class BodyMask {
public:
  /// Throws ConfigError if the raster is empty, has the wrong size, or has no inside pixel.
  BodyMask(int width, int height, std::vector<std::uint8_t> inside);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool inside(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_ &&
           inside_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  const PixelBox& bounds() const noexcept { return bounds_; }
  std::size_t inside_count() const noexcept { return inside_count_; }

  friend bool operator==(const BodyMask& a, const BodyMask& b) noexcept {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.inside_ == b.inside_;
  }

private:
  int width_;
  int height_;
  std::vector<std::uint8_t> inside_;
  PixelBox bounds_;
  std::size_t inside_count_ = 0;
};

inline constexpr int kDefaultWidth = 1000;
inline constexpr int kDefaultHeight = 800;
inline constexpr int kDefaultMargin = 40;

/// Rectangle inset by `margin` on every side. Requires width, height > 2*margin.
BodyMask default_mask(int width, int height, int margin);

/// Inside iff luminance > 127, where luminance = (299 R + 587 G + 114 B) / 1000
/// computed after compositing the pixel over black (alpha-weighted).
BodyMask mask_from_canvas(const Canvas& image);
BodyMask load_mask(const std::filesystem::path& image_file);

inline constexpr int kRegionCount = 12;
inline constexpr int kDefaultGridRows = 3;
inline constexpr int kDefaultGridCols = 4;

/// Twelve-region decomposition of a mask's inside pixels.
class RegionPartition {
public:
  static constexpr std::int8_t kOutside = -1;

  /// Per-pixel ids (row-major, kOutside for pixels not in any region).
  /// Throws ConfigError unless every region id 0..11 owns at least one pixel.
  RegionPartition(int width, int height, std::vector<std::int8_t> ids);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int region_count() const noexcept { return kRegionCount; }

  /// Region id of a pixel, or kOutside (also for out-of-bounds pixels).
  int region_at(int x, int y) const noexcept {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) {
      return kOutside;
    }
    return ids_[static_cast<std::size_t>(y) * width_ + x];
  }
  const PixelBox& region_bounds(int region) const { return bounds_.at(static_cast<std::size_t>(region)); }
  std::size_t region_size(int region) const { return sizes_.at(static_cast<std::size_t>(region)); }

  friend bool operator==(const RegionPartition& a, const RegionPartition& b) noexcept {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.ids_ == b.ids_;
  }

private:
  int width_;
  int height_;
  std::vector<std::int8_t> ids_;
  std::vector<PixelBox> bounds_;
  std::vector<std::size_t> sizes_;
};

/// Splits the mask bounding box into a rows x cols grid (rows * cols == 12).
/// Cells have size floor(extent / n); the remainder goes to the last row/column.
/// Region id is the row-major cell index; only inside pixels are labelled.
RegionPartition build_partition(const BodyMask& mask, int rows = kDefaultGridRows,
                                int cols = kDefaultGridCols);

/// Region-map image: each pixel's gray level in {10, 30, ..., 230} encodes region
/// (level - 10) / 20. Inside pixels of `mask` must carry a valid level; all other
/// pixels are ignored.
RegionPartition partition_from_canvas(const BodyMask& mask, const Canvas& region_map);
RegionPartition load_partition(const BodyMask& mask, const std::filesystem::path& region_map_file);

inline constexpr std::uint8_t region_gray_level(int region) noexcept {
  return static_cast<std::uint8_t>(10 + 20 * region);
}

/// Where points may be drawn: the whole mask or one region of a partition.
/// Holds non-owning references; the mask/partition must outlive it.
class SampleDomain {
public:
  static SampleDomain whole(const BodyMask& mask) noexcept { return SampleDomain(mask, nullptr, std::nullopt); }
  /// Throws ConfigError for an invalid or empty region.
  static SampleDomain region(const BodyMask& mask, const RegionPartition& partition, int region_id);

  const BodyMask& mask() const noexcept { return *mask_; }
  std::optional<int> region_id() const noexcept { return region_; }

  /// Pixel-level bounding box of the domain.
  const PixelBox& bounds() const noexcept;

  /// True iff the floor-rounded pixel of p is inside the mask and, for region
  /// domains, carries the matching region id. Off-raster points are outside.
  bool contains(Point p) const noexcept;

private:
  SampleDomain(const BodyMask& mask, const RegionPartition* partition, std::optional<int> region) noexcept
      : mask_(&mask), partition_(partition), region_(region) {}

  const BodyMask* mask_;
  const RegionPartition* partition_;
  std::optional<int> region_;
};

inline constexpr int kDefaultMaxTries = 1000;

/// Uniform over the domain's bounding box, rejected until contains(p).
/// Throws SamplingExhausted after max_tries draws.
Point sample_point(const SampleDomain& domain, RandomStream& stream, int max_tries = kDefaultMaxTries);

/// Pixel-floor of a continuous coordinate, saturating far outside int range.
int pixel_index(double v) noexcept;

}  // namespace bms
