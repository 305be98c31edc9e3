#include "bodymap_synth/bodymap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bodymap_synth/error.hpp"
#include "bodymap_synth/raster.hpp"

namespace bms {

BodyMask::BodyMask(int width, int height, std::vector<std::uint8_t> inside)
    : width_(width), height_(height), inside_(std::move(inside)) {
  if (width_ < 1 || height_ < 1) {
    throw ConfigError("mask dimensions must be at least 1x1");
  }
  if (inside_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw ConfigError("mask raster size does not match its dimensions");
  }
  bounds_ = PixelBox{width_, height_, -1, -1};
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (inside_[static_cast<std::size_t>(y) * width_ + x] != 0) {
        ++inside_count_;
        bounds_.x0 = std::min(bounds_.x0, x);
        bounds_.y0 = std::min(bounds_.y0, y);
        bounds_.x1 = std::max(bounds_.x1, x);
        bounds_.y1 = std::max(bounds_.y1, y);
      }
    }
  }
  if (inside_count_ == 0) {
    throw ConfigError("mask has no inside pixels");
  }
}

BodyMask default_mask(int width, int height, int margin) {
  if (margin < 0 || width <= 2 * margin || height <= 2 * margin) {
    throw ConfigError("default mask: " + std::to_string(width) + "x" + std::to_string(height) +
                      " with margin " + std::to_string(margin) + " leaves no interior");
  }
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(width) * height, 0);
  for (int y = margin; y < height - margin; ++y) {
    std::fill_n(inside.begin() + static_cast<std::ptrdiff_t>(y) * width + margin, width - 2 * margin, 1);
  }
  return BodyMask(width, height, std::move(inside));
}

namespace {

int luminance_over_black(Rgba c) noexcept {
  const int lum = (299 * c.r + 587 * c.g + 114 * c.b) / 1000;
  return lum * c.a / 255;
}

}  // namespace

BodyMask mask_from_canvas(const Canvas& image) {
  std::vector<std::uint8_t> inside(image.pixels().size(), 0);
  std::transform(image.pixels().begin(), image.pixels().end(), inside.begin(),
                 [](Rgba c) { return static_cast<std::uint8_t>(luminance_over_black(c) > 127); });
  return BodyMask(image.width(), image.height(), std::move(inside));
}

BodyMask load_mask(const std::filesystem::path& image_file) {
  const Canvas image = read_png(image_file);
  try {
    return mask_from_canvas(image);
  } catch (const ConfigError& e) {
    throw ConfigError(image_file.string() + ": " + e.what());
  }
}

RegionPartition::RegionPartition(int width, int height, std::vector<std::int8_t> ids)
    : width_(width), height_(height), ids_(std::move(ids)),
      bounds_(kRegionCount, PixelBox{width, height, -1, -1}), sizes_(kRegionCount, 0) {
  if (ids_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw ConfigError("region raster size does not match its dimensions");
  }
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const int id = ids_[static_cast<std::size_t>(y) * width_ + x];
      if (id == kOutside) {
        continue;
      }
      if (id < 0 || id >= kRegionCount) {
        throw ConfigError("region id " + std::to_string(id) + " out of range");
      }
      PixelBox& b = bounds_[static_cast<std::size_t>(id)];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
      ++sizes_[static_cast<std::size_t>(id)];
    }
  }
  for (int r = 0; r < kRegionCount; ++r) {
    if (sizes_[static_cast<std::size_t>(r)] == 0) {
      throw ConfigError("region " + std::to_string(r) + " is empty");
    }
  }
}

RegionPartition build_partition(const BodyMask& mask, int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols != kRegionCount) {
    throw ConfigError("partition grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " does not have 12 cells");
  }
  const PixelBox& box = mask.bounds();
  if (box.width() < cols || box.height() < rows) {
    throw ConfigError("mask bounding box too small for a " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " grid");
  }
  const int cell_w = box.width() / cols;
  const int cell_h = box.height() / rows;

  std::vector<std::int8_t> ids(static_cast<std::size_t>(mask.width()) * mask.height(),
                               RegionPartition::kOutside);
  for (int y = box.y0; y <= box.y1; ++y) {
    const int row = std::min((y - box.y0) / cell_h, rows - 1);
    for (int x = box.x0; x <= box.x1; ++x) {
      if (!mask.inside(x, y)) {
        continue;
      }
      const int col = std::min((x - box.x0) / cell_w, cols - 1);
      ids[static_cast<std::size_t>(y) * mask.width() + x] = static_cast<std::int8_t>(row * cols + col);
    }
  }
  try {
    return RegionPartition(mask.width(), mask.height(), std::move(ids));
  } catch (const ConfigError& e) {
    // A sparse mask can leave whole grid cells without inside pixels.
    throw ConfigError(std::string("grid partition: ") + e.what());
  }
}

RegionPartition partition_from_canvas(const BodyMask& mask, const Canvas& region_map) {
  if (region_map.width() != mask.width() || region_map.height() != mask.height()) {
    throw ConfigError("region map is " + std::to_string(region_map.width()) + "x" +
                      std::to_string(region_map.height()) + ", mask is " + std::to_string(mask.width()) +
                      "x" + std::to_string(mask.height()));
  }
  std::vector<std::int8_t> ids(region_map.pixels().size(), RegionPartition::kOutside);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.inside(x, y)) {
        continue;
      }
      const Rgba c = region_map.at(x, y);
      const int gray = (299 * c.r + 587 * c.g + 114 * c.b) / 1000;
      if (gray < 10 || gray > 230 || (gray - 10) % 20 != 0) {
        throw ConfigError("region map pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") has gray level " + std::to_string(gray) + ", not a region level");
      }
      ids[static_cast<std::size_t>(y) * mask.width() + x] = static_cast<std::int8_t>((gray - 10) / 20);
    }
  }
  return RegionPartition(mask.width(), mask.height(), std::move(ids));
}

RegionPartition load_partition(const BodyMask& mask, const std::filesystem::path& region_map_file) {
  const Canvas image = read_png(region_map_file);
  try {
    return partition_from_canvas(mask, image);
  } catch (const ConfigError& e) {
    throw ConfigError(region_map_file.string() + ": " + e.what());
  }
}

SampleDomain SampleDomain::region(const BodyMask& mask, const RegionPartition& partition, int region_id) {
  if (region_id < 0 || region_id >= kRegionCount) {
    throw ConfigError("region id " + std::to_string(region_id) + " out of range 0..11");
  }
  if (partition.width() != mask.width() || partition.height() != mask.height()) {
    throw ConfigError("partition and mask dimensions differ");
  }
  if (partition.region_size(region_id) == 0) {
    throw ConfigError("region " + std::to_string(region_id) + " is empty");
  }
  return SampleDomain(mask, &partition, region_id);
}

const PixelBox& SampleDomain::bounds() const noexcept {
  if (region_) {
    return partition_->region_bounds(*region_);
  }
  return mask_->bounds();
}

int pixel_index(double v) noexcept {
  const double f = std::floor(v);
  if (!(f > static_cast<double>(std::numeric_limits<int>::min()))) {
    return std::numeric_limits<int>::min();
  }
  if (!(f < static_cast<double>(std::numeric_limits<int>::max()))) {
    return std::numeric_limits<int>::max();
  }
  return static_cast<int>(f);
}

bool SampleDomain::contains(Point p) const noexcept {
  const int x = pixel_index(p.x);
  const int y = pixel_index(p.y);
  if (!mask_->inside(x, y)) {
    return false;
  }
  return !region_ || partition_->region_at(x, y) == *region_;
}

Point sample_point(const SampleDomain& domain, RandomStream& stream, int max_tries) {
  if (max_tries < 1) {
    throw DomainError("sample_point: max_tries must be >= 1");
  }
  const PixelBox& box = domain.bounds();
  for (int i = 0; i < max_tries; ++i) {
    const double u = stream.uniform01();
    const double v = stream.uniform01();
    const Point p{box.x0 + u * box.width(), box.y0 + v * box.height()};
    if (domain.contains(p)) {
      return p;
    }
  }
  throw SamplingExhausted("sample_point: no point inside the domain after " + std::to_string(max_tries) +
                          " tries");
}

}  // namespace bms
