#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "bodymap_synth/primitives.hpp"
#include "bodymap_synth/style.hpp"

namespace bms {

/// RGBA8 image, row-major, origin at the top-left pixel.
class Canvas {
public:
  Canvas() = default;
  Canvas(int width, int height, Rgba fill = kTransparent);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Rgba& at(int x, int y) noexcept { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const Rgba& at(int x, int y) const noexcept { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<Rgba> pixels() noexcept { return pixels_; }
  std::span<const Rgba> pixels() const noexcept { return pixels_; }

  friend bool operator==(const Canvas&, const Canvas&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgba> pixels_;
};

/// Porter-Duff source-over for straight-alpha 8-bit colors, integer arithmetic
/// with round-to-nearest. src.a == 255 yields src, src.a == 0 yields dst.
Rgba blend_over(Rgba src, Rgba dst) noexcept;

/// Hard-edged stroke of a polyline: every pixel whose center lies within
/// width/2 of the polyline is blended once with `color`.
void stroke_polyline(Canvas& canvas, const Polyline& line, double width, Rgba color);

/// Arc-length intervals [start, end] of the "on" dashes of a path of the given
/// length: starts at 0, (on+off), 2(on+off), ... while start <= length; each
/// dash ends at min(start + on, length). A dash may be zero-length at the end.
std::vector<std::pair<double, double>> dash_intervals(double length, DashPattern dash);

/// Portion of a polyline between two arc lengths (clamped to the path).
Polyline sub_polyline(const Polyline& line, double from, double to);

/// Draws one primitive. Lines are flattened with `tolerance` and stroked at
/// style.width; dashed lines stroke only their dash intervals; clusters draw a
/// filled disc of the primitive's point_radius (pixel center within radius) at
/// every point. No anti-aliasing.
void render(Canvas& canvas, const Primitive& primitive, const StrokeStyle& style,
            double tolerance = kDefaultFlattenTolerance);

/// Places `canvas` over `background` (source-over). Throws ConfigError if the
/// dimensions differ.
Canvas composite_over(const Canvas& canvas, const Canvas& background);
Canvas composite_template(const Canvas& canvas, const std::filesystem::path& template_file);

// PNG I/O. Encoder settings are pinned (RGBA8, non-interlaced, filter SUB on
// every row, zlib level 6, no ancillary chunks) so equal canvases give equal bytes.
std::vector<std::uint8_t> encode_png(const Canvas& canvas);
/// Any PNG color type is expanded to RGBA8. Throws DecodeError on malformed data.
Canvas decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

Canvas read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Canvas& canvas);

}  // namespace bms
