#include "bodymap_synth/raster.hpp"

#include <png.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "bodymap_synth/error.hpp"

namespace bms {

Canvas::Canvas(int width, int height, Rgba fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ConfigError("canvas dimensions must be at least 1x1");
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Rgba blend_over(Rgba src, Rgba dst) noexcept {
  if (src.a == 255 || (src.a != 0 && dst.a == 0)) {
    return src;
  }
  if (src.a == 0) {
    return dst;
  }
  // Weights scaled by 255^2: source sa*255, destination da*(255-sa).
  const std::uint32_t ws = static_cast<std::uint32_t>(src.a) * 255U;
  const std::uint32_t wd = static_cast<std::uint32_t>(dst.a) * (255U - src.a);
  const std::uint32_t total = ws + wd;
  const auto mix = [&](std::uint8_t s, std::uint8_t d) {
    return static_cast<std::uint8_t>((s * ws + d * wd + total / 2) / total);
  };
  return Rgba{mix(src.r, dst.r), mix(src.g, dst.g), mix(src.b, dst.b),
              static_cast<std::uint8_t>((total + 127U) / 255U)};
}

namespace {

// Union of covered pixels for one primitive, so overlapping pieces blend once.
class Coverage {
public:
  explicit Coverage(const Canvas& canvas)
      : width_(canvas.width()), height_(canvas.height()),
        bits_(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0) {}

  // Pixels whose center is within `radius` of segment [a, b].
  void add_segment(Point a, Point b, double radius) {
    const int x0 = std::max(0, pixel_index(std::min(a.x, b.x) - radius - 1.0));
    const int y0 = std::max(0, pixel_index(std::min(a.y, b.y) - radius - 1.0));
    const int x1 = std::min(width_ - 1, pixel_index(std::max(a.x, b.x) + radius + 1.0));
    const int y1 = std::min(height_ - 1, pixel_index(std::max(a.y, b.y) + radius + 1.0));
    if (x0 > x1 || y0 > y1) {
      return;
    }
    dirty_.x0 = std::min(dirty_.x0, x0);
    dirty_.y0 = std::min(dirty_.y0, y0);
    dirty_.x1 = std::max(dirty_.x1, x1);
    dirty_.y1 = std::max(dirty_.y1, y1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (distance_to_segment({x + 0.5, y + 0.5}, a, b) <= radius) {
          bits_[static_cast<std::size_t>(y) * width_ + x] = 1;
        }
      }
    }
  }

  void add_polyline(const Polyline& line, double radius) {
    if (line.vertices.size() == 1) {
      add_segment(line.vertices.front(), line.vertices.front(), radius);
    }
    for (std::size_t i = 1; i < line.vertices.size(); ++i) {
      add_segment(line.vertices[i - 1], line.vertices[i], radius);
    }
  }

  void paint(Canvas& canvas, Rgba color) const {
    if (color.a == 0 || dirty_.empty()) {
      return;
    }
    for (int y = dirty_.y0; y <= dirty_.y1; ++y) {
      for (int x = dirty_.x0; x <= dirty_.x1; ++x) {
        if (bits_[static_cast<std::size_t>(y) * width_ + x] != 0) {
          canvas.at(x, y) = blend_over(color, canvas.at(x, y));
        }
      }
    }
  }

private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
  PixelBox dirty_{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), -1, -1};
};

}  // namespace

void stroke_polyline(Canvas& canvas, const Polyline& line, double width, Rgba color) {
  Coverage coverage(canvas);
  coverage.add_polyline(line, 0.5 * width);
  coverage.paint(canvas, color);
}

std::vector<std::pair<double, double>> dash_intervals(double length, DashPattern dash) {
  check_params(dash);
  std::vector<std::pair<double, double>> out;
  const double period = dash.on_length + dash.off_length;
  for (std::size_t k = 0;; ++k) {
    const double start = static_cast<double>(k) * period;
    if (start > length) {
      break;
    }
    out.emplace_back(start, std::min(start + dash.on_length, length));
  }
  return out;
}

Polyline sub_polyline(const Polyline& line, double from, double to) {
  const auto& v = line.vertices;
  Polyline out;
  if (v.empty()) {
    return out;
  }
  const double total = line.length();
  from = std::clamp(from, 0.0, total);
  to = std::clamp(to, from, total);

  double walked = 0.0;
  bool started = false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double seg = distance(v[i - 1], v[i]);
    const double next = walked + seg;
    const auto at = [&](double s) {
      const double f = seg > 0.0 ? (s - walked) / seg : 0.0;
      return Point{v[i - 1].x + f * (v[i].x - v[i - 1].x), v[i - 1].y + f * (v[i].y - v[i - 1].y)};
    };
    if (!started && from <= next) {
      out.vertices.push_back(at(from));
      started = true;
    }
    if (started) {
      if (to <= next) {
        out.vertices.push_back(at(to));
        return out;
      }
      out.vertices.push_back(v[i]);
    }
    walked = next;
  }
  if (out.vertices.empty()) {
    out.vertices.push_back(v.back());
  }
  if (out.vertices.size() == 1) {
    out.vertices.push_back(out.vertices.front());
  }
  return out;
}

void render(Canvas& canvas, const Primitive& primitive, const StrokeStyle& style, double tolerance) {
  Coverage coverage(canvas);
  if (const auto* line = std::get_if<LinePrimitive>(&primitive)) {
    coverage.add_polyline(flatten(line->curve, tolerance), 0.5 * style.width);
  } else if (const auto* dashed = std::get_if<DashedLinePrimitive>(&primitive)) {
    const Polyline path = flatten(dashed->curve, tolerance);
    for (const auto& [from, to] : dash_intervals(path.length(), dashed->dash)) {
      coverage.add_polyline(sub_polyline(path, from, to), 0.5 * style.width);
    }
  } else {
    const auto& cluster = std::get<PointClusterPrimitive>(primitive);
    for (const Point& p : cluster.points) {
      coverage.add_segment(p, p, cluster.point_radius);
    }
  }
  coverage.paint(canvas, style.color);
}

Canvas composite_over(const Canvas& canvas, const Canvas& background) {
  if (canvas.width() != background.width() || canvas.height() != background.height()) {
    throw ConfigError("template is " + std::to_string(background.width()) + "x" +
                      std::to_string(background.height()) + ", canvas is " + std::to_string(canvas.width()) +
                      "x" + std::to_string(canvas.height()));
  }
  Canvas out = background;
  auto dst = out.pixels();
  const auto src = canvas.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = blend_over(src[i], dst[i]);
  }
  return out;
}

Canvas composite_template(const Canvas& canvas, const std::filesystem::path& template_file) {
  return composite_over(canvas, read_png(template_file));
}

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
constexpr int kZlibLevel = 6;
constexpr std::uint8_t kFilterSub = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24U));
  out.push_back(static_cast<std::uint8_t>(v >> 16U));
  out.push_back(static_cast<std::uint8_t>(v >> 8U));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char (&type)[5], std::span<const std::uint8_t> data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + type_pos, static_cast<uInt>(out.size() - type_pos));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Canvas& canvas) {
  const auto width = static_cast<std::size_t>(canvas.width());
  const auto height = static_cast<std::size_t>(canvas.height());
  if (width == 0 || height == 0) {
    throw ConfigError("cannot encode an empty canvas");
  }
  const std::size_t stride = width * 4;

  std::vector<std::uint8_t> filtered;
  filtered.reserve(height * (stride + 1));
  for (std::size_t y = 0; y < height; ++y) {
    const auto* row = reinterpret_cast<const std::uint8_t*>(&canvas.at(0, static_cast<int>(y)));
    filtered.push_back(kFilterSub);
    for (std::size_t i = 0; i < stride; ++i) {
      const std::uint8_t left = i >= 4 ? row[i - 4] : 0;
      filtered.push_back(static_cast<std::uint8_t>(row[i] - left));
    }
  }

  uLongf packed_size = compressBound(static_cast<uLong>(filtered.size()));
  std::vector<std::uint8_t> packed(packed_size);
  if (compress2(packed.data(), &packed_size, filtered.data(), static_cast<uLong>(filtered.size()), kZlibLevel) !=
      Z_OK) {
    throw IoError("zlib compression failed");
  }
  packed.resize(packed_size);

  std::vector<std::uint8_t> header;
  put_u32(header, static_cast<std::uint32_t>(width));
  put_u32(header, static_cast<std::uint32_t>(height));
  header.insert(header.end(), {8, 6, 0, 0, 0});  // depth 8, RGBA, deflate, adaptive filters, no interlace

  std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());
  put_chunk(out, "IHDR", header);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

Canvas decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
    throw DecodeError(std::string("PNG decode: ") + image.message);
  }
  if (image.width == 0 || image.height == 0 || image.width > (1U << 15U) || image.height > (1U << 15U)) {
    png_image_free(&image);
    throw DecodeError("PNG decode: unsupported dimensions");
  }
  image.format = PNG_FORMAT_RGBA;
  Canvas canvas(static_cast<int>(image.width), static_cast<int>(image.height));
  static_assert(sizeof(Rgba) == 4);
  if (png_image_finish_read(&image, nullptr, canvas.pixels().data(), 0, nullptr) == 0) {
    const std::string message = image.message;
    png_image_free(&image);
    throw DecodeError("PNG decode: " + message);
  }
  return canvas;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failed: " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

Canvas read_png(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_png(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

void write_png(const std::filesystem::path& path, const Canvas& canvas) { write_file(path, encode_png(canvas)); }

}  // namespace bms
