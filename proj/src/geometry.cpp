#include "bodymap_synth/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "bodymap_synth/error.hpp"

namespace bms {

double distance_to_segment(Point p, Point a, Point b) noexcept {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const Point ap = p - a;
  const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {
constexpr std::uint64_t kPcgMultiplier = 6364136223846793005ULL;
}

RandomStream::RandomStream(std::uint64_t initstate, std::uint64_t initseq) noexcept
    : state_(0), inc_((initseq << 1U) | 1U) {
  next_u32();
  state_ += initstate;
  next_u32();
}

std::uint32_t RandomStream::next_u32() noexcept {
  const std::uint64_t old = state_;
  state_ = old * kPcgMultiplier + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18U) ^ old) >> 27U);
  const auto rot = static_cast<std::uint32_t>(old >> 59U);
  return (xorshifted >> rot) | (xorshifted << ((32U - rot) & 31U));
}

std::uint64_t RandomStream::next_u64() noexcept {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32U) | lo;
}

double RandomStream::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11U) * 0x1.0p-53;
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw DomainError("uniform_int: empty range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1U;
  if (span > 0xFFFFFFFFULL) {
    throw DomainError("uniform_int: range wider than 2^32");
  }
  const auto bound = static_cast<std::uint32_t>(span);
  if (bound == 0) {  // full 2^32 range
    return lo + static_cast<std::int64_t>(next_u32());
  }
  // Reject the low (2^32 mod bound) values so every residue is equally likely.
  const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
  for (;;) {
    const std::uint32_t r = next_u32();
    if (r >= threshold) {
      return lo + static_cast<std::int64_t>(r % bound);
    }
  }
}

RandomStream derive_stream(std::uint64_t master_seed, std::string_view label) noexcept {
  const std::uint64_t h = fnv1a64(label);
  return RandomStream(splitmix64(master_seed ^ splitmix64(h)),
                      splitmix64(h + 0x9E3779B97F4A7C15ULL));
}

Point sample_in_disk(RandomStream& stream, Point center, double radius) {
  if (!(radius >= 0.0)) {
    throw DomainError("sample_in_disk: negative radius");
  }
  if (radius == 0.0) {
    return center;
  }
  for (;;) {
    const double angle = 2.0 * std::numbers::pi * stream.uniform01();
    const double r = radius * std::sqrt(stream.uniform01());
    const Point p{center.x + r * std::cos(angle), center.y + r * std::sin(angle)};
    // Rounding can push a point on the rim a few ulps outside; the bound is hard.
    if (distance(p, center) <= radius) {
      return p;
    }
  }
}

// ---------------------------------------------------------------------------

BezierCurve::BezierCurve(std::vector<Point> control_points) : control_(std::move(control_points)) {
  if (control_.size() != 3 && control_.size() != 4) {
    throw DomainError("BezierCurve: degree must be 2 or 3 (got " +
                      std::to_string(static_cast<int>(control_.size()) - 1) + ")");
  }
  if (!std::all_of(control_.begin(), control_.end(), is_finite)) {
    throw DomainError("BezierCurve: non-finite control point");
  }
}

Point eval_bezier(const BezierCurve& curve, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("eval_bezier: t outside [0, 1]");
  }
  const auto cp = curve.control_points();
  const double s = 1.0 - t;
  if (curve.degree() == 2) {
    const double b0 = s * s;
    const double b1 = 2.0 * s * t;
    const double b2 = t * t;
    return {b0 * cp[0].x + b1 * cp[1].x + b2 * cp[2].x, b0 * cp[0].y + b1 * cp[1].y + b2 * cp[2].y};
  }
  const double b0 = s * s * s;
  const double b1 = 3.0 * s * s * t;
  const double b2 = 3.0 * s * t * t;
  const double b3 = t * t * t;
  return {b0 * cp[0].x + b1 * cp[1].x + b2 * cp[2].x + b3 * cp[3].x,
          b0 * cp[0].y + b1 * cp[1].y + b2 * cp[2].y + b3 * cp[3].y};
}

double Polyline::length() const noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    total += distance(vertices[i - 1], vertices[i]);
  }
  return total;
}

namespace {

using Controls = std::array<Point, 4>;

Point midpoint(Point a, Point b) noexcept { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// de Casteljau split at t = 1/2 of the first n+1 points.
void split_half(const Controls& c, int degree, Controls& left, Controls& right) noexcept {
  Controls work = c;
  left[0] = work[0];
  right[degree] = work[degree];
  for (int level = 1; level <= degree; ++level) {
    for (int i = 0; i <= degree - level; ++i) {
      work[i] = midpoint(work[i], work[i + 1]);
    }
    left[level] = work[0];
    right[degree - level] = work[degree - level];
  }
}

bool is_flat(const Controls& c, int degree, double tolerance) noexcept {
  for (int i = 1; i < degree; ++i) {
    if (distance_to_segment(c[i], c[0], c[degree]) > tolerance) {
      return false;
    }
  }
  return true;
}

void subdivide(const Controls& c, int degree, double tolerance, int depth, std::vector<Point>& out) {
  if (depth >= kMaxFlattenDepth || is_flat(c, degree, tolerance)) {
    out.push_back(c[degree]);
    return;
  }
  Controls left{};
  Controls right{};
  split_half(c, degree, left, right);
  subdivide(left, degree, tolerance, depth + 1, out);
  subdivide(right, degree, tolerance, depth + 1, out);
}

}  // namespace

Polyline flatten(const BezierCurve& curve, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw DomainError("flatten: tolerance must be positive");
  }
  const auto cp = curve.control_points();
  const int degree = curve.degree();
  Controls c{};
  std::copy(cp.begin(), cp.end(), c.begin());

  std::vector<Point> raw;
  raw.push_back(cp.front());
  subdivide(c, degree, tolerance, 0, raw);

  Polyline line;
  line.vertices.reserve(raw.size());
  for (const Point& p : raw) {
    if (line.vertices.empty() || !(line.vertices.back() == p)) {
      line.vertices.push_back(p);
    }
  }
  if (line.vertices.size() < 2) {
    // Point-like curve: keep both endpoints so consumers always see a segment.
    line.vertices.push_back(cp.back());
  }
  line.vertices.back() = cp.back();
  return line;
}

double distance_to_polyline(Point p, const Polyline& line) noexcept {
  if (line.vertices.size() == 1) {
    return distance(p, line.vertices.front());
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.vertices.size(); ++i) {
    best = std::min(best, distance_to_segment(p, line.vertices[i - 1], line.vertices[i]));
  }
  return best;
}

}  // namespace bms
