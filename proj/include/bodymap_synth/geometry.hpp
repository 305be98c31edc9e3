#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace bms {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point p) noexcept { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point a, Point b) noexcept = default;
};

/// Euclidean distance. Generation and validation both measure through this
/// function so that stored geometry is judged with the same arithmetic.
inline double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

/// Shortest distance from p to the closed segment [a, b].
double distance_to_segment(Point p, Point a, Point b) noexcept;

inline bool is_finite(Point p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Deterministic, platform-independent random stream.
///
/// The generator is PCG32 (XSH-RR output, 64-bit LCG state, O'Neill 2014).
/// derive_stream() keys it from a 64-bit master seed and a text label:
///
///   h        = FNV-1a-64(label bytes)
///   initstate = splitmix64(master_seed ^ splitmix64(h))
///   initseq   = splitmix64(h + 0x9E3779B97F4A7C15)
///
/// followed by the reference pcg32_srandom_r(initstate, initseq) procedure.
/// Doubles are built from the top 53 bits of two consecutive 32-bit outputs
/// (high word first); bounded integers use rejection on 32-bit outputs.
/// This construction is frozen: changing it changes every dataset.
class RandomStream {
public:
  RandomStream(std::uint64_t initstate, std::uint64_t initseq) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1).
  double uniform01() noexcept;

  /// Uniform integer in the closed range [lo, hi]; requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

RandomStream derive_stream(std::uint64_t master_seed, std::string_view label) noexcept;

/// Uniform over the disk area: angle = 2*pi*u1, radius * sqrt(u2).
/// The returned point always satisfies distance(p, center) <= radius.
Point sample_in_disk(RandomStream& stream, Point center, double radius);

// ---------------------------------------------------------------------------
// Bézier curves
// ---------------------------------------------------------------------------

class BezierCurve {
public:
  /// Builds a quadratic (3 points) or cubic (4 points) curve.
  /// Throws DomainError for any other control-point count or non-finite points.
  explicit BezierCurve(std::vector<Point> control_points);

  int degree() const noexcept { return static_cast<int>(control_.size()) - 1; }
  std::span<const Point> control_points() const noexcept { return control_; }
  Point start() const noexcept { return control_.front(); }
  Point end() const noexcept { return control_.back(); }

  friend bool operator==(const BezierCurve&, const BezierCurve&) = default;

private:
  std::vector<Point> control_;
};

/// Bernstein-form evaluation. Exact at t = 0 and t = 1.
/// Throws DomainError if t is outside [0, 1].
Point eval_bezier(const BezierCurve& curve, double t);

struct Polyline {
  std::vector<Point> vertices;

  double length() const noexcept;
};

inline constexpr double kDefaultFlattenTolerance = 0.25;
inline constexpr int kMaxFlattenDepth = 20;

/// Recursive midpoint (de Casteljau) subdivision. A piece is emitted as a
/// chord once every interior control point lies within `tolerance` of the
/// chord segment; by the convex-hull property the piece then lies within
/// `tolerance` of the chord. Endpoints are copied exactly.
Polyline flatten(const BezierCurve& curve, double tolerance = kDefaultFlattenTolerance);

/// Shortest distance from p to any segment of the polyline.
double distance_to_polyline(Point p, const Polyline& line) noexcept;

}  // namespace bms
