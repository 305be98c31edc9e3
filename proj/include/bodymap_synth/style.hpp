#pragma once

#include <cstdint>

namespace bms {

/// Straight (non-premultiplied) 8-bit RGBA.
struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 0;

  friend constexpr bool operator==(Rgba, Rgba) noexcept = default;
};

inline constexpr Rgba kBlack{0, 0, 0, 255};
inline constexpr Rgba kWhite{255, 255, 255, 255};
inline constexpr Rgba kTransparent{0, 0, 0, 0};

/// Dash lengths in pixels of arc length; dashes start "on" at arc length 0.
struct DashPattern {
  double on_length = 12.0;
  double off_length = 8.0;

  friend constexpr bool operator==(DashPattern, DashPattern) noexcept = default;
};

struct StrokeStyle {
  double width = 3.0;
  Rgba color = kBlack;
  double point_radius = 3.0;

  friend constexpr bool operator==(StrokeStyle, StrokeStyle) noexcept = default;
};

}  // namespace bms
