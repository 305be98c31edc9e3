#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

#include "bodymap_synth/error.hpp"
#include "bodymap_synth/style.hpp"

namespace bms::detail {

using nlohmann::json;

inline void require_object(const json& value, const std::string& where) {
  if (!value.is_object()) {
    throw ConfigError(where + ": expected a JSON object");
  }
}

/// Rejects keys not in `allowed`.
inline void expect_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  require_object(obj, where);
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto name : allowed) {
      known = known || key == name;
    }
    if (!known) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_as(const json& obj, std::string_view key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(where + ": missing key '" + std::string(key) + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": key '" + std::string(key) + "' has the wrong type");
  }
}

template <typename T>
void read_if_present(const json& obj, std::string_view key, T& target, const std::string& where) {
  if (obj.contains(key)) {
    target = get_as<T>(obj, key, where);
  }
}

inline Rgba parse_color(const json& value, const std::string& where) {
  if (!value.is_array() || (value.size() != 3 && value.size() != 4)) {
    throw ConfigError(where + ": color must be [r, g, b] or [r, g, b, a]");
  }
  int channels[4] = {0, 0, 0, 255};
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number_integer() || value[i].get<int>() < 0 || value[i].get<int>() > 255) {
      throw ConfigError(where + ": color channels must be integers in 0..255");
    }
    channels[i] = value[i].get<int>();
  }
  return Rgba{static_cast<std::uint8_t>(channels[0]), static_cast<std::uint8_t>(channels[1]),
              static_cast<std::uint8_t>(channels[2]), static_cast<std::uint8_t>(channels[3])};
}

inline json color_json(Rgba c) { return json::array({c.r, c.g, c.b, c.a}); }

}  // namespace bms::detail
