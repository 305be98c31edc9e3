#include "bodymap_synth/manifest.hpp"

#include <fstream>
#include <span>
#include <sstream>

#include "bodymap_synth/error.hpp"
#include "bodymap_synth/raster.hpp"
#include "json_util.hpp"

namespace bms {

using nlohmann::json;

namespace {

json points_json(std::span<const Point> points) {
  json out = json::array();
  for (const Point& p : points) {
    out.push_back(json::array({p.x, p.y}));
  }
  return out;
}

std::vector<Point> parse_points(const json& value) {
  if (!value.is_array()) {
    throw IoError("point list is not an array");
  }
  std::vector<Point> points;
  points.reserve(value.size());
  for (const json& p : value) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw IoError("malformed point");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return points;
}

Primitive parse_shape(const json& g) {
  const PrimitiveKind kind = parse_primitive_kind(g.at("kind").get<std::string>());
  if (kind == PrimitiveKind::PointCluster) {
    return PointClusterPrimitive{parse_points(g.at("points")), g.at("point_radius").get<double>()};
  }
  BezierCurve curve(parse_points(g.at("control_points")));
  if (g.contains("degree") && g.at("degree").get<int>() != curve.degree()) {
    throw IoError("degree does not match the control point count");
  }
  if (kind == PrimitiveKind::Line) {
    return LinePrimitive{std::move(curve)};
  }
  const json& dash = g.at("dash");
  return DashedLinePrimitive{std::move(curve), DashPattern{dash.at(0).get<double>(), dash.at(1).get<double>()}};
}

PlacedPrimitive parse_primitive(const json& g) {
  return PlacedPrimitive{parse_shape(g), detail::parse_color(g.at("color"), "geometry"),
                         g.contains("rule") ? g.at("rule").get<int>() : -1};
}

ClassLabel parse_label(Family family, const json& l) {
  switch (family) {
    case Family::Basic3:
      return ClassLabel::basic(parse_primitive_kind(l.at("kind").get<std::string>()));
    case Family::Region36:
      return ClassLabel::regional(parse_primitive_kind(l.at("kind").get<std::string>()), l.at("region").get<int>());
    case Family::Diagnosis5:
      return ClassLabel::diagnosis_label(parse_diagnosis(l.at("diagnosis").get<std::string>()));
  }
  throw IoError("unknown family");
}

}  // namespace

json primitive_to_json(const PlacedPrimitive& placed) {
  json g;
  g["kind"] = std::string(to_string(kind_of(placed.primitive)));
  std::visit(
      [&g](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PointClusterPrimitive>) {
          g["points"] = points_json(p.points);
          g["point_radius"] = p.point_radius;
        } else {
          g["degree"] = p.curve.degree();
          g["control_points"] = points_json(p.curve.control_points());
          if constexpr (std::is_same_v<T, DashedLinePrimitive>) {
            g["dash"] = json::array({p.dash.on_length, p.dash.off_length});
          }
        }
      },
      placed.primitive);
  g["color"] = detail::color_json(placed.color);
  if (placed.rule >= 0) {
    g["rule"] = placed.rule;
  }
  return g;
}

json label_to_json(const ClassLabel& label) {
  switch (label.family) {
    case Family::Basic3:
      return {{"kind", std::string(to_string(label.kind))}};
    case Family::Region36:
      return {{"kind", std::string(to_string(label.kind))}, {"region", label.region}};
    case Family::Diagnosis5:
      return {{"diagnosis", std::string(to_string(label.diagnosis))}};
  }
  return json::object();
}

json manifest_to_json(const Manifest& m) {
  json entries = json::array();
  for (const ManifestEntry& e : m.entries) {
    json geometry = json::array();
    for (const PlacedPrimitive& p : e.geometry) {
      geometry.push_back(primitive_to_json(p));
    }
    entries.push_back({{"path", e.path},
                       {"label", label_to_json(e.label)},
                       {"split", std::string(to_string(e.split))},
                       {"index", e.index},
                       {"geometry", std::move(geometry)}});
  }
  return {{"version", m.version},
          {"family", std::string(to_string(m.family))},
          {"config_digest", m.config_digest},
          {"master_seed", m.master_seed},
          {"counts", {{"train_per_class", m.train_per_class}, {"test_per_class", m.test_per_class}}},
          {"config", m.config},
          {"entries", std::move(entries)}};
}

Manifest manifest_from_json(const json& doc) {
  try {
    Manifest m;
    m.version = doc.at("version").get<int>();
    if (m.version != kManifestVersion) {
      throw IoError("unsupported manifest version " + std::to_string(m.version));
    }
    m.family = parse_family(doc.at("family").get<std::string>());
    m.config_digest = doc.at("config_digest").get<std::string>();
    m.master_seed = doc.at("master_seed").get<std::uint64_t>();
    m.train_per_class = doc.at("counts").at("train_per_class").get<int>();
    m.test_per_class = doc.at("counts").at("test_per_class").get<int>();
    m.config = doc.at("config");
    for (const json& e : doc.at("entries")) {
      ManifestEntry entry;
      entry.path = e.at("path").get<std::string>();
      entry.label = parse_label(m.family, e.at("label"));
      entry.split = parse_split(e.at("split").get<std::string>());
      entry.index = e.at("index").get<int>();
      for (const json& g : e.at("geometry")) {
        entry.geometry.push_back(parse_primitive(g));
      }
      m.entries.push_back(std::move(entry));
    }
    return m;
  } catch (const IoError&) {
    throw;
  } catch (const json::exception& e) {
    throw IoError(std::string("corrupt manifest: ") + e.what());
  } catch (const Error& e) {
    throw IoError(std::string("corrupt manifest: ") + e.what());
  }
}

std::string serialize_manifest(const Manifest& manifest) { return manifest_to_json(manifest).dump(2) + "\n"; }

void write_manifest(const std::filesystem::path& file, const Manifest& manifest) {
  const std::string text = serialize_manifest(manifest);
  write_file(file, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Manifest read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw IoError("cannot open manifest " + file.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("corrupt manifest " + file.string() + ": " + e.what());
  }
  return manifest_from_json(doc);
}

}  // namespace bms
