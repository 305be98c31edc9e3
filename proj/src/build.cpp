#include "bodymap_synth/build.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <system_error>

#include "bodymap_synth/error.hpp"

namespace bms {

namespace fs = std::filesystem;

std::string WorkItem::stream_label() const {
  return std::string(to_string(label.family)) + "/" + label.class_name() + "/" + std::string(to_string(split)) + "/" +
         std::to_string(index);
}

std::string WorkItem::relative_path() const {
  char name[32];
  std::snprintf(name, sizeof name, "%05d.png", index);
  return std::string(to_string(split)) + "/" + label.class_name() + "/" + name;
}

std::vector<WorkItem> plan_work(const DatasetConfig& config) {
  std::vector<WorkItem> items;
  const auto labels = enumerate_labels(config.family);
  items.reserve(labels.size() * static_cast<std::size_t>(config.per_class_train + config.per_class_test));
  for (const ClassLabel& label : labels) {
    for (int i = 0; i < config.per_class_train; ++i) {
      items.push_back({label, Split::Train, i});
    }
    for (int i = 0; i < config.per_class_test; ++i) {
      items.push_back({label, Split::Test, i});
    }
  }
  return items;
}

namespace {

Primitive generate(const BuildContext& ctx, PrimitiveKind kind, std::optional<int> region, RandomStream& stream,
                   const ParamOverrides& overrides) {
  const SampleDomain domain = ctx.domain(region);
  const DatasetConfig& c = ctx.config;
  switch (kind) {
    case PrimitiveKind::Line:
      return gen_line(domain, stream, overrides.apply(c.line), c.limits);
    case PrimitiveKind::DashedLine:
      return gen_dashed_line(domain, stream, overrides.apply(c.line), overrides.apply(c.dash), c.limits);
    case PrimitiveKind::PointCluster:
      return gen_cluster(domain, stream, overrides.apply(c.cluster), c.stroke.point_radius, c.limits);
  }
  throw ConfigError("unknown primitive kind");
}

}  // namespace

RenderedImage build_image(const BuildContext& ctx, const WorkItem& item) {
  const DatasetConfig& c = ctx.config;
  RandomStream stream = derive_stream(c.master_seed, item.stream_label());
  Canvas marks(c.width, c.height);
  ManifestEntry entry{item.relative_path(), item.label, item.split, item.index, {}};

  const auto draw = [&](PlacedPrimitive placed) {
    StrokeStyle style = c.stroke;
    style.color = placed.color;
    render(marks, placed.primitive, style, c.limits.flatten_tolerance);
    entry.geometry.push_back(std::move(placed));
  };

  try {
    switch (item.label.family) {
      case Family::Basic3:
        draw({generate(ctx, item.label.kind, std::nullopt, stream, {}), c.stroke.color, -1});
        break;
      case Family::Region36:
        draw({generate(ctx, item.label.kind, item.label.region, stream, {}), c.stroke.color, -1});
        break;
      case Family::Diagnosis5: {
        const auto& rules = ctx.scenario->rules_for(item.label.diagnosis);
        for (std::size_t r = 0; r < rules.size(); ++r) {
          const ScenarioRule& rule = rules[r];
          const auto count = stream.uniform_int(rule.count_min, rule.count_max);
          for (std::int64_t k = 0; k < count; ++k) {
            draw({generate(ctx, rule.kind, rule.region, stream, rule.params), rule.color, static_cast<int>(r)});
          }
        }
        break;
      }
    }
  } catch (const GenerationFailed& e) {
    std::string where = "class " + item.label.class_name();
    if (item.label.family == Family::Region36) {
      where += " (region " + std::to_string(item.label.region) + ")";
    }
    throw GenerationFailed(where + ", " + std::string(to_string(item.split)) + " image " +
                           std::to_string(item.index) + ": " + e.what());
  }
  return RenderedImage{std::move(entry), composite_over(marks, ctx.background)};
}

std::vector<ManifestEntry> build_entries_serial(const BuildContext& ctx, std::span<const WorkItem> items,
                                                const ImageSink& sink) {
  std::vector<ManifestEntry> entries;
  entries.reserve(items.size());
  for (const WorkItem& item : items) {
    RenderedImage image = build_image(ctx, item);
    if (sink) {
      sink(image);
    }
    entries.push_back(std::move(image.entry));
  }
  return entries;
}

std::vector<ManifestEntry> build_entries_parallel(const BuildContext& ctx, std::span<const WorkItem> items, int jobs,
                                                  const ImageSink& sink) {
  const auto n = static_cast<std::ptrdiff_t>(items.size());
  std::vector<std::optional<ManifestEntry>> slots(items.size());
  std::vector<std::exception_ptr> errors(items.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      RenderedImage image = build_image(ctx, items[static_cast<std::size_t>(i)]);
      if (sink) {
        sink(image);
      }
      slots[static_cast<std::size_t>(i)] = std::move(image.entry);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
  std::vector<ManifestEntry> entries;
  entries.reserve(slots.size());
  for (auto& slot : slots) {
    entries.push_back(std::move(*slot));
  }
  return entries;
}

Manifest make_manifest(const BuildContext& ctx, std::vector<ManifestEntry> entries) {
  Manifest m;
  m.family = ctx.config.family;
  m.config_digest = ctx.digest;
  m.master_seed = ctx.config.master_seed;
  m.train_per_class = ctx.config.per_class_train;
  m.test_per_class = ctx.config.per_class_test;
  m.config = ctx.canonical;
  m.entries = std::move(entries);
  return m;
}

namespace {

const char* const kGeneratedNames[] = {"train", "test", kManifestName, kMaskCopyName, kRegionMapCopyName};

bool is_generated_name(const fs::path& name) {
  return std::any_of(std::begin(kGeneratedNames), std::end(kGeneratedNames),
                     [&](const char* g) { return name == g; }) ||
         name == kPartialMarkerName;
}

// Accepts a missing or empty directory, or one holding a previous output
// (recognised by its manifest or partial marker) whose generated files are cleared.
void prepare_output_dir(const fs::path& out) {
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out, ec)) {
      throw IoError(out.string() + " exists and is not a directory");
    }
    const bool previous = fs::exists(out / kManifestName) || fs::exists(out / kPartialMarkerName);
    for (const auto& child : fs::directory_iterator(out)) {
      if (!previous || !is_generated_name(child.path().filename())) {
        throw ConfigError("output directory " + out.string() + " is not empty and not a previous dataset");
      }
    }
    for (const char* name : kGeneratedNames) {
      fs::remove_all(out / name, ec);
    }
  }
  fs::create_directories(out, ec);
  if (ec) {
    throw IoError("cannot create " + out.string() + ": " + ec.message());
  }
}

void remove_generated(const fs::path& out) {
  std::error_code ec;
  for (const char* name : kGeneratedNames) {
    fs::remove_all(out / name, ec);
  }
}

void copy_into(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::copy_file(from, to, fs::copy_options::overwrite_existing, ec);
  if (ec) {
    throw IoError("cannot copy " + from.string() + " to " + to.string() + ": " + ec.message());
  }
}

void create_class_dirs(const fs::path& root, std::span<const WorkItem> items) {
  std::error_code ec;
  for (const WorkItem& item : items) {
    const fs::path dir = (root / item.relative_path()).parent_path();
    if (!fs::is_directory(dir)) {
      fs::create_directories(dir, ec);
      if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
      }
    }
  }
}

}  // namespace

Manifest generate_dataset(const BuildContext& ctx, const fs::path& out, int jobs) {
  prepare_output_dir(out);
  write_file(out / kPartialMarkerName, {});
  try {
    if (ctx.config.mask_file) {
      copy_into(*ctx.config.mask_file, out / kMaskCopyName);
    }
    if (ctx.config.region_map_file && ctx.partition) {
      copy_into(*ctx.config.region_map_file, out / kRegionMapCopyName);
    }
    const auto items = plan_work(ctx.config);
    create_class_dirs(out, items);
    const ImageSink sink = [&out](const RenderedImage& image) { write_png(out / image.entry.path, image.image); };
    auto entries = jobs > 1 ? build_entries_parallel(ctx, items, jobs, sink) : build_entries_serial(ctx, items, sink);
    Manifest manifest = make_manifest(ctx, std::move(entries));
    write_manifest(out / kManifestName, manifest);
    fs::remove(out / kPartialMarkerName);
    return manifest;
  } catch (...) {
    remove_generated(out);
    throw;
  }
}

Manifest extract_subset(const Manifest& manifest, int train_per_class, int test_per_class) {
  if (train_per_class < 0 || test_per_class < 0) {
    throw ConfigError("subset sizes must be non-negative");
  }
  // (class, split) -> entries sorted by image index
  std::map<std::pair<std::string, Split>, std::vector<const ManifestEntry*>> groups;
  for (const ManifestEntry& e : manifest.entries) {
    groups[{e.label.class_name(), e.split}].push_back(&e);
  }
  std::map<std::pair<std::string, Split>, std::size_t> keep;
  for (const ClassLabel& label : enumerate_labels(manifest.family)) {
    for (const auto& [split, wanted] : {std::pair{Split::Train, train_per_class}, std::pair{Split::Test, test_per_class}}) {
      auto& group = groups[{label.class_name(), split}];
      if (group.size() < static_cast<std::size_t>(wanted)) {
        throw ConfigError("class " + label.class_name() + " has " + std::to_string(group.size()) + " " +
                          std::string(to_string(split)) + " images, " + std::to_string(wanted) + " requested");
      }
      std::stable_sort(group.begin(), group.end(),
                       [](const ManifestEntry* a, const ManifestEntry* b) { return a->index < b->index; });
      group.resize(static_cast<std::size_t>(wanted));
    }
  }

  Manifest subset = manifest;
  subset.train_per_class = train_per_class;
  subset.test_per_class = test_per_class;
  subset.entries.clear();
  for (const ManifestEntry& e : manifest.entries) {
    const auto& group = groups[{e.label.class_name(), e.split}];
    if (std::find(group.begin(), group.end(), &e) != group.end()) {
      subset.entries.push_back(e);
    }
  }
  return subset;
}

Manifest subset_dataset(const fs::path& in, const fs::path& out, int train_per_class, int test_per_class) {
  if (!fs::is_directory(in)) {
    throw IoError("dataset directory " + in.string() + " does not exist");
  }
  const Manifest source = read_manifest(in / kManifestName);
  Manifest subset = extract_subset(source, train_per_class, test_per_class);

  prepare_output_dir(out);
  write_file(out / kPartialMarkerName, {});
  try {
    for (const char* aux : {kMaskCopyName, kRegionMapCopyName}) {
      if (fs::exists(in / aux)) {
        copy_into(in / aux, out / aux);
      }
    }
    std::error_code ec;
    for (const ManifestEntry& e : subset.entries) {
      fs::create_directories((out / e.path).parent_path(), ec);
      copy_into(in / e.path, out / e.path);
    }
    write_manifest(out / kManifestName, subset);
    fs::remove(out / kPartialMarkerName);
  } catch (...) {
    remove_generated(out);
    throw;
  }
  return subset;
}

Rgba partition_palette(int region) noexcept {
  static constexpr Rgba kPalette[kRegionCount] = {
      {230, 25, 75, 255},  {60, 180, 75, 255},   {255, 225, 25, 255}, {0, 130, 200, 255},
      {245, 130, 48, 255}, {145, 30, 180, 255},  {70, 240, 240, 255}, {240, 50, 230, 255},
      {210, 245, 60, 255}, {250, 190, 212, 255}, {0, 128, 128, 255},  {170, 110, 40, 255},
  };
  return kPalette[std::clamp(region, 0, kRegionCount - 1)];
}

Canvas partition_image(const RegionPartition& partition) {
  Canvas image(partition.width(), partition.height(), kWhite);
  for (int y = 0; y < partition.height(); ++y) {
    for (int x = 0; x < partition.width(); ++x) {
      const int region = partition.region_at(x, y);
      if (region != RegionPartition::kOutside) {
        image.at(x, y) = partition_palette(region);
      }
    }
  }
  return image;
}

Canvas region_map_image(const RegionPartition& partition) {
  Canvas image(partition.width(), partition.height(), kBlack);
  for (int y = 0; y < partition.height(); ++y) {
    for (int x = 0; x < partition.width(); ++x) {
      const int region = partition.region_at(x, y);
      if (region != RegionPartition::kOutside) {
        const std::uint8_t g = region_gray_level(region);
        image.at(x, y) = Rgba{g, g, g, 255};
      }
    }
  }
  return image;
}

}  // namespace bms
