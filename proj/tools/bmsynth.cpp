// bmsynth: build, subset, validate and inspect synthetic body-map datasets.
//
// Exit codes: 0 success, 2 configuration error, 3 generation failure,
// 4 I/O error, 5 validation found violations.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bodymap_synth/build.hpp"
#include "bodymap_synth/config.hpp"
#include "bodymap_synth/error.hpp"
#include "bodymap_synth/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kGeneration = 3,
  kIo = 4,
  kViolations = 5,
};

std::pair<int, int> parse_pair(const std::string& text, char sep, const char* what) {
  const std::regex pattern(std::string(R"((\d+))") + sep + R"((\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw bms::ConfigError(std::string(what) + " must look like N" + sep + "M, got '" + text + "'");
  }
  try {
    return {std::stoi(m[1].str()), std::stoi(m[2].str())};
  } catch (const std::out_of_range&) {
    throw bms::ConfigError(std::string(what) + " out of range: '" + text + "'");
  }
}

struct GenerateArgs {
  std::string family;
  std::string out;
  std::uint64_t seed = 0;
  int per_class_train = 0;
  int per_class_test = 0;
  std::string size;
  int margin = bms::kDefaultMargin;
  std::string mask;
  std::string region_map;
  std::string grid;
  std::string template_file;
  std::string scenario;
  std::string config;
  int jobs = 1;
};

struct SubsetArgs {
  std::string in;
  std::string out;
  int train = 5;
  int test = 4;
};

struct ValidateArgs {
  std::string in;
  int jobs = 1;
};

struct RegionsArgs {
  std::string out;
  std::string size = "1000x800";
  int margin = bms::kDefaultMargin;
  std::string mask;
  std::string region_map;
  std::string grid = "3x4";
};

int run_generate(const GenerateArgs& a, const CLI::App& cmd, bool porcelain) {
  const auto given = [&cmd](const char* name) { return cmd.get_option(name)->count() > 0; };

  bms::DatasetConfig config = bms::default_config(bms::parse_family(a.family));
  std::optional<fs::path> out;
  int jobs = 1;
  if (given("--config")) {
    std::ifstream in(a.config);
    if (!in) {
      throw bms::IoError("cannot open config file " + a.config);
    }
    json doc;
    try {
      doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      throw bms::ConfigError(a.config + ": " + e.what());
    }
    const auto extras = bms::apply_config_json(doc, config, fs::path(a.config).parent_path());
    out = extras.out;
    jobs = extras.jobs.value_or(jobs);
  }

  if (given("--out")) out = a.out;
  if (given("--jobs")) jobs = a.jobs;
  if (given("--seed")) config.master_seed = a.seed;
  if (given("--per-class-train")) config.per_class_train = a.per_class_train;
  if (given("--per-class-test")) config.per_class_test = a.per_class_test;
  if (given("--size")) std::tie(config.width, config.height) = parse_pair(a.size, 'x', "--size");
  if (given("--margin")) config.margin = a.margin;
  if (given("--mask")) config.mask_file = a.mask;
  if (given("--region-map")) config.region_map_file = a.region_map;
  if (given("--grid")) std::tie(config.grid_rows, config.grid_cols) = parse_pair(a.grid, 'x', "--grid");
  if (given("--template")) config.template_file = a.template_file;
  if (given("--scenario")) {
    config.scenario_file = a.scenario;
    config.scenario.reset();
  }
  if (!out) {
    throw bms::ConfigError("--out is required (flag or config file)");
  }
  if (jobs < 1) {
    throw bms::ConfigError("--jobs must be at least 1");
  }

  const bms::BuildContext context = bms::make_context(config);
  const bms::Manifest manifest = bms::generate_dataset(context, *out, jobs);

  const auto classes = bms::enumerate_labels(config.family).size();
  const std::size_t train = classes * static_cast<std::size_t>(config.per_class_train);
  const std::size_t test = classes * static_cast<std::size_t>(config.per_class_test);
  if (porcelain) {
    std::cout << json{{"command", "generate"},
                      {"family", a.family},
                      {"out", out->string()},
                      {"images", manifest.entries.size()},
                      {"train", train},
                      {"test", test},
                      {"classes", classes},
                      {"config_digest", manifest.config_digest}}
                     .dump()
              << "\n";
  } else {
    std::cout << "generated " << a.family << ": " << manifest.entries.size() << " images (" << train << " train, "
              << test << " test) in " << classes << " classes, digest " << manifest.config_digest << "\n";
  }
  return kOk;
}

int run_subset(const SubsetArgs& a, bool porcelain) {
  const bms::Manifest subset = bms::subset_dataset(a.in, a.out, a.train, a.test);
  std::size_t train = 0;
  for (const auto& e : subset.entries) {
    train += e.split == bms::Split::Train ? 1 : 0;
  }
  const std::size_t test = subset.entries.size() - train;
  if (porcelain) {
    std::cout << json{{"command", "subset"}, {"out", a.out}, {"images", subset.entries.size()},
                      {"train", train},      {"test", test}, {"config_digest", subset.config_digest}}
                     .dump()
              << "\n";
  } else {
    std::cout << "subset: " << subset.entries.size() << " images (" << train << " train, " << test << " test) -> "
              << a.out << "\n";
  }
  return kOk;
}

int run_validate(const ValidateArgs& a, bool porcelain) {
  if (a.jobs < 1) {
    throw bms::ConfigError("--jobs must be at least 1");
  }
  const bms::ValidationReport report = bms::validate_dataset(a.in, a.jobs);
  for (const auto& v : report.violations) {
    std::cout << "violation";
    if (v.entry) {
      std::cout << " entry=" << *v.entry;
    }
    std::cout << " kind=" << bms::to_string(v.kind) << " " << v.message << "\n";
  }
  if (porcelain) {
    std::cout << json{{"command", "validate"},
                      {"entries", report.entries_checked},
                      {"violations", report.violations.size()},
                      {"ok", report.ok()}}
                     .dump()
              << "\n";
  } else {
    std::cout << "validated " << report.entries_checked << " entries: " << report.violations.size()
              << " violation(s)\n";
  }
  return report.ok() ? kOk : kViolations;
}

int run_regions(const RegionsArgs& a, const CLI::App& cmd, bool porcelain) {
  const auto [width, height] = parse_pair(a.size, 'x', "--size");
  const auto [rows, cols] = parse_pair(a.grid, 'x', "--grid");
  const bool has_mask = cmd.get_option("--mask")->count() > 0;
  const bms::BodyMask mask = has_mask ? bms::load_mask(a.mask) : bms::default_mask(width, height, a.margin);
  const bms::RegionPartition partition = cmd.get_option("--region-map")->count() > 0
                                             ? bms::load_partition(mask, a.region_map)
                                             : bms::build_partition(mask, rows, cols);
  bms::write_png(a.out, bms::partition_image(partition));
  if (porcelain) {
    std::cout << json{{"command", "regions"}, {"out", a.out}, {"width", mask.width()}, {"height", mask.height()},
                      {"regions", bms::kRegionCount}}
                     .dump()
              << "\n";
  } else {
    std::cout << "wrote " << bms::kRegionCount << "-region partition (" << mask.width() << "x" << mask.height()
              << ") to " << a.out << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic body-map dataset generator"};
  app.require_subcommand(1);
  bool porcelain = false;
  app.add_flag("--porcelain", porcelain, "Print one JSON summary line on standard output");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a dataset (basic3, regions36 or diagnoses)");
  generate->add_option("family", gen.family, "Dataset family")
      ->required()
      ->check(CLI::IsMember({"basic3", "regions36", "diagnoses"}));
  generate->add_option("--out", gen.out, "Output directory");
  generate->add_option("--seed", gen.seed, "Master seed (64-bit)");
  generate->add_option("--per-class-train", gen.per_class_train, "Training images per class");
  generate->add_option("--per-class-test", gen.per_class_test, "Test images per class");
  generate->add_option("--size", gen.size, "Canvas size WxH (default 1000x800)");
  generate->add_option("--margin", gen.margin, "Inset of the default rectangular mask");
  generate->add_option("--mask", gen.mask, "Mask PNG (inside = luminance > 127)");
  generate->add_option("--region-map", gen.region_map, "Region-map PNG (gray levels 10, 30, ..., 230)");
  generate->add_option("--grid", gen.grid, "Region grid RxC with R*C = 12 (default 3x4)");
  generate->add_option("--template", gen.template_file, "Background PNG of the canvas size");
  generate->add_option("--scenario", gen.scenario, "Scenario JSON for the diagnoses family");
  generate->add_option("--config", gen.config, "JSON config file; flags override its values");
  generate->add_option("--jobs", gen.jobs, "Worker threads (output is identical for any value)");

  SubsetArgs sub;
  auto* subset = app.add_subcommand("subset", "Copy the first N train / M test images of every class");
  subset->add_option("--in", sub.in, "Source dataset")->required();
  subset->add_option("--out", sub.out, "Destination directory")->required();
  subset->add_option("--train-per-class", sub.train, "Training images per class (default 5)");
  subset->add_option("--test-per-class", sub.test, "Test images per class (default 4)");

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Check a dataset against its manifest");
  validate->add_option("--in", val.in, "Dataset directory")->required();
  validate->add_option("--jobs", val.jobs, "Worker threads");

  RegionsArgs reg;
  auto* regions = app.add_subcommand("regions", "Render the 12-region partition as a PNG");
  regions->add_option("--out", reg.out, "Output PNG")->required();
  regions->add_option("--size", reg.size, "Canvas size WxH (default 1000x800)");
  regions->add_option("--margin", reg.margin, "Inset of the default rectangular mask");
  regions->add_option("--mask", reg.mask, "Mask PNG");
  regions->add_option("--region-map", reg.region_map, "Region-map PNG instead of a grid");
  regions->add_option("--grid", reg.grid, "Region grid RxC with R*C = 12 (default 3x4)");

  for (auto* sc : {generate, subset, validate, regions}) {
    sc->add_flag("--porcelain", porcelain, "Print one JSON summary line on standard output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (generate->parsed()) {
      return run_generate(gen, *generate, porcelain);
    }
    if (subset->parsed()) {
      return run_subset(sub, porcelain);
    }
    if (validate->parsed()) {
      return run_validate(val, porcelain);
    }
    return run_regions(reg, *regions, porcelain);
  } catch (const bms::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const bms::GenerationFailed& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kGeneration;
  } catch (const bms::SamplingExhausted& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kGeneration;
  } catch (const bms::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const bms::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
