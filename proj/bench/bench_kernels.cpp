// Serial reference vs OpenMP kernels for image building and entry checks.
// Run with e.g. `bms_bench --benchmark_min_time=1`.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <thread>

#include <unistd.h>

#include "bodymap_synth/build.hpp"
#include "bodymap_synth/validate.hpp"

namespace fs = std::filesystem;
using namespace bms;

namespace {

DatasetConfig bench_config() {
  DatasetConfig c = default_config(Family::Region36);
  c.master_seed = 42;
  c.per_class_train = 2;
  c.per_class_test = 1;
  return c;
}

const BuildContext& context() {
  static const BuildContext ctx = make_context(bench_config());
  return ctx;
}

const std::vector<WorkItem>& items() {
  static const std::vector<WorkItem> v = plan_work(context().config);
  return v;
}

const ImageSink kDiscard = [](const RenderedImage&) {};

void BM_build_serial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_entries_serial(context(), items(), kDiscard));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items().size()));
}

void BM_build_parallel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_entries_parallel(context(), items(), jobs, kDiscard));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items().size()));
}

// A dataset on disk for the check kernels, built once per process.
struct CheckFixture {
  fs::path root;
  Manifest manifest;
  CheckContext ctx;

  static CheckFixture make() {
    const fs::path root = fs::temp_directory_path() / ("bms-bench-" + std::to_string(::getpid()));
    fs::remove_all(root);
    generate_dataset(context(), root, static_cast<int>(std::thread::hardware_concurrency()));
    Manifest m = read_manifest(root / kManifestName);
    CheckContext ctx = make_check_context(m, root);
    return {root, std::move(m), std::move(ctx)};
  }
  ~CheckFixture() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
};

CheckFixture& fixture() {
  static CheckFixture f = CheckFixture::make();
  return f;
}

void BM_check_serial(benchmark::State& state) {
  CheckFixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_entries_serial(f.ctx, f.manifest.entries));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.manifest.entries.size()));
}

void BM_check_parallel(benchmark::State& state) {
  CheckFixture& f = fixture();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_entries_parallel(f.ctx, f.manifest.entries, jobs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.manifest.entries.size()));
}

}  // namespace

BENCHMARK(BM_build_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
