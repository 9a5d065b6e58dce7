#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "motionfeas/batch.h"
#include "motionfeas/fixtures.h"

using namespace motionfeas;

namespace {

struct Corpus {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;

  Corpus() {
    dir = std::filesystem::temp_directory_path() /
          ("motionfeas-bench-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < 64; ++i) {
      write_motion_file(dir / ("m" + std::to_string(i) + ".mft"), fixtures::swaying(i, 8, 96),
                        true);
    }
    files = list_motion_files(dir);
  }
  ~Corpus() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

}  // namespace

static void BM_Batch(benchmark::State& state) {
  const auto& c = corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(c.files, {}, static_cast<int>(state.range(0))).size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.files.size()));
}
BENCHMARK(BM_Batch)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
