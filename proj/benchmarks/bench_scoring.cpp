#include <benchmark/benchmark.h>

#include "motionfeas/fixtures.h"
#include "motionfeas/reward.h"

using namespace motionfeas;

static void BM_ScoreSkeleton(benchmark::State& state) {
  const auto doc = fixtures::swaying(3, 5, static_cast<std::size_t>(state.range(0)));
  const BodyModel body = body_for_document(doc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_trajectory(doc.trajectory, body, nullptr).r_motion);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreSkeleton)->Arg(24)->Arg(120)->Arg(600);

// Skeleton motion plus a body-sized closed surface on every frame.
static void BM_ScoreWithMesh(benchmark::State& state) {
  const auto frames = static_cast<std::size_t>(state.range(0));
  auto doc = fixtures::swaying(3, 5, frames);
  doc.mesh = fixtures::sphere(103, 102, 0.5, frames);
  doc.foot_vertex_sets.reset();
  const BodyModel body = body_for_document(doc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_trajectory(doc.trajectory, body, &*doc.mesh).r_motion);
  }
}
BENCHMARK(BM_ScoreWithMesh)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
