#include <benchmark/benchmark.h>

#include <cmath>

#include "motionfeas/fixtures.h"
#include "motionfeas/geometry.h"

using namespace motionfeas;

// Closed surface with the face count of an SMPL-X body mesh.
static MeshSequence body_sized_surface() { return fixtures::sphere(103, 102); }

static void BM_BvhBuild(benchmark::State& state) {
  const auto mesh = body_sized_surface();
  for (auto _ : state) {
    auto bvh = TriangleBvh::build(mesh.faces, mesh.vertex_frames[0]);
    benchmark::DoNotOptimize(bvh.nodes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(mesh.faces.size()));
}
BENCHMARK(BM_BvhBuild)->Unit(benchmark::kMillisecond);

static void BM_SelfIntersectionFrame(benchmark::State& state) {
  const auto mesh = body_sized_surface();
  const auto& v = mesh.vertex_frames[0];
  for (auto _ : state) {
    const auto bvh = TriangleBvh::build(mesh.faces, v);
    benchmark::DoNotOptimize(intersecting_pairs(bvh, mesh.faces, v));
  }
}
BENCHMARK(BM_SelfIntersectionFrame)->Unit(benchmark::kMillisecond);

// Random faces spanning the whole vertex cloud: the pathological case where
// most boxes overlap.
static void BM_SelfIntersectionRandomFaces(benchmark::State& state) {
  const auto doc = fixtures::smplx_sized(1);
  MeshSequence mesh = *doc.mesh;
  mesh.faces.resize(static_cast<std::size_t>(state.range(0)));
  const auto& v = mesh.vertex_frames[0];
  for (auto _ : state) {
    const auto bvh = TriangleBvh::build(mesh.faces, v);
    benchmark::DoNotOptimize(intersecting_pairs(bvh, mesh.faces, v));
  }
}
BENCHMARK(BM_SelfIntersectionRandomFaces)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SelfPenetrationRate(benchmark::State& state) {
  const auto mesh = fixtures::crossing_pairs(static_cast<std::size_t>(state.range(0)), 5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(self_penetration_rate(mesh).mean);
}
BENCHMARK(BM_SelfPenetrationRate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ConvexHull(benchmark::State& state) {
  std::vector<Vec2> pts;
  for (int i = 0; i < state.range(0); ++i) {
    pts.emplace_back(std::cos(i * 2.39996), std::sin(i * 2.39996) * (1 + 0.001 * i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull_2d(pts).size());
}
BENCHMARK(BM_ConvexHull)->Arg(4)->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
