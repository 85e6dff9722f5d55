#include <benchmark/benchmark.h>

#include <random>

#include "rhi/features.hpp"
#include "rhi/pair_assignment.hpp"
#include "rhi/relation_descriptor.hpp"
#include "test_support.hpp"

namespace {

using namespace rhi;

Segment bench_segment(int frames, bool depth) {
  std::mt19937_64 rng(17);
  Segment seg = testing::random_segment(rng, {"A", "B"}, 0, frames);
  if (depth) {
    for (auto& [p, t] : seg.tracks) {
      for (std::size_t f = 0; f < t.joints.size(); ++f) t.depth.push_back(testing::random_patch(rng, 80, 220));
    }
  }
  return seg;
}

void BM_JointRelation(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = testing::random_joints(rng, 25, 0, "A");
  const auto b = testing::random_joints(rng, 25, 0, "B");
  for (auto _ : state) benchmark::DoNotOptimize(joint_relation_matrix(a, b));
}
BENCHMARK(BM_JointRelation);

void BM_DepthGrid(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto patch = testing::random_patch(rng, 80, 220);
  const auto pattern = make_pixel_pair_pattern(64, 0.25, 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_depth_grid(patch, pattern, DepthGridConfig{}, 0, "A"));
}
BENCHMARK(BM_DepthGrid);

// Per-window cost of a full sliding-window pass over one cross pair.
void BM_ExtractWindows(benchmark::State& state) {
  PipelineConfig cfg;
  const bool depth = state.range(0) != 0;
  if (depth) cfg.descriptor = DescriptorKind::kDepth;
  const int windows = 200;
  const Segment seg = bench_segment(windows + cfg.window, depth);
  const FeatureExtractor ex(cfg);
  const CandidatePair pair("A", "B");
  for (auto _ : state) benchmark::DoNotOptimize(ex.extract(seg, pair));
  state.SetItemsProcessed(state.iterations() * windows);
  state.SetLabel(depth ? "depth" : "joints");
}
BENCHMARK(BM_ExtractWindows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveExact(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<PersonId> persons;
  for (int i = 0; i < state.range(0); ++i) persons.push_back("p" + std::to_string(i));
  VoteMatrix v(13, enumerate_pairs(persons));
  for (auto& x : v.votes) x = static_cast<std::int64_t>(rng() % 50);
  const auto problem = make_problem(v, 0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(problem));
}
BENCHMARK(BM_SolveExact)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
