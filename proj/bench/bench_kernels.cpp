// Serial reference vs OpenMP kernels on random classes.

#include <benchmark/benchmark.h>

#include <map>
#include <utility>

#include "pcl/disambiguation.hpp"
#include "pcl/experiments.hpp"
#include "pcl/kernels.hpp"

namespace {

const pcl::PartialConceptClass& bench_class(std::size_t n, std::size_t size) {
  static std::map<std::pair<std::size_t, std::size_t>, pcl::PartialConceptClass> cache;
  auto key = std::make_pair(n, size);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, pcl::experiments::generate_random_class(n, size, 0.1, 31).cls).first;
  return it->second;
}

void BM_ShatteredSerial(benchmark::State& st) {
  const auto& c = bench_class(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(pcl::kernels::serial::shattered_sets(c.concepts(), c.domain_size()));
}

void BM_ShatteredParallel(benchmark::State& st) {
  const auto& c = bench_class(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(pcl::kernels::parallel::shattered_sets(c.concepts(), c.domain_size()));
}

void BM_MajoritySerial(benchmark::State& st) {
  const auto& c = bench_class(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(pcl::vc_majority_disambiguate(c, pcl::Parallelism::Serial));
}

void BM_MajorityParallel(benchmark::State& st) {
  const auto& c = bench_class(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(pcl::vc_majority_disambiguate(c, pcl::Parallelism::Parallel));
}

}  // namespace

BENCHMARK(BM_ShatteredSerial)->Args({14, 512})->Args({18, 4096})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShatteredParallel)->Args({14, 512})->Args({18, 4096})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MajoritySerial)->Args({10, 128})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MajorityParallel)->Args({10, 128})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
