#include <benchmark/benchmark.h>

#include "lakee/bench/report.hpp"
#include "lakee/crypto/suite.hpp"
#include "lakee/curve/group.hpp"
#include "lakee/random.hpp"

using namespace lakee;

namespace {

const curve::CurveProfile& profile_of(const benchmark::State& state) {
  return state.range(0) == 0 ? curve::toy_profile() : curve::ed448_profile();
}

void BM_ScalarMultGenerator(benchmark::State& state) {
  const auto& c = profile_of(state);
  SeededRandom rng(1, "bench");
  auto k = curve::Scalar::random(rng, c);
  for (auto _ : state) benchmark::DoNotOptimize(curve::scalar_mult(k, c.generator(), c));
  state.SetLabel(c.name());
}

void BM_ScalarMultVariable(benchmark::State& state) {
  const auto& c = profile_of(state);
  SeededRandom rng(2, "bench");
  auto p = curve::scalar_mult(curve::Scalar::random(rng, c), c.generator(), c);
  auto k = curve::Scalar::random(rng, c);
  for (auto _ : state) benchmark::DoNotOptimize(curve::scalar_mult(k, p, c));
  state.SetLabel(c.name());
}

void BM_PointAdd(benchmark::State& state) {
  const auto& c = profile_of(state);
  SeededRandom rng(3, "bench");
  auto p = curve::scalar_mult(curve::Scalar::random(rng, c), c.generator(), c);
  for (auto _ : state) benchmark::DoNotOptimize(curve::point_add(p, c.generator(), c));
  state.SetLabel(c.name());
}

void BM_ValidatePoint(benchmark::State& state) {
  const auto& c = profile_of(state);
  SeededRandom rng(4, "bench");
  auto p = curve::scalar_mult(curve::Scalar::random(rng, c), c.generator(), c);
  for (auto _ : state) benchmark::DoNotOptimize(curve::validate_point(p, c));
  state.SetLabel(c.name());
}

void BM_Kdf(benchmark::State& state) {
  Bytes seed(56, 0x42);
  for (auto _ : state) benchmark::DoNotOptimize(crypto::kdf(seed));
}

void BM_AeadSeal(benchmark::State& state) {
  crypto::KeyBytes k{};
  k.fill(7);
  crypto::LongTermKey key(k);
  crypto::Nonce nonce{};
  Bytes pt(static_cast<std::size_t>(state.range(0)), 0x11);
  for (auto _ : state) benchmark::DoNotOptimize(crypto::aead_seal(key, nonce, pt));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * pt.size()));
}

void BM_Handshake(benchmark::State& state) {
  const auto& c = profile_of(state);
  const bool rotate = state.range(1) != 0;
  bench::HandshakeMeasurement last;
  std::uint64_t seed = 1;
  for (auto _ : state) last = bench::measure_handshake(c, rotate, seed++);
  state.counters["ecpm"] = static_cast<double>(last.ops.ecpm);
  state.counters["ecpa"] = static_cast<double>(last.ops.ecpa);
  state.counters["aead"] = static_cast<double>(last.ops.aead_ops());
  state.counters["hashes"] = static_cast<double>(last.ops.hash_ops());
  state.counters["wire_bytes"] = static_cast<double>(last.wire_bytes);
  state.SetLabel(c.name() + (rotate ? " rotate" : ""));
}

}  // namespace

BENCHMARK(BM_ScalarMultGenerator)->Arg(0)->Arg(1);
BENCHMARK(BM_ScalarMultVariable)->Arg(0)->Arg(1);
BENCHMARK(BM_PointAdd)->Arg(0)->Arg(1);
BENCHMARK(BM_ValidatePoint)->Arg(0)->Arg(1);
BENCHMARK(BM_Kdf);
BENCHMARK(BM_AeadSeal)->Arg(26)->Arg(244);
BENCHMARK(BM_Handshake)->Args({0, 0})->Args({1, 0})->Args({1, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
