#include <benchmark/benchmark.h>

#include "eigenfeat/cnn/network.hpp"
#include "eigenfeat/cnn/ops.hpp"
#include "eigenfeat/fingerprint.hpp"
#include "eigenfeat/gradient.hpp"
#include "eigenfeat/rng.hpp"
#include "eigenfeat/svd.hpp"
#include "oracles.hpp"

using namespace eigenfeat;

namespace {

// Args: channels, filters, side, kernel.
void BM_ConvForward(benchmark::State& state) {
  Rng rng(1);
  const auto c = static_cast<std::size_t>(state.range(0)), f = static_cast<std::size_t>(state.range(1));
  const auto side = static_cast<std::size_t>(state.range(2)), k = static_cast<std::size_t>(state.range(3));
  const Tensor x = oracle::random_tensor(rng, {8, c, side, side});
  const Tensor w = oracle::random_tensor(rng, {f, c, k, k});
  const std::vector<double> b(f, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(cnn::conv_forward(x, w, b, k / 2, 1));
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_ConvForward)->Args({1, 32, 64, 5})->Args({32, 32, 32, 3})->Args({64, 64, 16, 3})->Unit(benchmark::kMillisecond);

void BM_ConvBackward(benchmark::State& state) {
  Rng rng(2);
  const auto c = static_cast<std::size_t>(state.range(0)), f = static_cast<std::size_t>(state.range(1));
  const auto side = static_cast<std::size_t>(state.range(2)), k = static_cast<std::size_t>(state.range(3));
  const Tensor x = oracle::random_tensor(rng, {8, c, side, side});
  const Tensor w = oracle::random_tensor(rng, {f, c, k, k});
  const Tensor g = oracle::random_tensor(rng, {8, f, side, side});
  for (auto _ : state) benchmark::DoNotOptimize(cnn::conv_backward(x, w, g, k / 2, 1));
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_ConvBackward)->Args({1, 32, 64, 5})->Args({32, 32, 32, 3})->Args({64, 64, 16, 3})->Unit(benchmark::kMillisecond);

// Feature matrices shaped like a layer's flattened maps: pixels x channels.
void BM_SvdViaGram(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0)), m = static_cast<std::size_t>(state.range(1));
  Matrix x(n, m);
  for (auto& v : x.values()) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(svd_via_gram(x));
}
BENCHMARK(BM_SvdViaGram)->Args({4096, 32})->Args({17161, 128})->Args({1024, 64})->Unit(benchmark::kMillisecond);

void BM_Sobel(benchmark::State& state) {
  Rng rng(4);
  const auto side = static_cast<std::size_t>(state.range(0));
  const GrayImage img = oracle::random_image(rng, side, side);
  for (auto _ : state) benchmark::DoNotOptimize(gradient_magnitude(gradient_sobel(img)));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_Sobel)->Arg(64)->Arg(266)->Arg(1024);

void BM_EigenFingerprintDesk(benchmark::State& state) {
  Rng rng(5);
  cnn::Network net(cnn::desk_config());
  net.initialize(1);
  const GrayImage img = oracle::random_image(rng, 64, 64);
  const std::size_t layer = cnn::relu_layer(net.config(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_fingerprint(net, img, layer));
}
BENCHMARK(BM_EigenFingerprintDesk)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
