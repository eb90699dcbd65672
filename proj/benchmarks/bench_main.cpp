#include "freqcast/data.hpp"
#include "freqcast/loss.hpp"
#include "freqcast/model.hpp"
#include "freqcast/rng.hpp"
#include "freqcast/transform.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace freqcast;

RealMatrix randomMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
	Rng64 rng(seed);
	RealMatrix m(rows, cols);
	for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.nextNormal();
	return m;
}

void BM_DftForward(benchmark::State& state) {
	const std::size_t t = static_cast<std::size_t>(state.range(0));
	const RealMatrix y = randomMatrix(t, 7, 42);
	for (auto _ : state) {
		benchmark::DoNotOptimize(dftForward(y, TransformAxis::Time));
	}
}
BENCHMARK(BM_DftForward)->Arg(96)->Arg(192)->Arg(336)->Arg(720);

void BM_FrequencyLoss(benchmark::State& state) {
	const std::size_t t = static_cast<std::size_t>(state.range(0));
	const RealMatrix y = randomMatrix(t, 7, 1);
	const RealMatrix yhat = randomMatrix(t, 7, 2);
	LossConfig cfg;
	cfg.alpha = 1.0;
	for (auto _ : state) {
		benchmark::DoNotOptimize(frequencyLoss(yhat, y, cfg));
	}
}
BENCHMARK(BM_FrequencyLoss)->Arg(96)->Arg(336)->Arg(720);

void BM_CombinedLoss(benchmark::State& state) {
	const RealMatrix y = randomMatrix(96, 7, 1);
	const RealMatrix yhat = randomMatrix(96, 7, 2);
	LossConfig cfg;
	cfg.alpha = state.range(0) / 10.0;
	for (auto _ : state) {
		benchmark::DoNotOptimize(combinedLoss(yhat, y, cfg));
	}
}
BENCHMARK(BM_CombinedLoss)->Arg(0)->Arg(5)->Arg(10);

void BM_TrainEpoch(benchmark::State& state) {
	const RawSeries series = synthSinesAr({1.0 / 24.0}, {1.0}, 0.7, 0.3, 600, 3, 9);
	const WindowedDataset train(series.values, 96, 48);
	const WindowedDataset val(series.values, 96, 48);
	for (auto _ : state) {
		LinearDF model(96, 48, 3, 7);
		TrainConfig cfg;
		cfg.maxEpochs = 1;
		cfg.patience = 1;
		cfg.loss.alpha = 0.5;
		benchmark::DoNotOptimize(fit(model, train, val, cfg));
	}
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
