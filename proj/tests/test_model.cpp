#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "freqcast/model.hpp"
#include "test_util.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

using namespace freqcast;

namespace {

// Parameter-space loss for finite differences over model parameters.
double paramLoss(ForecastModel& model, const std::vector<double>& params,
                 const SeriesMatrix& input, const SeriesMatrix& label,
                 const LossConfig& cfg) {
	const std::vector<double> saved = model.params();
	model.params() = params;
	const double value = combinedLoss(model.forward(input), label, cfg).value;
	model.params() = saved;
	return value;
}

RawSeries sineSeries(std::size_t n, std::size_t d, double freq, double noiseSd,
                     std::uint64_t seed) {
	return synthSines({freq}, {1.0}, noiseSd, n, d, seed);
}

} // namespace

TEST_CASE("zero-initialized LinearDF broadcasts its (zero) bias") {
	LinearDF model(4, 3, 2, 0);
	std::fill(model.params().begin(), model.params().end(), 0.0);
	const SeriesMatrix out = model.forward(testutil::randomMatrix(4, 2, 1));
	for (double v : out.data()) CHECK(v == 0.0);
}

TEST_CASE("selector weights implement a persistence forecast") {
	const std::size_t h = 5, t = 3, d = 2;
	LinearDF model(h, t, d, 0);
	std::fill(model.params().begin(), model.params().end(), 0.0);
	for (std::size_t step = 0; step < t; ++step) model.weight(h - 1, step) = 1.0;
	const SeriesMatrix input = testutil::randomMatrix(h, d, 2);
	const SeriesMatrix out = model.forward(input);
	for (std::size_t step = 0; step < t; ++step) {
		for (std::size_t c = 0; c < d; ++c) {
			CHECK(out(step, c) == doctest::Approx(input(h - 1, c)).epsilon(1e-15));
		}
	}
}

TEST_CASE("MlpDF forward matches a straight-line recomputation") {
	const std::size_t h = 4, t = 3, d = 2, hidden = 6;
	MlpDF model(h, t, d, hidden, 7);
	const SeriesMatrix input = testutil::randomMatrix(h, d, 8);
	const SeriesMatrix out = model.forward(input);

	const std::vector<double>& p = model.params();
	const std::size_t in = h * d, outDim = t * d;
	const std::size_t b1 = in * hidden, w2 = b1 + hidden, b2 = w2 + hidden * outDim;
	for (std::size_t k = 0; k < outDim; ++k) {
		double acc = p[b2 + k];
		for (std::size_t j = 0; j < hidden; ++j) {
			double pre = p[b1 + j];
			for (std::size_t i = 0; i < in; ++i) pre += p[i * hidden + j] * input.data()[i];
			acc += p[w2 + j * outDim + k] * std::tanh(pre);
		}
		CHECK(std::abs(out.data()[k] - acc) < 1e-12);
	}
}

TEST_CASE("forward rejects mismatched input shapes") {
	LinearDF model(4, 3, 2, 0);
	CHECK_THROWS(model.forward(RealMatrix(5, 2)));
	MlpDF mlp(4, 3, 2, 8, 0);
	CHECK_THROWS(mlp.forward(RealMatrix(4, 3)));
}

TEST_CASE("perfect fit is a stationary point of the temporal loss") {
	LinearDF model(4, 3, 2, 3);
	const SeriesMatrix input = testutil::randomMatrix(4, 2, 4);
	const SeriesMatrix label = model.forward(input);
	LossConfig cfg;
	const LossValueGrad lv = combinedLoss(model.forward(input), label, cfg);
	const std::vector<double> grad = model.backward(input, lv.grad);
	for (double g : grad) CHECK(g == 0.0);
}

TEST_CASE("LinearDF parameter gradients match finite differences (alpha 0)") {
	LinearDF model(5, 4, 2, 11);
	const SeriesMatrix input = testutil::randomMatrix(5, 2, 12);
	const SeriesMatrix label = testutil::randomMatrix(4, 2, 13);
	LossConfig cfg;
	const LossValueGrad lv = combinedLoss(model.forward(input), label, cfg);
	const std::vector<double> analytic = model.backward(input, lv.grad);
	const auto fd = testutil::finiteDiff(
		[&](const std::vector<double>& p) { return paramLoss(model, p, input, label, cfg); },
		model.params());
	CHECK(testutil::gradClose(analytic, fd, 1e-4, 1e-6));
}

TEST_CASE("MlpDF parameter gradients match finite differences (alpha 0.8)") {
	MlpDF model(4, 6, 2, 5, 14);
	const SeriesMatrix input = testutil::randomMatrix(4, 2, 15);
	const SeriesMatrix label = testutil::randomMatrix(6, 2, 16);
	LossConfig cfg;
	cfg.alpha = 0.8;
	const LossValueGrad lv = combinedLoss(model.forward(input), label, cfg);
	const std::vector<double> analytic = model.backward(input, lv.grad);
	const auto fd = testutil::finiteDiff(
		[&](const std::vector<double>& p) { return paramLoss(model, p, input, label, cfg); },
		model.params());
	CHECK(testutil::gradClose(analytic, fd, 2e-4, 1e-6));
}

TEST_CASE("per-channel LinearDF gradients match finite differences") {
	LinearDF model(4, 3, 3, 17, true);
	const SeriesMatrix input = testutil::randomMatrix(4, 3, 18);
	const SeriesMatrix label = testutil::randomMatrix(3, 3, 19);
	LossConfig cfg;
	cfg.alpha = 0.5;
	const LossValueGrad lv = combinedLoss(model.forward(input), label, cfg);
	const std::vector<double> analytic = model.backward(input, lv.grad);
	const auto fd = testutil::finiteDiff(
		[&](const std::vector<double>& p) { return paramLoss(model, p, input, label, cfg); },
		model.params());
	CHECK(testutil::gradClose(analytic, fd, 2e-4, 1e-6));
}

TEST_CASE("Adam: zero gradient leaves parameters unchanged") {
	AdamState state(3, 1e-3);
	std::vector<double> params{1.0, -2.0, 0.5};
	const std::vector<double> saved = params;
	adamStep(state, params, {0.0, 0.0, 0.0});
	CHECK(params == saved);
}

TEST_CASE("Adam: first-step magnitude is bounded by the learning rate") {
	AdamState state(2, 1e-2);
	std::vector<double> params{0.0, 0.0};
	adamStep(state, params, {0.3, -1000.0});
	for (double p : params) CHECK(std::abs(p) <= 1e-2 * (1.0 + 1e-6));
	CHECK(std::abs(params[1] - 1e-2) < 1e-6); // pushes against the gradient sign
}

TEST_CASE("Adam drives a scalar quadratic toward its minimum") {
	AdamState state(1, 1e-1);
	std::vector<double> x{1.0};
	for (int i = 0; i < 100; ++i) adamStep(state, x, {2.0 * x[0]});
	CHECK(std::abs(x[0]) < 0.05);
}

TEST_CASE("fit drives a noiseless linear system to near-zero loss") {
	// A noiseless sinusoid satisfies a linear two-term recurrence, so its
	// labels are an exact linear function of the input window.
	const RawSeries series = sineSeries(400, 1, 1.0 / 16.0, 0.0, 0);
	const WindowedDataset train(series.values, 8, 4);
	const WindowedDataset val(series.values, 8, 4);
	LinearDF model(8, 4, 1, 5);
	TrainConfig cfg;
	cfg.lr = 5e-2;
	cfg.seed = 5;
	const TrainReport report = fit(model, train, val, cfg);
	CHECK(report.trainLoss.size() <= 10);
	CHECK(report.trainLoss.back() < 1e-4);
}

TEST_CASE("constant validation stream triggers the patience stop") {
	const RawSeries series = sineSeries(200, 1, 1.0 / 16.0, 0.1, 1);
	const WindowedDataset data(series.values, 8, 4);
	LinearDF model(8, 4, 1, 2);
	TrainConfig cfg;
	cfg.lr = 0.0; // parameters never move, so validation MSE never improves
	const TrainReport report = fit(model, data, data, cfg);
	CHECK(report.stoppedEarly);
	CHECK(report.valMse.size() == cfg.patience + 1);
	CHECK(report.bestEpoch == 0);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
	const RawSeries series = synthSinesAr({1.0 / 12.0}, {1.0}, 0.7, 0.3, 300, 2, 3);
	const WindowedDataset data(series.values, 12, 6);
	TrainConfig cfg;
	cfg.seed = 77;
	cfg.loss.alpha = 0.5;

	LinearDF a(12, 6, 2, 9), b(12, 6, 2, 9);
	const TrainReport ra = fit(a, data, data, cfg);
	const TrainReport rb = fit(b, data, data, cfg);
	CHECK(ra.trainLoss == rb.trainLoss);
	CHECK(ra.valMse == rb.valMse);
	CHECK(ra.bestEpoch == rb.bestEpoch);
	CHECK(a.params() == b.params());
}

TEST_CASE("fit validates its configuration and inputs") {
	const RawSeries series = sineSeries(100, 1, 0.1, 0.1, 4);
	const WindowedDataset data(series.values, 8, 4);
	LinearDF model(8, 4, 1, 0);
	TrainConfig bad;
	bad.patience = 10; // not smaller than maxEpochs
	CHECK_THROWS(fit(model, data, data, bad));
}

TEST_CASE("checkpoints round-trip bit-exactly") {
	const std::string path = "checkpoint_roundtrip.bin";
	{
		LinearDF model(6, 5, 3, 21, true);
		saveCheckpoint(model, path);
		const auto loaded = loadCheckpoint(path);
		CHECK(loaded->kind() == "linear_pc");
		CHECK(loaded->inputLength() == 6);
		CHECK(loaded->labelLength() == 5);
		CHECK(loaded->dims() == 3);
		CHECK(loaded->params() == model.params());
	}
	{
		MlpDF model(4, 3, 2, 17, 22);
		saveCheckpoint(model, path);
		const auto loaded = loadCheckpoint(path);
		CHECK(loaded->kind() == "mlp");
		CHECK(loaded->params() == model.params());
		const SeriesMatrix input = testutil::randomMatrix(4, 2, 23);
		CHECK(loaded->forward(input).data() == model.forward(input).data());
	}
	std::remove(path.c_str());
	CHECK_THROWS(loadCheckpoint(path));
}

TEST_CASE("evaluateMse equals a direct average over windows") {
	const RawSeries series = sineSeries(120, 2, 0.05, 0.2, 6);
	const WindowedDataset data(series.values, 10, 5);
	LinearDF model(10, 5, 2, 24);
	double sum = 0.0;
	std::size_t elems = 0;
	for (std::size_t w = 0; w < data.count(); ++w) {
		const SeriesMatrix yhat = model.forward(data.input(w));
		const SeriesMatrix y = data.label(w);
		for (std::size_t i = 0; i < y.size(); ++i) {
			const double r = yhat.data()[i] - y.data()[i];
			sum += r * r;
		}
		elems += y.size();
	}
	CHECK(evaluateMse(model, data) ==
	      doctest::Approx(sum / static_cast<double>(elems)).epsilon(1e-15));
}
