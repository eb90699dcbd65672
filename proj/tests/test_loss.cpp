#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "freqcast/loss.hpp"
#include "freqcast/transform.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace freqcast;

namespace {

// Loss value as a function of the flattened forecast, for finite differences.
std::function<double(const std::vector<double>&)> lossOf(const SeriesMatrix& y,
                                                         const LossConfig& cfg) {
	return [y, cfg](const std::vector<double>& flat) {
		SeriesMatrix yhat(y.rows(), y.cols(), flat);
		return combinedLoss(yhat, y, cfg).value;
	};
}

} // namespace

TEST_CASE("temporal loss: perfect forecast, unit offset, finite differences") {
	const RealMatrix y = testutil::randomMatrix(12, 3, 1);

	const LossValueGrad same = temporalLoss(y, y);
	CHECK(same.value == 0.0);
	for (double g : same.grad.data()) CHECK(g == 0.0);

	RealMatrix offset = y;
	for (double& v : offset.data()) v += 1.0;
	CHECK(temporalLoss(offset, y).value == doctest::Approx(1.0).epsilon(1e-12));

	const RealMatrix yhat = testutil::randomMatrix(12, 3, 2);
	const LossValueGrad lv = temporalLoss(yhat, y);
	LossConfig cfg; // alpha = 0 -> temporal
	const auto fd = testutil::finiteDiff(lossOf(y, cfg), yhat.data());
	CHECK(testutil::gradClose(lv.grad.data(), fd, 1e-6));
}

TEST_CASE("frequency loss: zero at equality, constant offset closed form") {
	const RealMatrix y = testutil::randomMatrix(16, 2, 3);
	LossConfig cfg;
	cfg.alpha = 1.0;
	CHECK(frequencyLoss(y, y, cfg).value == 0.0);

	const double c = 0.3;
	RealMatrix shifted = y;
	for (double& v : shifted.data()) v += c;
	// Only the DC bin moves, by c*sqrt(T) per column: mean over T*D bins of the
	// modulus is c/sqrt(T).
	CHECK(frequencyLoss(shifted, y, cfg).value ==
	      doctest::Approx(c / std::sqrt(16.0)).epsilon(1e-12));
}

TEST_CASE("frequency loss gradient matches finite differences (Full variant)") {
	const RealMatrix y = testutil::randomMatrix(16, 2, 4);
	const RealMatrix yhat = testutil::randomMatrix(16, 2, 5);
	LossConfig cfg;
	cfg.alpha = 1.0;
	const LossValueGrad lv = frequencyLoss(yhat, y, cfg);
	const auto fd = testutil::finiteDiff(lossOf(y, cfg), yhat.data());
	CHECK(testutil::gradClose(lv.grad.data(), fd, 1e-5));
}

TEST_CASE("frequency loss gradients: variants, axes, split-l1") {
	const RealMatrix y = testutil::randomMatrix(10, 3, 6);
	const RealMatrix yhat = testutil::randomMatrix(10, 3, 7);
	for (auto variant : {LossVariant::Full, LossVariant::AmplitudeOnly, LossVariant::PhaseOnly}) {
		for (auto axis : {TransformAxis::Time, TransformAxis::Variable, TransformAxis::Both}) {
			LossConfig cfg;
			cfg.alpha = 1.0;
			cfg.axis = axis;
			cfg.variant = variant;
			const LossValueGrad lv = frequencyLoss(yhat, y, cfg);
			const auto fd = testutil::finiteDiff(lossOf(y, cfg), yhat.data());
			CHECK_MESSAGE(testutil::gradClose(lv.grad.data(), fd, 2e-4, 1e-6),
			              "variant ", static_cast<int>(variant), " axis ",
			              static_cast<int>(axis));
		}
	}
	LossConfig split;
	split.alpha = 1.0;
	split.splitComplexL1 = true;
	const LossValueGrad lv = frequencyLoss(yhat, y, split);
	const auto fd = testutil::finiteDiff(lossOf(y, split), yhat.data());
	CHECK(testutil::gradClose(lv.grad.data(), fd, 1e-4, 1e-6));
}

TEST_CASE("polynomial-basis frequency losses and their gradients") {
	const RealMatrix y = testutil::randomMatrix(12, 2, 8);
	const RealMatrix yhat = testutil::randomMatrix(12, 2, 9);
	for (auto basis : {BasisKind::Legendre, BasisKind::Chebyshev, BasisKind::Laguerre}) {
		LossConfig cfg;
		cfg.alpha = 1.0;
		cfg.basis = basis;
		CHECK(frequencyLoss(y, y, cfg).value < 1e-12);
		const LossValueGrad lv = frequencyLoss(yhat, y, cfg);
		CHECK(lv.value > 0.0);
		const auto fd = testutil::finiteDiff(lossOf(y, cfg), yhat.data());
		CHECK_MESSAGE(testutil::gradClose(lv.grad.data(), fd, 2e-4, 1e-6),
		              "basis ", static_cast<int>(basis));
	}
	LossConfig bad;
	bad.basis = BasisKind::Legendre;
	bad.variant = LossVariant::AmplitudeOnly;
	CHECK_THROWS(frequencyLoss(yhat, y, bad));
}

TEST_CASE("combined loss endpoints are bit-exact and the middle is affine") {
	const RealMatrix y = testutil::randomMatrix(14, 2, 10);
	const RealMatrix yhat = testutil::randomMatrix(14, 2, 11);
	LossConfig cfg;

	cfg.alpha = 0.0;
	const LossValueGrad c0 = combinedLoss(yhat, y, cfg);
	const LossValueGrad t0 = temporalLoss(yhat, y);
	CHECK(c0.value == t0.value);
	CHECK(c0.grad.data() == t0.grad.data());

	cfg.alpha = 1.0;
	const LossValueGrad c1 = combinedLoss(yhat, y, cfg);
	const LossValueGrad f1 = frequencyLoss(yhat, y, cfg);
	CHECK(c1.value == f1.value);
	CHECK(c1.grad.data() == f1.grad.data());

	cfg.alpha = 0.5;
	const LossValueGrad ch = combinedLoss(yhat, y, cfg);
	CHECK(std::abs(ch.value - 0.5 * (t0.value + f1.value)) < 1e-12);

	cfg.alpha = 2.0;
	CHECK_THROWS(combinedLoss(yhat, y, cfg));
}

TEST_CASE("Parseval ties the squared spectral residual to the temporal MSE") {
	const RealMatrix y = testutil::randomMatrix(20, 3, 12);
	const RealMatrix yhat = testutil::randomMatrix(20, 3, 13);
	const ComplexMatrix fh = dftForward(yhat, TransformAxis::Time);
	const ComplexMatrix fy = dftForward(y, TransformAxis::Time);
	double sq = 0.0;
	for (std::size_t i = 0; i < fh.size(); ++i) sq += std::norm(fh.data()[i] - fy.data()[i]);
	sq /= static_cast<double>(fh.size());
	const double tmp = temporalLoss(yhat, y).value;
	CHECK(std::abs(sq - tmp) < 1e-9 * std::max(1.0, tmp));
}

TEST_CASE("two-axis loss equals the loss of the explicitly composed spectrum") {
	const RealMatrix y = testutil::randomMatrix(8, 4, 14);
	const RealMatrix yhat = testutil::randomMatrix(8, 4, 15);
	LossConfig cfg;
	cfg.alpha = 1.0;
	cfg.axis = TransformAxis::Both;
	const double viaLoss = frequencyLoss(yhat, y, cfg).value;

	const ComplexMatrix fh =
		dftForwardComplex(dftForward(yhat, TransformAxis::Time), TransformAxis::Variable);
	const ComplexMatrix fy =
		dftForwardComplex(dftForward(y, TransformAxis::Time), TransformAxis::Variable);
	double manual = 0.0;
	for (std::size_t i = 0; i < fh.size(); ++i) manual += std::abs(fh.data()[i] - fy.data()[i]);
	manual /= static_cast<double>(fh.size());
	CHECK(std::abs(viaLoss - manual) < 1e-10);
}

TEST_CASE("bias formula: uncorrelated labels give exactly zero") {
	const std::vector<double> y{1.0, -2.0, 0.5, 3.0};
	const std::vector<double> yhat{0.2, 0.4, -0.1, 1.0};
	CHECK(biasFormula(y, yhat, RealMatrix(4, 4), 1.3) == 0.0);
}

TEST_CASE("bias formula: hand-evaluated two-step instance") {
	RealMatrix rho(2, 2);
	rho(1, 0) = 0.6;
	const double bias = biasFormula({1.0, 2.0}, {0.0, 0.0}, rho, 1.0);
	// 2^2/2 - (2 - 0.6*1)^2 / (2*(1 - 0.36)) = 2 - 1.96/1.28 = 0.46875,
	// with the first-step terms cancelling between the two sums.
	CHECK(bias == doctest::Approx(0.46875).epsilon(1e-12));
}

TEST_CASE("bias formula equals the independent Gaussian-chain oracle") {
	Rng64 rng(99);
	for (int trial = 0; trial < 50; ++trial) {
		const std::size_t t = 5;
		std::vector<double> y(t), yhat(t);
		for (auto& v : y) v = rng.nextNormal();
		for (auto& v : yhat) v = rng.nextNormal();
		RealMatrix rho(t, t);
		for (std::size_t i = 1; i < t; ++i) {
			double ss = 0.0;
			std::vector<double> raw(i);
			for (std::size_t j = 0; j < i; ++j) {
				raw[j] = rng.nextNormal();
				ss += raw[j] * raw[j];
			}
			const double scale = 0.8 / std::sqrt(std::max(ss, 1e-12));
			for (std::size_t j = 0; j < i; ++j) rho(i, j) = raw[j] * std::min(1.0, scale);
		}
		const double sigma = 0.5 + rng.nextUniform();

		// Oracle: evaluate both negative log-likelihood quadratics through the
		// Gaussian density itself (exp/log round trip) instead of the closed
		// form.
		auto quad = [](double value, double mean, double sd) {
			const double z = sd * std::sqrt(2.0 * std::numbers::pi);
			const double pdf =
				std::exp(-(value - mean) * (value - mean) / (2.0 * sd * sd)) / z;
			return -std::log(pdf) - std::log(z);
		};
		double mseTerm = 0.0, chainTerm = 0.0;
		for (std::size_t i = 0; i < t; ++i) {
			mseTerm += quad(y[i], yhat[i], sigma);
			double mu = yhat[i];
			double rhoSq = 0.0;
			for (std::size_t j = 0; j < i; ++j) {
				mu += rho(i, j) * (y[j] - yhat[j]);
				rhoSq += rho(i, j) * rho(i, j);
			}
			chainTerm += quad(y[i], mu, sigma * std::sqrt(1.0 - rhoSq));
		}
		const double bias = biasFormula(y, yhat, rho, sigma);
		CHECK(std::abs(bias - (mseTerm - chainTerm)) < 1e-10);
	}
}

TEST_CASE("bias formula rejects degenerate conditional variance") {
	RealMatrix rho(2, 2);
	rho(1, 0) = 1.0;
	CHECK_THROWS(biasFormula({1.0, 2.0}, {0.0, 0.0}, rho, 1.0));
}

TEST_CASE("bias sign experiment: correlated labels are almost always biased") {
	Rng64 rng(123);
	const std::size_t t = 6;
	RealMatrix rho(t, t);
	for (std::size_t i = 1; i < t; ++i) rho(i, i - 1) = 0.8;
	int nonzero = 0;
	const int draws = 200;
	for (int k = 0; k < draws; ++k) {
		std::vector<double> y(t), yhat(t);
		for (auto& v : y) v = rng.nextNormal();
		for (auto& v : yhat) v = rng.nextNormal();
		if (std::abs(biasFormula(y, yhat, rho, 1.0)) > 1e-12) ++nonzero;
		CHECK(biasFormula(y, yhat, RealMatrix(t, t), 1.0) == 0.0);
	}
	CHECK(nonzero >= draws * 95 / 100);
}

TEST_CASE("nonnegativity and identity of indiscernibles") {
	const RealMatrix y = testutil::randomMatrix(9, 2, 17);
	RealMatrix nearY = y;
	nearY(3, 1) += 1e-3;
	LossConfig cfg;
	cfg.alpha = 1.0;
	CHECK(temporalLoss(nearY, y).value > 0.0);
	CHECK(frequencyLoss(nearY, y, cfg).value > 0.0);
	CHECK(temporalLoss(y, y).value == 0.0);
	CHECK(frequencyLoss(y, y, cfg).value == 0.0);
}
