#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "freqcast/linalg.hpp"
#include "freqcast/rng.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>

using namespace freqcast;

TEST_CASE("olsSolve with an identity design returns the target") {
	RealMatrix design(3, 3);
	for (std::size_t i = 0; i < 3; ++i) design(i, i) = 1.0;
	const std::vector<double> beta = olsSolve(design, {1.0, 2.0, 3.0});
	REQUIRE(beta.size() == 3);
	CHECK(beta[0] == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(beta[1] == doctest::Approx(2.0).epsilon(1e-12));
	CHECK(beta[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("olsSolve intercept-only design recovers the mean") {
	RealMatrix design(4, 1, 1.0);
	const std::vector<double> beta = olsSolve(design, {2.0, 2.0, 2.0, 2.0});
	REQUIRE(beta.size() == 1);
	CHECK(beta[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("olsSolve recovers generating coefficients on a noiseless system") {
	const RealMatrix design = testutil::randomMatrix(50, 3, 7);
	const std::vector<double> truth{0.5, -1.0, 2.0};
	std::vector<double> target(50, 0.0);
	for (std::size_t r = 0; r < 50; ++r) {
		for (std::size_t c = 0; c < 3; ++c) target[r] += design(r, c) * truth[c];
	}
	const std::vector<double> beta = olsSolve(design, target);
	for (std::size_t c = 0; c < 3; ++c) {
		CHECK(std::abs(beta[c] - truth[c]) < 1e-8);
	}
}

TEST_CASE("olsSolve rejects bad shapes and non-finite input") {
	CHECK_THROWS(olsSolve(RealMatrix(2, 3), {1.0, 2.0}));     // n < p
	CHECK_THROWS(olsSolve(RealMatrix(3, 1, 1.0), {1.0, 2.0})); // length mismatch
	RealMatrix bad(2, 1, 1.0);
	bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
	CHECK_THROWS(olsSolve(bad, {1.0, 2.0}));
}

TEST_CASE("olsSolve survives a singular design via the ridge fallback") {
	RealMatrix design(4, 2);
	for (std::size_t r = 0; r < 4; ++r) {
		design(r, 0) = static_cast<double>(r);
		design(r, 1) = 2.0 * static_cast<double>(r); // exactly collinear
	}
	const std::vector<double> beta = olsSolve(design, {0.0, 1.0, 2.0, 3.0});
	REQUIRE(beta.size() == 2);
	CHECK(std::isfinite(beta[0]));
	CHECK(std::isfinite(beta[1]));
	// Fitted values should still reproduce the (representable) target.
	for (std::size_t r = 0; r < 4; ++r) {
		const double fit = beta[0] * design(r, 0) + beta[1] * design(r, 1);
		CHECK(std::abs(fit - static_cast<double>(r)) < 1e-4);
	}
}

TEST_CASE("normalDraws: moments and determinism") {
	Rng64 rng(1);
	const std::vector<double> x = rng.normalDraws(100000);
	double mean = 0.0;
	for (double v : x) mean += v;
	mean /= static_cast<double>(x.size());
	CHECK(std::abs(mean) < 0.02);

	double var = 0.0;
	for (double v : x) var += (v - mean) * (v - mean);
	var /= static_cast<double>(x.size());
	CHECK(std::abs(var - 1.0) < 0.03);

	Rng64 rng2(1);
	const std::vector<double> y = rng2.normalDraws(100000);
	CHECK(x == y);
}

TEST_CASE("Rng64 streams are reproducible bit-for-bit") {
	Rng64 a(42), b(42);
	for (int i = 0; i < 1000; ++i) {
		CHECK(a.nextU64() == b.nextU64());
	}
	Rng64 c(42), d(43);
	bool anyDiff = false;
	for (int i = 0; i < 10; ++i) anyDiff = anyDiff || (c.nextU64() != d.nextU64());
	CHECK(anyDiff);
}

TEST_CASE("nextIndex stays in range and covers the support") {
	Rng64 rng(5);
	std::vector<int> hits(7, 0);
	for (int i = 0; i < 7000; ++i) {
		const std::size_t k = rng.nextIndex(7);
		REQUIRE(k < 7);
		++hits[k];
	}
	for (int h : hits) CHECK(h > 0);
}

TEST_CASE("shuffledIndices is a seeded permutation") {
	Rng64 a(9), b(9);
	const std::vector<std::size_t> p = shuffledIndices(100, a);
	const std::vector<std::size_t> q = shuffledIndices(100, b);
	CHECK(p == q);
	std::vector<std::size_t> sorted = p;
	std::sort(sorted.begin(), sorted.end());
	for (std::size_t i = 0; i < 100; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("matMul / matVec / matTVec agree with direct loops") {
	const RealMatrix a = testutil::randomMatrix(4, 3, 11);
	const RealMatrix b = testutil::randomMatrix(3, 5, 12);
	const RealMatrix c = matMul(a, b);
	REQUIRE(c.rows() == 4);
	REQUIRE(c.cols() == 5);
	for (std::size_t i = 0; i < 4; ++i) {
		for (std::size_t j = 0; j < 5; ++j) {
			double s = 0.0;
			for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
			CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-12));
		}
	}
	const std::vector<double> x{1.0, -2.0, 0.5};
	const std::vector<double> ax = matVec(a, x);
	for (std::size_t i = 0; i < 4; ++i) {
		double s = 0.0;
		for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * x[k];
		CHECK(ax[i] == doctest::Approx(s).epsilon(1e-12));
	}
	const std::vector<double> y{1.0, 0.0, -1.0, 2.0};
	const std::vector<double> aty = matTVec(a, y);
	for (std::size_t k = 0; k < 3; ++k) {
		double s = 0.0;
		for (std::size_t i = 0; i < 4; ++i) s += a(i, k) * y[i];
		CHECK(aty[k] == doctest::Approx(s).epsilon(1e-12));
	}
}
