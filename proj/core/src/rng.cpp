#include "freqcast/rng.hpp"

#include <cmath>
#include <numbers>

namespace freqcast {

double Rng64::nextNormal() {
	if (hasSpare_) {
		hasSpare_ = false;
		return spare_;
	}
	// Box-Muller; u1 kept away from zero so log stays finite.
	double u1 = 0.0;
	do {
		u1 = nextUniform();
	} while (u1 <= 0.0);
	const double u2 = nextUniform();
	const double radius = std::sqrt(-2.0 * std::log(u1));
	const double angle = 2.0 * std::numbers::pi * u2;
	spare_ = radius * std::sin(angle);
	hasSpare_ = true;
	return radius * std::cos(angle);
}

std::vector<double> Rng64::normalDraws(std::size_t n) {
	std::vector<double> out(n);
	for (auto& v : out) v = nextNormal();
	return out;
}

std::size_t Rng64::nextIndex(std::size_t n) {
	// Rejection sampling for an unbiased bounded draw.
	const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
	std::uint64_t x;
	do {
		x = nextU64();
	} while (x >= limit);
	return static_cast<std::size_t>(x % n);
}

std::vector<std::size_t> shuffledIndices(std::size_t n, Rng64& rng) {
	std::vector<std::size_t> idx(n);
	for (std::size_t i = 0; i < n; ++i) idx[i] = i;
	for (std::size_t i = n; i > 1; --i) {
		std::size_t j = rng.nextIndex(i);
		std::swap(idx[i - 1], idx[j]);
	}
	return idx;
}

} // namespace freqcast
