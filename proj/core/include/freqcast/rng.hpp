#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace freqcast {

/// Deterministic 64-bit RNG. The normal sampler is implemented in-library
/// (Box-Muller) so streams are bit-identical across standard libraries.
class Rng64 {
public:
	explicit Rng64(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t nextU64() { return engine_(); }

	/// Uniform in [0, 1).
	double nextUniform() {
		return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
	}

	double nextNormal();

	std::vector<double> normalDraws(std::size_t n);

	/// Uniform integer in [0, n).
	std::size_t nextIndex(std::size_t n);

private:
	std::mt19937_64 engine_;
	bool hasSpare_ = false;
	double spare_ = 0.0;
};

/// Seeded Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> shuffledIndices(std::size_t n, Rng64& rng);

} // namespace freqcast
