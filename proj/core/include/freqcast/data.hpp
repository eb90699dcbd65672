#pragma once

#include "freqcast/matrix.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace freqcast {

/// A loaded multivariate series: rows are time steps, columns are variables.
struct RawSeries {
	RealMatrix values; // N x D
	std::vector<std::string> names;
	std::vector<std::string> timestamps; // empty unless the file had a time column

	std::size_t length() const { return values.rows(); }
	std::size_t dims() const { return values.cols(); }
};

/// Chronological split boundaries, either as fractions of N or explicit row
/// counts. Segments are contiguous, ordered and non-overlapping.
struct SplitSpec {
	static SplitSpec byFraction(double train, double val, double test);
	static SplitSpec byCount(std::size_t train, std::size_t val, std::size_t test);

	bool useCounts = false;
	double trainFrac = 0.6, valFrac = 0.2, testFrac = 0.2;
	std::size_t trainCount = 0, valCount = 0, testCount = 0;
};

struct SplitResult {
	RawSeries train, val, test;
};

/// Stride-1 sliding windows (L: h x D, Y: t x D) over one contiguous segment.
class WindowedDataset {
public:
	WindowedDataset(RealMatrix segment, std::size_t h, std::size_t t);

	std::size_t count() const;
	std::size_t inputLength() const { return h_; }
	std::size_t labelLength() const { return t_; }
	std::size_t dims() const { return segment_->cols(); }

	SeriesMatrix input(std::size_t window) const;
	SeriesMatrix label(std::size_t window) const;

	/// Value of variable d at the last input step of a window; the control
	/// used by the partial-correlation analysis.
	double lastInputValue(std::size_t window, std::size_t d) const;

private:
	std::shared_ptr<const RealMatrix> segment_;
	std::size_t h_ = 0;
	std::size_t t_ = 0;
};

/// Per-variable z-score fitted on the training segment. Variables with
/// near-zero spread pass through unscaled and are recorded.
class Scaler {
public:
	static Scaler fit(const RealMatrix& train);

	RealMatrix transform(const RealMatrix& x) const;
	RealMatrix inverseTransform(const RealMatrix& x) const;

	const std::vector<double>& means() const { return means_; }
	const std::vector<double>& stds() const { return stds_; }
	const std::vector<std::size_t>& passthroughVariables() const { return passthrough_; }

private:
	std::vector<double> means_;
	std::vector<double> stds_;
	std::vector<std::size_t> passthrough_;
};

RawSeries loadCsv(const std::string& path, bool hasTimestampColumn);
void writeCsv(const RawSeries& series, const std::string& path);

SplitResult splitChronological(const RawSeries& series, const SplitSpec& spec);

/// AR(1) per variable: x_t = phi * x_{t-1} + eps_t, 100-step burn-in.
RawSeries synthAr(double phi, std::size_t n, std::size_t d, std::uint64_t seed,
                  double noiseSd = 1.0);

/// Sum of sines (per-variable phase offsets) plus white noise.
RawSeries synthSines(const std::vector<double>& freqs, const std::vector<double>& amps,
                     double noiseSd, std::size_t n, std::size_t d, std::uint64_t seed);

/// Sines plus AR(1) noise; the synthetic setting used by the alpha-sweep and
/// sample-efficiency experiments.
RawSeries synthSinesAr(const std::vector<double>& freqs, const std::vector<double>& amps,
                       double arCoeff, double arSd, std::size_t n, std::size_t d,
                       std::uint64_t seed);

} // namespace freqcast
