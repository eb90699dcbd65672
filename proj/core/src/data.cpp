#include "freqcast/data.hpp"

#include "freqcast/rng.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace freqcast {

namespace {

std::vector<std::string> splitLine(const std::string& line) {
	std::vector<std::string> cells;
	std::string cell;
	std::stringstream ss(line);
	while (std::getline(ss, cell, ',')) cells.push_back(cell);
	if (!line.empty() && line.back() == ',') cells.emplace_back();
	return cells;
}

double parseCell(const std::string& cell, std::size_t row, std::size_t col) {
	const char* begin = cell.data();
	const char* end = begin + cell.size();
	while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
	while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
	double value = 0.0;
	const auto [ptr, ec] = std::from_chars(begin, end, value);
	if (ec != std::errc{} || ptr != end || begin == end) {
		throw std::runtime_error("loadCsv: unparseable cell at row " + std::to_string(row) +
		                         ", column " + std::to_string(col));
	}
	if (!std::isfinite(value)) {
		throw std::runtime_error("loadCsv: non-finite value at row " + std::to_string(row) +
		                         ", column " + std::to_string(col));
	}
	return value;
}

} // namespace

SplitSpec SplitSpec::byFraction(double train, double val, double test) {
	SplitSpec s;
	s.useCounts = false;
	s.trainFrac = train;
	s.valFrac = val;
	s.testFrac = test;
	return s;
}

SplitSpec SplitSpec::byCount(std::size_t train, std::size_t val, std::size_t test) {
	SplitSpec s;
	s.useCounts = true;
	s.trainCount = train;
	s.valCount = val;
	s.testCount = test;
	return s;
}

RawSeries loadCsv(const std::string& path, bool hasTimestampColumn) {
	std::ifstream in(path);
	if (!in) throw std::runtime_error("loadCsv: cannot open " + path);

	std::string line;
	if (!std::getline(in, line)) throw std::runtime_error("loadCsv: empty file " + path);
	std::vector<std::string> header = splitLine(line);
	if (!header.empty() && !header.back().empty() && header.back().back() == '\r') {
		header.back().pop_back();
	}
	const std::size_t firstData = hasTimestampColumn ? 1 : 0;
	if (header.size() <= firstData) {
		throw std::runtime_error("loadCsv: no numeric columns in " + path);
	}

	RawSeries series;
	series.names.assign(header.begin() + firstData, header.end());
	const std::size_t d = series.names.size();

	std::vector<double> values;
	std::size_t rows = 0;
	while (std::getline(in, line)) {
		if (line.empty() || line == "\r") continue;
		const std::vector<std::string> cells = splitLine(line);
		if (cells.size() != header.size()) {
			throw std::runtime_error("loadCsv: ragged row " + std::to_string(rows + 1) +
			                         " (" + std::to_string(cells.size()) + " cells, expected " +
			                         std::to_string(header.size()) + ")");
		}
		if (hasTimestampColumn) series.timestamps.push_back(cells[0]);
		for (std::size_t c = firstData; c < cells.size(); ++c) {
			values.push_back(parseCell(cells[c], rows + 1, c));
		}
		++rows;
	}
	if (rows == 0) throw std::runtime_error("loadCsv: no data rows in " + path);
	series.values = RealMatrix(rows, d, std::move(values));
	return series;
}

void writeCsv(const RawSeries& series, const std::string& path) {
	std::ofstream out(path);
	if (!out) throw std::runtime_error("writeCsv: cannot open " + path);
	const bool hasTime = !series.timestamps.empty();
	if (hasTime) out << "date,";
	for (std::size_t c = 0; c < series.dims(); ++c) {
		out << (c < series.names.size() ? series.names[c] : "v" + std::to_string(c));
		out << (c + 1 < series.dims() ? "," : "\n");
	}
	out.precision(17);
	for (std::size_t r = 0; r < series.length(); ++r) {
		if (hasTime) out << series.timestamps[r] << ",";
		for (std::size_t c = 0; c < series.dims(); ++c) {
			out << series.values(r, c) << (c + 1 < series.dims() ? "," : "\n");
		}
	}
}

SplitResult splitChronological(const RawSeries& series, const SplitSpec& spec) {
	const std::size_t n = series.length();
	std::size_t nTrain, nVal, nTest;
	if (spec.useCounts) {
		nTrain = spec.trainCount;
		nVal = spec.valCount;
		nTest = spec.testCount;
		if (nTrain + nVal + nTest > n) {
			throw std::invalid_argument("splitChronological: counts exceed series length");
		}
	} else {
		nTrain = static_cast<std::size_t>(std::floor(spec.trainFrac * static_cast<double>(n)));
		nVal = static_cast<std::size_t>(std::floor(spec.valFrac * static_cast<double>(n)));
		if (spec.trainFrac + spec.valFrac + spec.testFrac > 1.0 + 1e-12) {
			throw std::invalid_argument("splitChronological: fractions exceed 1");
		}
		nTest = n - nTrain - nVal;
	}

	auto slice = [&](std::size_t begin, std::size_t len) {
		RawSeries out;
		out.names = series.names;
		out.values = RealMatrix(len, series.dims());
		for (std::size_t r = 0; r < len; ++r) {
			for (std::size_t c = 0; c < series.dims(); ++c) {
				out.values(r, c) = series.values(begin + r, c);
			}
		}
		if (!series.timestamps.empty()) {
			out.timestamps.assign(series.timestamps.begin() + static_cast<std::ptrdiff_t>(begin),
			                      series.timestamps.begin() + static_cast<std::ptrdiff_t>(begin + len));
		}
		return out;
	};

	SplitResult result;
	result.train = slice(0, nTrain);
	result.val = slice(nTrain, nVal);
	result.test = slice(nTrain + nVal, nTest);
	return result;
}

WindowedDataset::WindowedDataset(RealMatrix segment, std::size_t h, std::size_t t)
	: segment_(std::make_shared<RealMatrix>(std::move(segment))), h_(h), t_(t) {
	if (h_ == 0 || t_ == 0) {
		throw std::invalid_argument("WindowedDataset: h and t must be positive");
	}
	if (segment_->rows() < h_ + t_) {
		throw std::invalid_argument("WindowedDataset: segment shorter than h + t");
	}
}

std::size_t WindowedDataset::count() const {
	return segment_->rows() - h_ - t_ + 1;
}

SeriesMatrix WindowedDataset::input(std::size_t window) const {
	SeriesMatrix out(h_, segment_->cols());
	for (std::size_t r = 0; r < h_; ++r) {
		for (std::size_t c = 0; c < segment_->cols(); ++c) {
			out(r, c) = (*segment_)(window + r, c);
		}
	}
	return out;
}

SeriesMatrix WindowedDataset::label(std::size_t window) const {
	SeriesMatrix out(t_, segment_->cols());
	for (std::size_t r = 0; r < t_; ++r) {
		for (std::size_t c = 0; c < segment_->cols(); ++c) {
			out(r, c) = (*segment_)(window + h_ + r, c);
		}
	}
	return out;
}

double WindowedDataset::lastInputValue(std::size_t window, std::size_t d) const {
	return (*segment_)(window + h_ - 1, d);
}

Scaler Scaler::fit(const RealMatrix& train) {
	if (train.rows() == 0) throw std::invalid_argument("Scaler: empty training segment");
	Scaler s;
	const std::size_t d = train.cols();
	s.means_.assign(d, 0.0);
	s.stds_.assign(d, 1.0);
	const double n = static_cast<double>(train.rows());
	for (std::size_t c = 0; c < d; ++c) {
		double sum = 0.0;
		for (std::size_t r = 0; r < train.rows(); ++r) sum += train(r, c);
		const double mean = sum / n;
		double ss = 0.0;
		for (std::size_t r = 0; r < train.rows(); ++r) {
			const double e = train(r, c) - mean;
			ss += e * e;
		}
		const double sd = std::sqrt(ss / n);
		s.means_[c] = mean;
		if (sd < 1e-12) {
			s.means_[c] = 0.0;
			s.stds_[c] = 1.0;
			s.passthrough_.push_back(c);
		} else {
			s.stds_[c] = sd;
		}
	}
	return s;
}

RealMatrix Scaler::transform(const RealMatrix& x) const {
	if (x.cols() != means_.size()) throw std::invalid_argument("Scaler: dimension mismatch");
	RealMatrix out(x.rows(), x.cols());
	for (std::size_t r = 0; r < x.rows(); ++r) {
		for (std::size_t c = 0; c < x.cols(); ++c) {
			out(r, c) = (x(r, c) - means_[c]) / stds_[c];
		}
	}
	return out;
}

RealMatrix Scaler::inverseTransform(const RealMatrix& x) const {
	if (x.cols() != means_.size()) throw std::invalid_argument("Scaler: dimension mismatch");
	RealMatrix out(x.rows(), x.cols());
	for (std::size_t r = 0; r < x.rows(); ++r) {
		for (std::size_t c = 0; c < x.cols(); ++c) {
			out(r, c) = x(r, c) * stds_[c] + means_[c];
		}
	}
	return out;
}

RawSeries synthAr(double phi, std::size_t n, std::size_t d, std::uint64_t seed,
                  double noiseSd) {
	if (std::abs(phi) >= 1.0) {
		throw std::invalid_argument("synthAr: |phi| must be < 1 for stationarity");
	}
	Rng64 rng(seed);
	RawSeries series;
	series.values = RealMatrix(n, d);
	series.names.reserve(d);
	for (std::size_t c = 0; c < d; ++c) series.names.push_back("v" + std::to_string(c));
	constexpr std::size_t kBurnIn = 100;
	for (std::size_t c = 0; c < d; ++c) {
		double x = 0.0;
		for (std::size_t i = 0; i < kBurnIn; ++i) x = phi * x + noiseSd * rng.nextNormal();
		for (std::size_t r = 0; r < n; ++r) {
			x = phi * x + noiseSd * rng.nextNormal();
			series.values(r, c) = x;
		}
	}
	return series;
}

RawSeries synthSines(const std::vector<double>& freqs, const std::vector<double>& amps,
                     double noiseSd, std::size_t n, std::size_t d, std::uint64_t seed) {
	if (freqs.size() != amps.size() || freqs.empty()) {
		throw std::invalid_argument("synthSines: need matching nonempty freqs/amps");
	}
	Rng64 rng(seed);
	RawSeries series;
	series.values = RealMatrix(n, d);
	series.names.reserve(d);
	for (std::size_t c = 0; c < d; ++c) series.names.push_back("v" + std::to_string(c));
	for (std::size_t c = 0; c < d; ++c) {
		// Deterministic per-variable phase offset keeps the columns distinct.
		const double phase = 0.7 * static_cast<double>(c);
		for (std::size_t r = 0; r < n; ++r) {
			double x = 0.0;
			for (std::size_t k = 0; k < freqs.size(); ++k) {
				x += amps[k] * std::sin(2.0 * std::numbers::pi * freqs[k] * static_cast<double>(r) + phase);
			}
			if (noiseSd > 0.0) x += noiseSd * rng.nextNormal();
			series.values(r, c) = x;
		}
	}
	return series;
}

RawSeries synthSinesAr(const std::vector<double>& freqs, const std::vector<double>& amps,
                       double arCoeff, double arSd, std::size_t n, std::size_t d,
                       std::uint64_t seed) {
	RawSeries clean = synthSines(freqs, amps, 0.0, n, d, seed);
	const RawSeries noise = synthAr(arCoeff, n, d, seed ^ 0x9e3779b97f4a7c15ULL, arSd);
	for (std::size_t i = 0; i < clean.values.size(); ++i) {
		clean.values.data()[i] += noise.values.data()[i];
	}
	return clean;
}

} // namespace freqcast
