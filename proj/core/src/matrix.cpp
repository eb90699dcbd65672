#include "freqcast/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace freqcast {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
	: rows_(rows), cols_(cols), data_(std::move(data)) {
	if (data_.size() != rows_ * cols_) {
		throw std::invalid_argument("RealMatrix: data length does not match rows*cols");
	}
}

RealMatrix RealMatrix::transposed() const {
	RealMatrix out(cols_, rows_);
	for (std::size_t r = 0; r < rows_; ++r) {
		for (std::size_t c = 0; c < cols_; ++c) {
			out(c, r) = (*this)(r, c);
		}
	}
	return out;
}

bool RealMatrix::allFinite() const {
	for (double v : data_) {
		if (!std::isfinite(v)) return false;
	}
	return true;
}

std::vector<double> RealMatrix::column(std::size_t c) const {
	std::vector<double> out(rows_);
	for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
	return out;
}

std::vector<double> RealMatrix::row(std::size_t r) const {
	std::vector<double> out(cols_);
	for (std::size_t c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
	return out;
}

void RealMatrix::setColumn(std::size_t c, const std::vector<double>& values) {
	if (values.size() != rows_) {
		throw std::invalid_argument("setColumn: length mismatch");
	}
	for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

} // namespace freqcast
