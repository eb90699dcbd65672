#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace freqcast {

/// Dense real matrix, row-major. Rows index time steps, columns index
/// variables throughout the library.
class RealMatrix {
public:
	RealMatrix() = default;
	RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
		: rows_(rows), cols_(cols), data_(rows * cols, fill) {}
	RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }
	std::size_t size() const { return data_.size(); }

	double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

	std::vector<double>& data() { return data_; }
	const std::vector<double>& data() const { return data_; }

	RealMatrix transposed() const;
	bool allFinite() const;
	bool sameShape(const RealMatrix& other) const {
		return rows_ == other.rows_ && cols_ == other.cols_;
	}

	std::vector<double> column(std::size_t c) const;
	std::vector<double> row(std::size_t r) const;
	void setColumn(std::size_t c, const std::vector<double>& values);

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<double> data_;
};

/// Dense complex matrix, row-major, (re, im) storage via std::complex.
class ComplexMatrix {
public:
	ComplexMatrix() = default;
	ComplexMatrix(std::size_t rows, std::size_t cols)
		: rows_(rows), cols_(cols), data_(rows * cols) {}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }
	std::size_t size() const { return data_.size(); }

	std::complex<double>& operator()(std::size_t r, std::size_t c) {
		return data_[r * cols_ + c];
	}
	std::complex<double> operator()(std::size_t r, std::size_t c) const {
		return data_[r * cols_ + c];
	}

	std::vector<std::complex<double>>& data() { return data_; }
	const std::vector<std::complex<double>>& data() const { return data_; }

	bool sameShape(const ComplexMatrix& other) const {
		return rows_ == other.rows_ && cols_ == other.cols_;
	}

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<std::complex<double>> data_;
};

/// The universal carrier for input windows (H x D) and labels (T x D).
using SeriesMatrix = RealMatrix;

} // namespace freqcast
