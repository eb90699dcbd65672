#include "freqcast/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace freqcast {

namespace {

using cd = std::complex<double>;

bool isPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT, sign = -1 forward, +1 inverse (unscaled).
void fftRadix2(std::vector<cd>& a, int sign) {
	const std::size_t n = a.size();
	for (std::size_t i = 1, j = 0; i < n; ++i) {
		std::size_t bit = n >> 1;
		for (; j & bit; bit >>= 1) j ^= bit;
		j ^= bit;
		if (i < j) std::swap(a[i], a[j]);
	}
	for (std::size_t len = 2; len <= n; len <<= 1) {
		const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
		const cd wl(std::cos(angle), std::sin(angle));
		for (std::size_t i = 0; i < n; i += len) {
			cd w(1.0, 0.0);
			for (std::size_t k = 0; k < len / 2; ++k) {
				const cd u = a[i + k];
				const cd v = a[i + k + len / 2] * w;
				a[i + k] = u + v;
				a[i + k + len / 2] = u - v;
				w *= wl;
			}
		}
	}
}

// Bluestein's algorithm: DFT of arbitrary length as a convolution carried out
// with power-of-two FFTs. Handles the lengths 96/192/336/720 exactly as the
// radix-2 path cannot.
void fftBluestein(std::vector<cd>& a, int sign) {
	const std::size_t n = a.size();
	std::size_t m = 1;
	while (m < 2 * n - 1) m <<= 1;

	// Chirp w_k = exp(sign * j * pi * k^2 / n); k^2 mod 2n keeps the angle
	// argument small for long inputs.
	std::vector<cd> chirp(n);
	for (std::size_t k = 0; k < n; ++k) {
		const std::size_t k2 = (k * k) % (2 * n);
		const double angle = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
		chirp[k] = cd(std::cos(angle), std::sin(angle));
	}

	std::vector<cd> x(m, cd(0.0, 0.0));
	std::vector<cd> y(m, cd(0.0, 0.0));
	for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
	for (std::size_t k = 0; k < n; ++k) {
		y[k] = std::conj(chirp[k]);
		if (k != 0) y[m - k] = std::conj(chirp[k]);
	}
	fftRadix2(x, -1);
	fftRadix2(y, -1);
	for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
	fftRadix2(x, +1);
	const double scale = 1.0 / static_cast<double>(m);
	for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * scale * chirp[k];
}

void fft(std::vector<cd>& a, int sign) {
	if (a.size() <= 1) return;
	if (isPowerOfTwo(a.size())) {
		fftRadix2(a, sign);
	} else {
		fftBluestein(a, sign);
	}
}

// Transform every column (unit stride over rows) of a complex matrix in place.
void transformColumns(ComplexMatrix& m, int sign, double scale) {
	std::vector<cd> buf(m.rows());
	for (std::size_t c = 0; c < m.cols(); ++c) {
		for (std::size_t r = 0; r < m.rows(); ++r) buf[r] = m(r, c);
		fft(buf, sign);
		for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = buf[r] * scale;
	}
}

void transformRows(ComplexMatrix& m, int sign, double scale) {
	std::vector<cd> buf(m.cols());
	for (std::size_t r = 0; r < m.rows(); ++r) {
		for (std::size_t c = 0; c < m.cols(); ++c) buf[c] = m(r, c);
		fft(buf, sign);
		for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = buf[c] * scale;
	}
}

ComplexMatrix applyAxes(ComplexMatrix m, TransformAxis axis, int sign) {
	const double scaleT = 1.0 / std::sqrt(static_cast<double>(m.rows()));
	const double scaleD = 1.0 / std::sqrt(static_cast<double>(m.cols()));
	switch (axis) {
	case TransformAxis::Time:
		transformColumns(m, sign, scaleT);
		break;
	case TransformAxis::Variable:
		transformRows(m, sign, scaleD);
		break;
	case TransformAxis::Both:
		transformColumns(m, sign, scaleT);
		transformRows(m, sign, scaleD);
		break;
	}
	return m;
}

} // namespace

ComplexMatrix dftForward(const SeriesMatrix& y, TransformAxis axis) {
	if (y.rows() == 0 || y.cols() == 0) {
		throw std::invalid_argument("dftForward: empty matrix");
	}
	if (!y.allFinite()) {
		throw std::invalid_argument("dftForward: non-finite entry");
	}
	ComplexMatrix m(y.rows(), y.cols());
	for (std::size_t i = 0; i < y.size(); ++i) m.data()[i] = cd(y.data()[i], 0.0);
	return applyAxes(std::move(m), axis, -1);
}

ComplexMatrix dftForwardComplex(const ComplexMatrix& y, TransformAxis axis) {
	if (y.rows() == 0 || y.cols() == 0) {
		throw std::invalid_argument("dftForwardComplex: empty matrix");
	}
	return applyAxes(y, axis, -1);
}

ComplexMatrix dftInverseComplex(const ComplexMatrix& f, TransformAxis axis) {
	if (f.rows() == 0 || f.cols() == 0) {
		throw std::invalid_argument("dftInverseComplex: empty matrix");
	}
	// The forward scale 1/sqrt(T) makes the transform unitary, so the inverse
	// uses the same scale with conjugated twiddles.
	return applyAxes(f, axis, +1);
}

SeriesMatrix dftInverse(const ComplexMatrix& f, TransformAxis axis) {
	ComplexMatrix rec = dftInverseComplex(f, axis);
	SeriesMatrix out(rec.rows(), rec.cols());
	for (std::size_t i = 0; i < rec.size(); ++i) {
		const double residue = std::abs(rec.data()[i].imag());
		if (residue >= 1e-6) {
			throw std::runtime_error("dftInverse: imaginary residue >= 1e-6; spectrum is not conjugate-symmetric");
		}
		out.data()[i] = rec.data()[i].real();
	}
	return out;
}

ComplexMatrix oneSided(const ComplexMatrix& f) {
	const std::size_t keep = f.rows() / 2 + 1;
	ComplexMatrix out(keep, f.cols());
	for (std::size_t r = 0; r < keep; ++r) {
		for (std::size_t c = 0; c < f.cols(); ++c) out(r, c) = f(r, c);
	}
	return out;
}

std::vector<cd> dftForward1d(const std::vector<double>& y) {
	std::vector<cd> a(y.size());
	for (std::size_t i = 0; i < y.size(); ++i) a[i] = cd(y[i], 0.0);
	fft(a, -1);
	const double scale = 1.0 / std::sqrt(static_cast<double>(y.size()));
	for (auto& v : a) v *= scale;
	return a;
}

std::vector<cd> dftNaive1d(const std::vector<double>& y) {
	const std::size_t n = y.size();
	std::vector<cd> out(n, cd(0.0, 0.0));
	const double scale = 1.0 / std::sqrt(static_cast<double>(n));
	for (std::size_t k = 0; k < n; ++k) {
		cd s(0.0, 0.0);
		for (std::size_t t = 0; t < n; ++t) {
			const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
			                     static_cast<double>(t) / static_cast<double>(n);
			s += y[t] * cd(std::cos(angle), std::sin(angle));
		}
		out[k] = s * scale;
	}
	return out;
}

} // namespace freqcast
