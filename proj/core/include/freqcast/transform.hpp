#pragma once

#include "freqcast/matrix.hpp"

#include <complex>
#include <vector>

namespace freqcast {

enum class TransformAxis { Time, Variable, Both };

/// Unitary DFT of a real series: F_k = sum_t Y_t exp(-j 2 pi k t / T) / sqrt(T),
/// applied per column for Time, per row for Variable, and composed (time then
/// variable, overall 1/sqrt(T*D)) for Both.
ComplexMatrix dftForward(const SeriesMatrix& y, TransformAxis axis);

/// Forward transform of an already-complex matrix; used for axis composition.
ComplexMatrix dftForwardComplex(const ComplexMatrix& y, TransformAxis axis);

/// Inverse of dftForward. Throws if the imaginary residue of the
/// reconstruction is >= 1e-6 (the spectrum was not conjugate-symmetric).
SeriesMatrix dftInverse(const ComplexMatrix& f, TransformAxis axis);

/// Inverse without the realness check; returns the complex reconstruction.
ComplexMatrix dftInverseComplex(const ComplexMatrix& f, TransformAxis axis);

/// Bins k = 0 .. floor(T/2) of a time-axis spectrum.
ComplexMatrix oneSided(const ComplexMatrix& f);

/// Single-sequence transforms used by tests and analysis code.
std::vector<std::complex<double>> dftForward1d(const std::vector<double>& y);

/// Naive O(T^2) evaluation of the same sum; the oracle any fast path is
/// checked against.
std::vector<std::complex<double>> dftNaive1d(const std::vector<double>& y);

} // namespace freqcast
