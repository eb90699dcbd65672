#pragma once

#include "freqcast/matrix.hpp"

#include <cstddef>
#include <vector>

namespace freqcast {

enum class BasisKind { Fourier, Legendre, Chebyshev, Laguerre };

/// Sampled orthogonal basis with quadrature weights. Columns are the first K
/// basis functions evaluated on the kind's canonical grid; weights make the
/// weighted Gram matrix B^T W B diagonal to near machine precision.
struct BasisMatrix {
	BasisKind kind = BasisKind::Fourier;
	std::size_t length = 0;  // T
	std::size_t columns = 0; // K <= T
	RealMatrix values;       // T x K
	std::vector<double> weights;
	std::vector<double> grid;
};

/// Grids: Fourier on t_i = i with weight 1/T; Legendre on Gauss-Legendre
/// nodes over [-1,1]; Chebyshev on Chebyshev-Gauss nodes (the 1/sqrt(1-t^2)
/// weight folded into the quadrature weights); Laguerre on Gauss-Laguerre
/// nodes (weight e^{-t} folded in). Throws when k > length.
BasisMatrix buildBasis(BasisKind kind, std::size_t length, std::size_t k);

/// Weighted least-squares coefficients of y (T x D) against the basis
/// columns; returns K x D. reconstruct(project(y)) == y when K == T.
RealMatrix project(const SeriesMatrix& y, const BasisMatrix& basis);

/// B * coeffs: map K x D coefficients back to a T x D series.
SeriesMatrix reconstruct(const RealMatrix& coeffs, const BasisMatrix& basis);

/// The linear operator P (K x T) with project(y) == P * y; exposed so losses
/// can differentiate through the projection exactly.
RealMatrix projectionOperator(const BasisMatrix& basis);

} // namespace freqcast
