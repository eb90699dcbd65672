#pragma once

#include "freqcast/matrix.hpp"

#include <vector>

namespace freqcast {

/// Least-squares fit of target against the columns of design.
/// Solves the normal equations by Cholesky; if the Gram matrix is singular
/// or its condition estimate exceeds 1e12, falls back to the ridge system
/// with lambda = 1e-8 * trace(X^T X) / p.
std::vector<double> olsSolve(const RealMatrix& design, const std::vector<double>& target);

/// Householder-QR least squares. Avoids squaring the condition number, so it
/// is the solver of choice for ill-conditioned basis projections.
class QrLeastSquares {
public:
	explicit QrLeastSquares(RealMatrix design); // n x p, n >= p, full rank

	std::vector<double> solve(const std::vector<double>& target) const;

private:
	RealMatrix qr_;            // Householder vectors below, R strictly above
	std::vector<double> diag_; // diagonal of R
	std::vector<double> vtv_;  // squared norms of the Householder vectors
};

/// y = A x for row-major A.
std::vector<double> matVec(const RealMatrix& a, const std::vector<double>& x);

/// y = A^T x.
std::vector<double> matTVec(const RealMatrix& a, const std::vector<double>& x);

RealMatrix matMul(const RealMatrix& a, const RealMatrix& b);

} // namespace freqcast
