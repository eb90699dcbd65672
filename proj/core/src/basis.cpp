#include "freqcast/basis.hpp"

#include "freqcast/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freqcast {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gaussLegendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
	x.assign(n, 0.0);
	w.assign(n, 0.0);
	const std::size_t half = (n + 1) / 2;
	for (std::size_t i = 0; i < half; ++i) {
		double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
		                    (static_cast<double>(n) + 0.5));
		double pp = 0.0;
		for (int iter = 0; iter < 100; ++iter) {
			double p0 = 1.0, p1 = 0.0;
			for (std::size_t j = 0; j < n; ++j) {
				const double p2 = p1;
				p1 = p0;
				p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
			}
			pp = n * (z * p0 - p1) / (z * z - 1.0);
			const double dz = p0 / pp;
			z -= dz;
			if (std::abs(dz) < 1e-15) break;
		}
		x[i] = -z;
		x[n - 1 - i] = z;
		w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
		w[n - 1 - i] = w[i];
	}
}

// Gauss-Laguerre nodes and weights for weight e^{-t} on [0, inf).
void gaussLaguerre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
	x.assign(n, 0.0);
	w.assign(n, 0.0);
	const double nn = static_cast<double>(n);
	double z = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		if (i == 0) {
			z = 3.0 / (1.0 + 2.4 * nn);
		} else if (i == 1) {
			z += 15.0 / (1.0 + 2.5 * nn);
		} else {
			const double ai = static_cast<double>(i - 1);
			z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - x[i - 2]);
		}
		double pp = 0.0;
		for (int iter = 0; iter < 100; ++iter) {
			double p0 = 1.0, p1 = 0.0;
			for (std::size_t j = 0; j < n; ++j) {
				const double p2 = p1;
				p1 = p0;
				p0 = ((2.0 * j + 1.0 - z) * p1 - j * p2) / (j + 1.0);
			}
			pp = nn * (p0 - p1) / z; // L'_n = n (L_n - L_{n-1}) / t
			const double dz = p0 / pp;
			z -= dz;
			if (std::abs(dz) < 1e-14 * std::max(1.0, z)) break;
		}
		x[i] = z;
		// w_i = x_i / ((n+1) L_{n+1}(x_i))^2
		double p0 = 1.0, p1 = 0.0;
		for (std::size_t j = 0; j <= n; ++j) {
			const double p2 = p1;
			p1 = p0;
			p0 = ((2.0 * j + 1.0 - z) * p1 - j * p2) / (j + 1.0);
		}
		const double lnp1 = p0;
		w[i] = z / ((nn + 1.0) * (nn + 1.0) * lnp1 * lnp1);
	}
}

double legendreValue(std::size_t k, double t) {
	double p0 = 1.0, p1 = 0.0;
	for (std::size_t j = 0; j < k; ++j) {
		const double p2 = p1;
		p1 = p0;
		p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
	}
	return p0;
}

double laguerreValue(std::size_t k, double t) {
	double p0 = 1.0, p1 = 0.0;
	for (std::size_t j = 0; j < k; ++j) {
		const double p2 = p1;
		p1 = p0;
		p0 = ((2.0 * j + 1.0 - t) * p1 - j * p2) / (j + 1.0);
	}
	return p0;
}

} // namespace

BasisMatrix buildBasis(BasisKind kind, std::size_t length, std::size_t k) {
	if (k == 0 || k > length || length == 0) {
		throw std::invalid_argument("buildBasis: need 1 <= k <= length");
	}
	BasisMatrix b;
	b.kind = kind;
	b.length = length;
	b.columns = k;
	b.values = RealMatrix(length, k);
	b.weights.assign(length, 1.0);
	b.grid.assign(length, 0.0);

	switch (kind) {
	case BasisKind::Fourier: {
		// Real trigonometric basis on the integer grid, exact discrete
		// orthogonality under uniform weights. Column order: 1, cos(2pi t/T),
		// sin(2pi t/T), cos(4pi t/T), ... skipping the identically-zero
		// Nyquist sine for even T.
		const double T = static_cast<double>(length);
		for (std::size_t i = 0; i < length; ++i) {
			b.grid[i] = static_cast<double>(i);
			b.weights[i] = 1.0 / T;
		}
		std::size_t col = 0;
		std::size_t freq = 0;
		bool isSin = false;
		while (col < k) {
			for (std::size_t i = 0; i < length; ++i) {
				const double angle = 2.0 * std::numbers::pi * static_cast<double>(freq) *
				                     static_cast<double>(i) / T;
				b.values(i, col) = isSin ? std::sin(angle) : std::cos(angle);
			}
			++col;
			if (freq == 0) {
				freq = 1;
				isSin = false;
			} else if (!isSin) {
				// The Nyquist sine (2*freq == T) vanishes on the grid.
				if (2 * freq == length) {
					++freq;
				} else {
					isSin = true;
				}
			} else {
				isSin = false;
				++freq;
			}
		}
		break;
	}
	case BasisKind::Legendre: {
		gaussLegendre(length, b.grid, b.weights);
		for (std::size_t i = 0; i < length; ++i) {
			for (std::size_t c = 0; c < k; ++c) {
				b.values(i, c) = legendreValue(c, b.grid[i]);
			}
		}
		break;
	}
	case BasisKind::Chebyshev: {
		// Chebyshev-Gauss nodes; quadrature weight pi/T already contains the
		// 1/sqrt(1-t^2) factor of the continuous inner product.
		const double T = static_cast<double>(length);
		for (std::size_t i = 0; i < length; ++i) {
			const double theta = std::numbers::pi * (2.0 * static_cast<double>(length - 1 - i) + 1.0) /
			                     (2.0 * T);
			b.grid[i] = std::cos(theta);
			b.weights[i] = std::numbers::pi / T;
			for (std::size_t c = 0; c < k; ++c) {
				b.values(i, c) = std::cos(static_cast<double>(c) * theta);
			}
		}
		break;
	}
	case BasisKind::Laguerre: {
		gaussLaguerre(length, b.grid, b.weights);
		for (std::size_t i = 0; i < length; ++i) {
			for (std::size_t c = 0; c < k; ++c) {
				b.values(i, c) = laguerreValue(c, b.grid[i]);
			}
		}
		break;
	}
	}
	return b;
}

namespace {

// The sqrt(W)-scaled basis turns the weighted least-squares problem into a
// plain one; QR keeps the conditioning linear instead of squared.
RealMatrix weightedBasis(const BasisMatrix& basis) {
	RealMatrix weighted(basis.length, basis.columns);
	for (std::size_t i = 0; i < basis.length; ++i) {
		const double sw = std::sqrt(basis.weights[i]);
		for (std::size_t c = 0; c < basis.columns; ++c) {
			weighted(i, c) = sw * basis.values(i, c);
		}
	}
	return weighted;
}

} // namespace

RealMatrix projectionOperator(const BasisMatrix& basis) {
	const std::size_t t = basis.length;
	const std::size_t k = basis.columns;
	// Row j of P^T solves the weighted system for the j-th unit impulse:
	// P = (B^T W B)^{-1} B^T W.
	const QrLeastSquares qr(weightedBasis(basis));
	RealMatrix op(k, t);
	std::vector<double> e(t, 0.0);
	for (std::size_t j = 0; j < t; ++j) {
		e.assign(t, 0.0);
		e[j] = std::sqrt(basis.weights[j]);
		const std::vector<double> coeff = qr.solve(e);
		for (std::size_t c = 0; c < k; ++c) op(c, j) = coeff[c];
	}
	return op;
}

RealMatrix project(const SeriesMatrix& y, const BasisMatrix& basis) {
	if (y.rows() != basis.length) {
		throw std::invalid_argument("project: series rows must equal basis length");
	}
	const QrLeastSquares qr(weightedBasis(basis));
	RealMatrix out(basis.columns, y.cols());
	std::vector<double> target(basis.length);
	for (std::size_t d = 0; d < y.cols(); ++d) {
		for (std::size_t i = 0; i < basis.length; ++i) {
			target[i] = std::sqrt(basis.weights[i]) * y(i, d);
		}
		const std::vector<double> coeff = qr.solve(target);
		for (std::size_t c = 0; c < basis.columns; ++c) out(c, d) = coeff[c];
	}
	return out;
}

SeriesMatrix reconstruct(const RealMatrix& coeffs, const BasisMatrix& basis) {
	if (coeffs.rows() != basis.columns) {
		throw std::invalid_argument("reconstruct: coefficient rows must equal basis columns");
	}
	return matMul(basis.values, coeffs);
}

} // namespace freqcast
