#include "freqcast/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace freqcast {

namespace {

// Lower-triangular Cholesky of a symmetric p x p matrix. Returns false on a
// non-positive pivot.
bool cholesky(std::vector<double>& g, std::size_t p) {
	for (std::size_t j = 0; j < p; ++j) {
		double d = g[j * p + j];
		for (std::size_t k = 0; k < j; ++k) d -= g[j * p + k] * g[j * p + k];
		if (!(d > 0.0)) return false;
		const double root = std::sqrt(d);
		g[j * p + j] = root;
		for (std::size_t i = j + 1; i < p; ++i) {
			double s = g[i * p + j];
			for (std::size_t k = 0; k < j; ++k) s -= g[i * p + k] * g[j * p + k];
			g[i * p + j] = s / root;
		}
	}
	return true;
}

void choleskySolve(const std::vector<double>& l, std::size_t p, std::vector<double>& b) {
	for (std::size_t i = 0; i < p; ++i) {
		double s = b[i];
		for (std::size_t k = 0; k < i; ++k) s -= l[i * p + k] * b[k];
		b[i] = s / l[i * p + i];
	}
	for (std::size_t ii = p; ii > 0; --ii) {
		const std::size_t i = ii - 1;
		double s = b[i];
		for (std::size_t k = i + 1; k < p; ++k) s -= l[k * p + i] * b[k];
		b[i] = s / l[i * p + i];
	}
}

// Condition estimate of the Gram matrix: largest eigenvalue by power
// iteration, smallest by inverse iteration through the Cholesky factor.
double conditionEstimate(const std::vector<double>& gram, const std::vector<double>& chol,
                         std::size_t p) {
	std::vector<double> v(p, 1.0), w(p);
	double lmax = 0.0;
	for (int iter = 0; iter < 30; ++iter) {
		for (std::size_t i = 0; i < p; ++i) {
			double s = 0.0;
			for (std::size_t j = 0; j < p; ++j) s += gram[i * p + j] * v[j];
			w[i] = s;
		}
		double norm = 0.0;
		for (double x : w) norm += x * x;
		norm = std::sqrt(norm);
		if (norm == 0.0) return 1.0;
		lmax = norm;
		for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / norm;
	}
	std::vector<double> u(p, 1.0);
	double inv = 0.0;
	for (int iter = 0; iter < 30; ++iter) {
		choleskySolve(chol, p, u);
		double norm = 0.0;
		for (double x : u) norm += x * x;
		norm = std::sqrt(norm);
		if (norm == 0.0) return 1.0;
		inv = norm;
		for (double& x : u) x /= norm;
	}
	const double lmin = 1.0 / inv;
	return lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
}

} // namespace

std::vector<double> olsSolve(const RealMatrix& design, const std::vector<double>& target) {
	const std::size_t n = design.rows();
	const std::size_t p = design.cols();
	if (n == 0 || p == 0 || n < p) {
		throw std::invalid_argument("olsSolve: need n >= p >= 1");
	}
	if (target.size() != n) {
		throw std::invalid_argument("olsSolve: target length mismatch");
	}
	if (!design.allFinite()) {
		throw std::invalid_argument("olsSolve: non-finite design entry");
	}
	for (double v : target) {
		if (!std::isfinite(v)) throw std::invalid_argument("olsSolve: non-finite target entry");
	}

	std::vector<double> gram(p * p, 0.0);
	for (std::size_t i = 0; i < p; ++i) {
		for (std::size_t j = i; j < p; ++j) {
			double s = 0.0;
			for (std::size_t r = 0; r < n; ++r) s += design(r, i) * design(r, j);
			gram[i * p + j] = s;
			gram[j * p + i] = s;
		}
	}
	std::vector<double> rhs(p, 0.0);
	for (std::size_t i = 0; i < p; ++i) {
		double s = 0.0;
		for (std::size_t r = 0; r < n; ++r) s += design(r, i) * target[r];
		rhs[i] = s;
	}

	double trace = 0.0;
	for (std::size_t i = 0; i < p; ++i) trace += gram[i * p + i];

	std::vector<double> chol = gram;
	bool ok = cholesky(chol, p);
	if (ok && conditionEstimate(gram, chol, p) > 1e12) ok = false;

	if (!ok) {
		const double lambda = 1e-8 * trace / static_cast<double>(p);
		chol = gram;
		for (std::size_t i = 0; i < p; ++i) chol[i * p + i] += lambda;
		if (!cholesky(chol, p)) {
			throw std::runtime_error("olsSolve: ridge-regularized system still singular");
		}
	}
	std::vector<double> beta = rhs;
	choleskySolve(chol, p, beta);
	return beta;
}

QrLeastSquares::QrLeastSquares(RealMatrix design) : qr_(std::move(design)) {
	const std::size_t n = qr_.rows();
	const std::size_t p = qr_.cols();
	if (n < p || p == 0) throw std::invalid_argument("QrLeastSquares: need n >= p >= 1");
	if (!qr_.allFinite()) throw std::invalid_argument("QrLeastSquares: non-finite design");
	diag_.assign(p, 0.0);
	vtv_.assign(p, 0.0);
	for (std::size_t k = 0; k < p; ++k) {
		double nrm = 0.0;
		for (std::size_t i = k; i < n; ++i) nrm += qr_(i, k) * qr_(i, k);
		nrm = std::sqrt(nrm);
		if (nrm == 0.0) throw std::invalid_argument("QrLeastSquares: rank-deficient design");
		const double alpha = qr_(k, k) > 0.0 ? -nrm : nrm;
		qr_(k, k) -= alpha; // column k rows k.. now holds the Householder vector
		diag_[k] = alpha;
		double vtv = 0.0;
		for (std::size_t i = k; i < n; ++i) vtv += qr_(i, k) * qr_(i, k);
		vtv_[k] = vtv;
		for (std::size_t j = k + 1; j < p; ++j) {
			double dot = 0.0;
			for (std::size_t i = k; i < n; ++i) dot += qr_(i, k) * qr_(i, j);
			const double s = 2.0 * dot / vtv;
			for (std::size_t i = k; i < n; ++i) qr_(i, j) -= s * qr_(i, k);
		}
	}
}

std::vector<double> QrLeastSquares::solve(const std::vector<double>& target) const {
	const std::size_t n = qr_.rows();
	const std::size_t p = qr_.cols();
	if (target.size() != n) throw std::invalid_argument("QrLeastSquares: length mismatch");
	std::vector<double> b = target;
	for (std::size_t k = 0; k < p; ++k) {
		double dot = 0.0;
		for (std::size_t i = k; i < n; ++i) dot += qr_(i, k) * b[i];
		const double s = 2.0 * dot / vtv_[k];
		for (std::size_t i = k; i < n; ++i) b[i] -= s * qr_(i, k);
	}
	std::vector<double> x(p, 0.0);
	for (std::size_t k = p; k-- > 0;) {
		double s = b[k];
		for (std::size_t j = k + 1; j < p; ++j) s -= qr_(k, j) * x[j];
		x[k] = s / diag_[k];
	}
	return x;
}

std::vector<double> matVec(const RealMatrix& a, const std::vector<double>& x) {
	if (x.size() != a.cols()) throw std::invalid_argument("matVec: shape mismatch");
	std::vector<double> y(a.rows(), 0.0);
	for (std::size_t r = 0; r < a.rows(); ++r) {
		double s = 0.0;
		for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
		y[r] = s;
	}
	return y;
}

std::vector<double> matTVec(const RealMatrix& a, const std::vector<double>& x) {
	if (x.size() != a.rows()) throw std::invalid_argument("matTVec: shape mismatch");
	std::vector<double> y(a.cols(), 0.0);
	for (std::size_t r = 0; r < a.rows(); ++r) {
		for (std::size_t c = 0; c < a.cols(); ++c) y[c] += a(r, c) * x[r];
	}
	return y;
}

RealMatrix matMul(const RealMatrix& a, const RealMatrix& b) {
	if (a.cols() != b.rows()) throw std::invalid_argument("matMul: shape mismatch");
	RealMatrix out(a.rows(), b.cols());
	for (std::size_t i = 0; i < a.rows(); ++i) {
		for (std::size_t k = 0; k < a.cols(); ++k) {
			const double aik = a(i, k);
			if (aik == 0.0) continue;
			for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
		}
	}
	return out;
}

} // namespace freqcast
