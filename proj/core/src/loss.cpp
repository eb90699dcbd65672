#include "freqcast/loss.hpp"

#include "freqcast/linalg.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace freqcast {

namespace {

using cd = std::complex<double>;

constexpr double kKinkEps = 1e-12;
constexpr double kPhaseSkipEps = 1e-9;

void requireSameShape(const SeriesMatrix& yhat, const SeriesMatrix& y) {
	if (!yhat.sameShape(y)) {
		throw std::invalid_argument("loss: forecast and label shapes differ");
	}
	if (yhat.size() == 0) {
		throw std::invalid_argument("loss: empty input");
	}
}

double wrapAngle(double a) {
	// Wrap to (-pi, pi].
	while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
	while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
	return a;
}

// Projection operators are reused heavily inside training loops; cache them
// per (kind, length) with the full K == T basis.
const RealMatrix& cachedProjectionOperator(BasisKind kind, std::size_t length) {
	static std::mutex mtx;
	static std::map<std::pair<int, std::size_t>, std::unique_ptr<RealMatrix>> cache;
	std::lock_guard<std::mutex> lock(mtx);
	auto key = std::make_pair(static_cast<int>(kind), length);
	auto it = cache.find(key);
	if (it == cache.end()) {
		BasisMatrix basis = buildBasis(kind, length, length);
		it = cache.emplace(key, std::make_unique<RealMatrix>(projectionOperator(basis))).first;
	}
	return *it->second;
}

LossValueGrad fourierFrequencyLoss(const SeriesMatrix& yhat, const SeriesMatrix& y,
                                   const LossConfig& cfg) {
	const ComplexMatrix fh = dftForward(yhat, cfg.axis);
	const ComplexMatrix fy = dftForward(y, cfg.axis);
	const double m = static_cast<double>(fh.size());

	double value = 0.0;
	ComplexMatrix gradSpec(fh.rows(), fh.cols());
	for (std::size_t i = 0; i < fh.size(); ++i) {
		const cd zh = fh.data()[i];
		const cd zy = fy.data()[i];
		cd g(0.0, 0.0);
		switch (cfg.variant) {
		case LossVariant::Full: {
			const cd r = zh - zy;
			if (cfg.splitComplexL1) {
				value += std::abs(r.real()) + std::abs(r.imag());
				const double sr = r.real() > kKinkEps ? 1.0 : (r.real() < -kKinkEps ? -1.0 : 0.0);
				const double si = r.imag() > kKinkEps ? 1.0 : (r.imag() < -kKinkEps ? -1.0 : 0.0);
				g = cd(sr, si);
			} else {
				const double mod = std::abs(r);
				value += mod;
				if (mod > kKinkEps) g = r / mod;
			}
			break;
		}
		case LossVariant::AmplitudeOnly: {
			const double ah = std::abs(zh);
			const double ay = std::abs(zy);
			const double diff = ah - ay;
			value += std::abs(diff);
			if (std::abs(diff) > kKinkEps && ah > kKinkEps) {
				const double s = diff > 0.0 ? 1.0 : -1.0;
				g = s * zh / ah;
			}
			break;
		}
		case LossVariant::PhaseOnly: {
			const double ay = std::abs(zy);
			const double ah = std::abs(zh);
			if (ay < kPhaseSkipEps || ah < kKinkEps) break;
			const double delta = wrapAngle(std::arg(zh) - std::arg(zy));
			value += ay * std::abs(delta);
			if (std::abs(delta) > kKinkEps) {
				const double s = delta > 0.0 ? 1.0 : -1.0;
				// d(arg z)/d(re, im) = (-im, re)/|z|^2, packed as i*z/|z|^2.
				g = ay * s * cd(0.0, 1.0) * zh / (ah * ah);
			}
			break;
		}
		}
		gradSpec.data()[i] = g / m;
	}

	const ComplexMatrix back = dftInverseComplex(gradSpec, cfg.axis);
	LossValueGrad out;
	out.value = value / m;
	out.grad = RealMatrix(yhat.rows(), yhat.cols());
	for (std::size_t i = 0; i < back.size(); ++i) out.grad.data()[i] = back.data()[i].real();
	return out;
}

LossValueGrad polynomialFrequencyLoss(const SeriesMatrix& yhat, const SeriesMatrix& y,
                                      const LossConfig& cfg) {
	if (cfg.variant != LossVariant::Full) {
		throw std::invalid_argument(
			"frequencyLoss: amplitude/phase variants require the Fourier basis");
	}
	const RealMatrix& op = cachedProjectionOperator(cfg.basis, yhat.rows());
	const RealMatrix ch = matMul(op, yhat);
	const RealMatrix cy = matMul(op, y);
	const double m = static_cast<double>(ch.size());

	double value = 0.0;
	RealMatrix sign(ch.rows(), ch.cols());
	for (std::size_t i = 0; i < ch.size(); ++i) {
		const double r = ch.data()[i] - cy.data()[i];
		value += std::abs(r);
		sign.data()[i] = r > kKinkEps ? 1.0 : (r < -kKinkEps ? -1.0 : 0.0);
	}
	LossValueGrad out;
	out.value = value / m;
	out.grad = matMul(op.transposed(), sign);
	for (double& g : out.grad.data()) g /= m;
	return out;
}

} // namespace

LossValueGrad temporalLoss(const SeriesMatrix& yhat, const SeriesMatrix& y) {
	requireSameShape(yhat, y);
	const double m = static_cast<double>(yhat.size());
	LossValueGrad out;
	out.grad = RealMatrix(yhat.rows(), yhat.cols());
	double value = 0.0;
	for (std::size_t i = 0; i < yhat.size(); ++i) {
		const double r = yhat.data()[i] - y.data()[i];
		value += r * r;
		out.grad.data()[i] = 2.0 * r / m;
	}
	out.value = value / m;
	return out;
}

LossValueGrad frequencyLoss(const SeriesMatrix& yhat, const SeriesMatrix& y,
                            const LossConfig& cfg) {
	requireSameShape(yhat, y);
	if (cfg.basis == BasisKind::Fourier) {
		return fourierFrequencyLoss(yhat, y, cfg);
	}
	return polynomialFrequencyLoss(yhat, y, cfg);
}

LossValueGrad combinedLoss(const SeriesMatrix& yhat, const SeriesMatrix& y,
                           const LossConfig& cfg) {
	if (cfg.alpha < 0.0 || cfg.alpha > 1.0) {
		throw std::invalid_argument("combinedLoss: alpha must lie in [0, 1]");
	}
	if (cfg.alpha == 0.0) return temporalLoss(yhat, y);
	if (cfg.alpha == 1.0) return frequencyLoss(yhat, y, cfg);

	const LossValueGrad tmp = temporalLoss(yhat, y);
	const LossValueGrad feq = frequencyLoss(yhat, y, cfg);
	LossValueGrad out;
	out.value = cfg.alpha * feq.value + (1.0 - cfg.alpha) * tmp.value;
	out.grad = RealMatrix(yhat.rows(), yhat.cols());
	for (std::size_t i = 0; i < out.grad.size(); ++i) {
		out.grad.data()[i] =
			cfg.alpha * feq.grad.data()[i] + (1.0 - cfg.alpha) * tmp.grad.data()[i];
	}
	return out;
}

double biasFormula(const std::vector<double>& y, const std::vector<double>& yhat,
                   const RealMatrix& rho, double sigma) {
	const std::size_t t = y.size();
	if (yhat.size() != t || rho.rows() != t || rho.cols() != t) {
		throw std::invalid_argument("biasFormula: shape mismatch");
	}
	if (!(sigma > 0.0)) {
		throw std::invalid_argument("biasFormula: sigma must be positive");
	}
	const double denom = 2.0 * sigma * sigma;
	double mseTerm = 0.0;
	double nllTerm = 0.0;
	for (std::size_t i = 0; i < t; ++i) {
		const double e = y[i] - yhat[i];
		mseTerm += e * e / denom;
		double rhoSq = 0.0;
		double corrected = yhat[i];
		for (std::size_t j = 0; j < i; ++j) {
			const double r = rho(i, j);
			rhoSq += r * r;
			corrected += r * (y[j] - yhat[j]);
		}
		if (rhoSq >= 1.0) {
			throw std::invalid_argument("biasFormula: sum of squared partial correlations >= 1");
		}
		const double resid = y[i] - corrected;
		nllTerm += resid * resid / (denom * (1.0 - rhoSq));
	}
	return mseTerm - nllTerm;
}

} // namespace freqcast
