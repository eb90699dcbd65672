#pragma once

#include "freqcast/basis.hpp"
#include "freqcast/matrix.hpp"
#include "freqcast/transform.hpp"

#include <vector>

namespace freqcast {

enum class LossVariant { Full, AmplitudeOnly, PhaseOnly };

struct LossConfig {
	double alpha = 0.0;
	TransformAxis axis = TransformAxis::Time;
	BasisKind basis = BasisKind::Fourier;
	LossVariant variant = LossVariant::Full;
	/// Alternate reading of the complex l1: |re| + |im| per bin instead of the
	/// modulus. Off by default.
	bool splitComplexL1 = false;
};

struct LossValueGrad {
	double value = 0.0;
	RealMatrix grad;
};

/// Mean squared error over all T*D elements, grad = 2(yhat - y)/(T*D).
LossValueGrad temporalLoss(const SeriesMatrix& yhat, const SeriesMatrix& y);

/// Mean complex-l1 spectral distance (two-sided spectrum) with exact gradient
/// through the linear transform. Polynomial bases compare projection
/// coefficients instead; amplitude/phase variants require the Fourier basis.
LossValueGrad frequencyLoss(const SeriesMatrix& yhat, const SeriesMatrix& y,
                            const LossConfig& cfg);

/// alpha * frequency + (1 - alpha) * temporal; reproduces the constituents
/// bit-exactly at alpha in {0, 1}.
LossValueGrad combinedLoss(const SeriesMatrix& yhat, const SeriesMatrix& y,
                           const LossConfig& cfg);

/// Gap between the step-independent squared-error objective and the Gaussian
/// chain negative log-likelihood under partial correlations rho (strictly
/// lower triangle used). Zero exactly when all rho vanish.
double biasFormula(const std::vector<double>& y, const std::vector<double>& yhat,
                   const RealMatrix& rho, double sigma);

} // namespace freqcast
