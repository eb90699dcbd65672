#include "freqcast/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace freqcast {

double mse(const SeriesMatrix& yhat, const SeriesMatrix& y) {
	if (!yhat.sameShape(y) || y.size() == 0) {
		throw std::invalid_argument("mse: shape mismatch or empty input");
	}
	double sum = 0.0;
	for (std::size_t i = 0; i < y.size(); ++i) {
		const double r = yhat.data()[i] - y.data()[i];
		sum += r * r;
	}
	return sum / static_cast<double>(y.size());
}

double mae(const SeriesMatrix& yhat, const SeriesMatrix& y) {
	if (!yhat.sameShape(y) || y.size() == 0) {
		throw std::invalid_argument("mae: shape mismatch or empty input");
	}
	double sum = 0.0;
	for (std::size_t i = 0; i < y.size(); ++i) {
		sum += std::abs(yhat.data()[i] - y.data()[i]);
	}
	return sum / static_cast<double>(y.size());
}

double smape(const std::vector<double>& yhat, const std::vector<double>& y) {
	if (yhat.size() != y.size() || y.empty()) {
		throw std::invalid_argument("smape: shape mismatch or empty input");
	}
	double sum = 0.0;
	for (std::size_t i = 0; i < y.size(); ++i) {
		const double denom = std::abs(yhat[i]) + std::abs(y[i]);
		if (denom > 0.0) sum += std::abs(yhat[i] - y[i]) / denom;
	}
	return 200.0 * sum / static_cast<double>(y.size());
}

double mase(const std::vector<double>& yhat, const std::vector<double>& y,
            const std::vector<double>& insample, std::size_t seasonality) {
	if (yhat.size() != y.size() || y.empty()) {
		throw std::invalid_argument("mase: shape mismatch or empty input");
	}
	if (insample.size() <= seasonality || seasonality == 0) {
		throw std::invalid_argument("mase: insample shorter than seasonality");
	}
	double naive = 0.0;
	for (std::size_t t = seasonality; t < insample.size(); ++t) {
		naive += std::abs(insample[t] - insample[t - seasonality]);
	}
	naive /= static_cast<double>(insample.size() - seasonality);
	if (naive == 0.0) {
		throw std::invalid_argument("mase: zero seasonal-naive denominator");
	}
	double err = 0.0;
	for (std::size_t i = 0; i < y.size(); ++i) err += std::abs(yhat[i] - y[i]);
	err /= static_cast<double>(y.size());
	return err / naive;
}

double owa(double smapeValue, double maseValue, double refSmape, double refMase) {
	if (refSmape <= 0.0 || refMase <= 0.0) {
		throw std::invalid_argument("owa: reference metrics must be positive");
	}
	return 0.5 * (smapeValue / refSmape + maseValue / refMase);
}

std::vector<double> seasonalNaiveForecast(const std::vector<double>& insample,
                                          std::size_t seasonality, std::size_t horizon) {
	if (insample.size() < seasonality || seasonality == 0) {
		throw std::invalid_argument("seasonalNaiveForecast: insample shorter than seasonality");
	}
	std::vector<double> out(horizon);
	for (std::size_t i = 0; i < horizon; ++i) {
		out[i] = insample[insample.size() - seasonality + (i % seasonality)];
	}
	return out;
}

} // namespace freqcast
