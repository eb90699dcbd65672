#pragma once

#include "freqcast/matrix.hpp"

#include <optional>
#include <vector>

namespace freqcast {

struct MetricReport {
	double mse = 0.0;
	double mae = 0.0;
	std::optional<double> smape;
	std::optional<double> mase;
	std::optional<double> owa;
	std::size_t nWindows = 0;
};

double mse(const SeriesMatrix& yhat, const SeriesMatrix& y);
double mae(const SeriesMatrix& yhat, const SeriesMatrix& y);

/// SMAPE in [0, 200]; 0/0 terms count as 0.
double smape(const std::vector<double>& yhat, const std::vector<double>& y);

/// Mean absolute error scaled by the in-sample seasonal-naive error at
/// seasonality m. Throws when the seasonal-naive denominator is zero.
double mase(const std::vector<double>& yhat, const std::vector<double>& y,
            const std::vector<double>& insample, std::size_t seasonality);

/// 0.5 * (smape/refSmape + mase/refMase); the reference is the seasonal-naive
/// forecaster evaluated on the same data.
double owa(double smapeValue, double maseValue, double refSmape, double refMase);

/// Seasonal-naive forecast of `horizon` steps from the in-sample tail.
std::vector<double> seasonalNaiveForecast(const std::vector<double>& insample,
                                          std::size_t seasonality, std::size_t horizon);

} // namespace freqcast
