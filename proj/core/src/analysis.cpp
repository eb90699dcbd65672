#include "freqcast/analysis.hpp"

#include "freqcast/linalg.hpp"
#include "freqcast/transform.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace freqcast {

namespace {

std::vector<double> stage1Residuals(const std::vector<double>& target,
                                    const RealMatrix& controls) {
	const std::size_t n = target.size();
	RealMatrix design(n, controls.cols() + 1);
	for (std::size_t r = 0; r < n; ++r) {
		design(r, 0) = 1.0;
		for (std::size_t c = 0; c < controls.cols(); ++c) design(r, c + 1) = controls(r, c);
	}
	const std::vector<double> coeff = olsSolve(design, target);
	std::vector<double> resid(n);
	for (std::size_t r = 0; r < n; ++r) {
		double fitted = coeff[0];
		for (std::size_t c = 0; c < controls.cols(); ++c) {
			fitted += coeff[c + 1] * controls(r, c);
		}
		resid[r] = target[r] - fitted;
	}
	return resid;
}

double sampleVariance(const std::vector<double>& x) {
	double sum = 0.0;
	for (double v : x) sum += v;
	const double mean = sum / static_cast<double>(x.size());
	double ss = 0.0;
	for (double v : x) {
		const double e = v - mean;
		ss += e * e;
	}
	return ss / static_cast<double>(x.size());
}

RealMatrix controlMatrix(const WindowedDataset& dataset, std::size_t variable,
                         const CorrOptions& options) {
	const std::size_t n = dataset.count();
	if (options.fullInputControls) {
		RealMatrix controls(n, dataset.inputLength());
		for (std::size_t w = 0; w < n; ++w) {
			const SeriesMatrix input = dataset.input(w);
			for (std::size_t h = 0; h < dataset.inputLength(); ++h) {
				controls(w, h) = input(h, variable);
			}
		}
		return controls;
	}
	RealMatrix controls(n, 1);
	for (std::size_t w = 0; w < n; ++w) {
		controls(w, 0) = dataset.lastInputValue(w, variable);
	}
	return controls;
}

// Build the displayed matrix from per-pair treatment/outcome columns:
// column t' of `series` holds the t'-th component across windows.
CorrMatrix pairwiseMatrix(const std::vector<std::vector<double>>& series,
                          const RealMatrix& controls, CorrDomain domain) {
	const std::size_t size = series.size();
	CorrMatrix matrix;
	matrix.size = size;
	matrix.domain = domain;
	matrix.values = RealMatrix(size, size);
	// Stage-1 residuals depend only on the component, not the pair; reuse them.
	std::vector<std::vector<double>> residuals(size);
	for (std::size_t t = 0; t < size; ++t) {
		residuals[t] = stage1Residuals(series[t], controls);
	}
	for (std::size_t t = 0; t < size; ++t) {
		matrix.values(t, t) = 1.0;
		for (std::size_t tp = t + 1; tp < size; ++tp) {
			double sxx = 0.0, sxy = 0.0;
			const auto& x = residuals[t];
			const auto& y = residuals[tp];
			for (std::size_t i = 0; i < x.size(); ++i) {
				sxx += x[i] * x[i];
				sxy += x[i] * y[i];
			}
			const double beta = sxx < 1e-12 ? 0.0 : sxy / sxx;
			matrix.values(tp, t) = beta;
			matrix.values(t, tp) = beta;
		}
	}
	return matrix;
}

} // namespace

DmlEstimate dmlPartialCorr(const std::vector<double>& treatment,
                           const std::vector<double>& outcome,
                           const RealMatrix& controls) {
	const std::size_t n = treatment.size();
	if (outcome.size() != n || controls.rows() != n) {
		throw std::invalid_argument("dmlPartialCorr: length mismatch");
	}
	if (n <= controls.cols() + 2) {
		throw std::invalid_argument("dmlPartialCorr: need n > p + 2");
	}

	const std::vector<double> treatResid = stage1Residuals(treatment, controls);
	const std::vector<double> outResid = stage1Residuals(outcome, controls);

	DmlEstimate est;
	est.nUsed = n;
	est.residualVarTreatment = sampleVariance(treatResid);
	est.residualVarOutcome = sampleVariance(outResid);

	double sxx = 0.0, sxy = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		sxx += treatResid[i] * treatResid[i];
		sxy += treatResid[i] * outResid[i];
	}
	if (sxx < 1e-12) {
		est.degenerate = true;
		return est;
	}
	est.beta = sxy / sxx;

	double rss = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		const double e = outResid[i] - est.beta * treatResid[i];
		rss += e * e;
	}
	est.stderrBeta = std::sqrt(rss / (static_cast<double>(n - 1) * sxx));
	return est;
}

CorrMatrix timeCorrMatrix(const WindowedDataset& dataset, std::size_t variable,
                          const CorrOptions& options) {
	if (dataset.count() < options.minWindows) {
		throw std::invalid_argument("timeCorrMatrix: too few windows");
	}
	if (variable >= dataset.dims()) {
		throw std::invalid_argument("timeCorrMatrix: variable index out of range");
	}
	const std::size_t t = dataset.labelLength();
	const RealMatrix controls = controlMatrix(dataset, variable, options);
	std::vector<std::vector<double>> series(t, std::vector<double>(dataset.count()));
	for (std::size_t w = 0; w < dataset.count(); ++w) {
		const SeriesMatrix label = dataset.label(w);
		for (std::size_t step = 0; step < t; ++step) {
			series[step][w] = label(step, variable);
		}
	}
	return pairwiseMatrix(series, controls, CorrDomain::Time);
}

std::pair<CorrMatrix, CorrMatrix> freqCorrMatrix(const WindowedDataset& dataset,
                                                 std::size_t variable,
                                                 const CorrOptions& options) {
	if (dataset.count() < options.minWindows) {
		throw std::invalid_argument("freqCorrMatrix: too few windows");
	}
	if (variable >= dataset.dims()) {
		throw std::invalid_argument("freqCorrMatrix: variable index out of range");
	}
	const std::size_t t = dataset.labelLength();
	const std::size_t bins = t / 2 + 1;
	const RealMatrix controls = controlMatrix(dataset, variable, options);

	std::vector<std::vector<double>> realPart(bins, std::vector<double>(dataset.count()));
	std::vector<std::vector<double>> imagPart(bins, std::vector<double>(dataset.count()));
	std::vector<double> column(t);
	for (std::size_t w = 0; w < dataset.count(); ++w) {
		const SeriesMatrix label = dataset.label(w);
		for (std::size_t step = 0; step < t; ++step) column[step] = label(step, variable);
		const auto spectrum = dftForward1d(column);
		for (std::size_t k = 0; k < bins; ++k) {
			realPart[k][w] = spectrum[k].real();
			imagPart[k][w] = spectrum[k].imag();
		}
	}
	return {pairwiseMatrix(realPart, controls, CorrDomain::FreqReal),
	        pairwiseMatrix(imagPart, controls, CorrDomain::FreqImag)};
}

double offDiagonalExceedance(const CorrMatrix& matrix, double threshold) {
	std::size_t total = 0;
	std::size_t above = 0;
	for (std::size_t i = 0; i < matrix.size; ++i) {
		for (std::size_t j = 0; j < matrix.size; ++j) {
			if (i == j) continue;
			++total;
			if (std::abs(matrix.values(i, j)) > threshold) ++above;
		}
	}
	return total == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(total);
}

namespace {

const char* domainTag(CorrDomain domain) {
	switch (domain) {
	case CorrDomain::Time: return "time";
	case CorrDomain::FreqReal: return "freq_real";
	case CorrDomain::FreqImag: return "freq_imag";
	}
	return "unknown";
}

} // namespace

void writeCorrCsv(const CorrMatrix& matrix, const std::string& path) {
	std::ofstream out(path);
	if (!out) throw std::runtime_error("writeCorrCsv: cannot open " + path);
	out.precision(17);
	for (std::size_t i = 0; i < matrix.size; ++i) {
		for (std::size_t j = 0; j < matrix.size; ++j) {
			out << matrix.values(i, j) << (j + 1 < matrix.size ? "," : "\n");
		}
	}
}

void writeCorrJson(const CorrMatrix& matrix, std::size_t labelLength,
                   const std::string& path) {
	nlohmann::json j;
	j["domain"] = domainTag(matrix.domain);
	j["size"] = matrix.size;
	j["label_length"] = labelLength;
	j["values"] = matrix.values.data(); // row-major
	std::ofstream out(path);
	if (!out) throw std::runtime_error("writeCorrJson: cannot open " + path);
	out << j.dump(2) << "\n";
}

} // namespace freqcast
