#pragma once

#include "freqcast/data.hpp"
#include "freqcast/matrix.hpp"

#include <string>
#include <utility>
#include <vector>

namespace freqcast {

/// One residual-on-residual regression: the partial effect of a treatment on
/// an outcome after both are orthogonalized against the controls.
struct DmlEstimate {
	double beta = 0.0;
	double stderrBeta = 0.0;
	double residualVarTreatment = 0.0;
	double residualVarOutcome = 0.0;
	std::size_t nUsed = 0;
	/// Set when the treatment residual is degenerate; beta is then undefined.
	bool degenerate = false;
};

enum class CorrDomain { Time, FreqReal, FreqImag };

struct CorrMatrix {
	std::size_t size = 0;
	RealMatrix values;
	CorrDomain domain = CorrDomain::Time;
};

/// Two-step estimate: stage 1 regresses outcome and treatment on the controls
/// (with intercept) and keeps the residuals, stage 2 regresses the outcome
/// residual on the treatment residual without an intercept.
DmlEstimate dmlPartialCorr(const std::vector<double>& treatment,
                           const std::vector<double>& outcome,
                           const RealMatrix& controls);

struct CorrOptions {
	/// Use the full input window as controls instead of only its last step.
	bool fullInputControls = false;
	std::size_t minWindows = 30;
};

/// Step-by-step partial correlations of the label sequence for one variable,
/// conditioned on the input window. Entry (t', t) for t < t' is the DML beta
/// with Y_t as treatment and Y_t' as outcome; the diagonal is 1 and the upper
/// triangle mirrors the lower for display.
CorrMatrix timeCorrMatrix(const WindowedDataset& dataset, std::size_t variable,
                          const CorrOptions& options = {});

/// Same construction on the one-sided DFT of each label window, run
/// separately on the real and imaginary parts of the coefficients.
std::pair<CorrMatrix, CorrMatrix> freqCorrMatrix(const WindowedDataset& dataset,
                                                 std::size_t variable,
                                                 const CorrOptions& options = {});

/// Fraction of off-diagonal entries with |value| > threshold.
double offDiagonalExceedance(const CorrMatrix& matrix, double threshold);

void writeCorrCsv(const CorrMatrix& matrix, const std::string& path);
void writeCorrJson(const CorrMatrix& matrix, std::size_t labelLength,
                   const std::string& path);

} // namespace freqcast
