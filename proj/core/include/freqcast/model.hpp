#pragma once

#include "freqcast/data.hpp"
#include "freqcast/loss.hpp"
#include "freqcast/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace freqcast {

/// Direct multi-output forecast model g: H x D -> T x D with a flat parameter
/// vector so the optimizer stays model-agnostic.
class ForecastModel {
public:
	virtual ~ForecastModel() = default;

	virtual SeriesMatrix forward(const SeriesMatrix& input) const = 0;
	/// Parameter gradient (same layout as params()) given dLoss/dForecast.
	virtual std::vector<double> backward(const SeriesMatrix& input,
	                                     const RealMatrix& gradOut) const = 0;

	virtual std::vector<double>& params() = 0;
	virtual const std::vector<double>& params() const = 0;

	virtual std::unique_ptr<ForecastModel> clone() const = 0;
	virtual std::string kind() const = 0;

	std::size_t inputLength() const { return h_; }
	std::size_t labelLength() const { return t_; }
	std::size_t dims() const { return d_; }

protected:
	std::size_t h_ = 0, t_ = 0, d_ = 0;
};

/// Channel-shared linear map: forecast(t, d) = sum_h W(h, t) input(h, d) + b(t).
/// The per-channel flag gives each variable its own H x T map.
class LinearDF final : public ForecastModel {
public:
	LinearDF(std::size_t h, std::size_t t, std::size_t d, std::uint64_t seed,
	         bool perChannel = false);

	SeriesMatrix forward(const SeriesMatrix& input) const override;
	std::vector<double> backward(const SeriesMatrix& input,
	                             const RealMatrix& gradOut) const override;
	std::vector<double>& params() override { return params_; }
	const std::vector<double>& params() const override { return params_; }
	std::unique_ptr<ForecastModel> clone() const override;
	std::string kind() const override { return perChannel_ ? "linear_pc" : "linear"; }

	bool perChannel() const { return perChannel_; }
	double& weight(std::size_t h, std::size_t t, std::size_t channel = 0);
	double& bias(std::size_t t);

private:
	bool perChannel_ = false;
	std::vector<double> params_; // [weights..., bias(T)]
};

/// Two-layer MLP on the flattened input, tanh hidden activation.
class MlpDF final : public ForecastModel {
public:
	MlpDF(std::size_t h, std::size_t t, std::size_t d, std::size_t hidden,
	      std::uint64_t seed);

	SeriesMatrix forward(const SeriesMatrix& input) const override;
	std::vector<double> backward(const SeriesMatrix& input,
	                             const RealMatrix& gradOut) const override;
	std::vector<double>& params() override { return params_; }
	const std::vector<double>& params() const override { return params_; }
	std::unique_ptr<ForecastModel> clone() const override;
	std::string kind() const override { return "mlp"; }

	std::size_t hidden() const { return hidden_; }

private:
	std::vector<double> hiddenPreact(const SeriesMatrix& input) const;

	std::size_t hidden_ = 0;
	std::vector<double> params_; // [w1, b1, w2, b2]
};

struct AdamState {
	explicit AdamState(std::size_t paramCount, double lr);

	double lr;
	double beta1 = 0.9;
	double beta2 = 0.999;
	double eps = 1e-8;
	std::uint64_t step = 0;
	std::vector<double> m;
	std::vector<double> v;
};

/// Bias-corrected Adam update, in place.
void adamStep(AdamState& state, std::vector<double>& params,
              const std::vector<double>& grads);

struct TrainConfig {
	double lr = 1e-3;
	std::size_t maxEpochs = 10;
	std::size_t patience = 3;
	std::size_t batchSize = 32;
	std::uint64_t seed = 0;
	LossConfig loss;
};

struct TrainReport {
	std::vector<double> trainLoss;
	std::vector<double> valMse;
	std::size_t bestEpoch = 0;
	bool stoppedEarly = false;
};

/// Mini-batch training with seeded shuffling, per-epoch validation on
/// temporal MSE (independent of the training alpha), best-epoch parameter
/// restore, and early stopping after `patience` non-improving epochs.
TrainReport fit(ForecastModel& model, const WindowedDataset& train,
                const WindowedDataset& val, const TrainConfig& cfg);

/// Mean temporal MSE of the model over every window of a dataset.
double evaluateMse(const ForecastModel& model, const WindowedDataset& data);

void saveCheckpoint(const ForecastModel& model, const std::string& path);
std::unique_ptr<ForecastModel> loadCheckpoint(const std::string& path);

} // namespace freqcast
