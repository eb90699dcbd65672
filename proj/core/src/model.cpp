#include "freqcast/model.hpp"

#include "freqcast/rng.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace freqcast {

namespace {

void xavierFill(std::vector<double>& dst, std::size_t offset, std::size_t count,
                std::size_t fanIn, std::size_t fanOut, Rng64& rng) {
	const double bound = std::sqrt(6.0 / static_cast<double>(fanIn + fanOut));
	for (std::size_t i = 0; i < count; ++i) {
		dst[offset + i] = bound * (2.0 * rng.nextUniform() - 1.0);
	}
}

} // namespace

// ---------------------------------------------------------------------------
// LinearDF
// ---------------------------------------------------------------------------

LinearDF::LinearDF(std::size_t h, std::size_t t, std::size_t d, std::uint64_t seed,
                   bool perChannel)
	: perChannel_(perChannel) {
	if (h == 0 || t == 0 || d == 0) {
		throw std::invalid_argument("LinearDF: dimensions must be positive");
	}
	h_ = h;
	t_ = t;
	d_ = d;
	const std::size_t maps = perChannel_ ? d : 1;
	params_.assign(maps * h * t + t, 0.0);
	Rng64 rng(seed);
	xavierFill(params_, 0, maps * h * t, h, t, rng);
}

double& LinearDF::weight(std::size_t h, std::size_t t, std::size_t channel) {
	const std::size_t block = perChannel_ ? channel : 0;
	return params_[block * h_ * t_ + h * t_ + t];
}

double& LinearDF::bias(std::size_t t) {
	const std::size_t maps = perChannel_ ? d_ : 1;
	return params_[maps * h_ * t_ + t];
}

SeriesMatrix LinearDF::forward(const SeriesMatrix& input) const {
	if (input.rows() != h_ || input.cols() != d_) {
		throw std::invalid_argument("LinearDF::forward: input shape mismatch");
	}
	const std::size_t biasOff = (perChannel_ ? d_ : 1) * h_ * t_;
	SeriesMatrix out(t_, d_);
	for (std::size_t d = 0; d < d_; ++d) {
		const std::size_t block = perChannel_ ? d * h_ * t_ : 0;
		for (std::size_t t = 0; t < t_; ++t) {
			double s = params_[biasOff + t];
			for (std::size_t h = 0; h < h_; ++h) {
				s += params_[block + h * t_ + t] * input(h, d);
			}
			out(t, d) = s;
		}
	}
	return out;
}

std::vector<double> LinearDF::backward(const SeriesMatrix& input,
                                       const RealMatrix& gradOut) const {
	if (gradOut.rows() != t_ || gradOut.cols() != d_) {
		throw std::invalid_argument("LinearDF::backward: gradient shape mismatch");
	}
	std::vector<double> grad(params_.size(), 0.0);
	const std::size_t biasOff = (perChannel_ ? d_ : 1) * h_ * t_;
	for (std::size_t d = 0; d < d_; ++d) {
		const std::size_t block = perChannel_ ? d * h_ * t_ : 0;
		for (std::size_t t = 0; t < t_; ++t) {
			const double g = gradOut(t, d);
			grad[biasOff + t] += g;
			for (std::size_t h = 0; h < h_; ++h) {
				grad[block + h * t_ + t] += g * input(h, d);
			}
		}
	}
	return grad;
}

std::unique_ptr<ForecastModel> LinearDF::clone() const {
	return std::make_unique<LinearDF>(*this);
}

// ---------------------------------------------------------------------------
// MlpDF
// ---------------------------------------------------------------------------

MlpDF::MlpDF(std::size_t h, std::size_t t, std::size_t d, std::size_t hidden,
             std::uint64_t seed)
	: hidden_(hidden) {
	if (h == 0 || t == 0 || d == 0 || hidden == 0) {
		throw std::invalid_argument("MlpDF: dimensions must be positive");
	}
	h_ = h;
	t_ = t;
	d_ = d;
	const std::size_t in = h * d;
	const std::size_t out = t * d;
	params_.assign(in * hidden + hidden + hidden * out + out, 0.0);
	Rng64 rng(seed);
	xavierFill(params_, 0, in * hidden, in, hidden, rng);
	xavierFill(params_, in * hidden + hidden, hidden * out, hidden, out, rng);
}

std::vector<double> MlpDF::hiddenPreact(const SeriesMatrix& input) const {
	const std::size_t in = h_ * d_;
	std::vector<double> pre(params_.begin() + static_cast<std::ptrdiff_t>(in * hidden_),
	                        params_.begin() + static_cast<std::ptrdiff_t>(in * hidden_ + hidden_));
	for (std::size_t i = 0; i < in; ++i) {
		const double x = input.data()[i];
		if (x == 0.0) continue;
		const double* w = params_.data() + i * hidden_;
		for (std::size_t j = 0; j < hidden_; ++j) pre[j] += w[j] * x;
	}
	return pre;
}

SeriesMatrix MlpDF::forward(const SeriesMatrix& input) const {
	if (input.rows() != h_ || input.cols() != d_) {
		throw std::invalid_argument("MlpDF::forward: input shape mismatch");
	}
	const std::size_t in = h_ * d_;
	const std::size_t out = t_ * d_;
	const std::size_t w2Off = in * hidden_ + hidden_;
	const std::size_t b2Off = w2Off + hidden_ * out;

	std::vector<double> z = hiddenPreact(input);
	for (double& v : z) v = std::tanh(v);

	SeriesMatrix result(t_, d_);
	for (std::size_t k = 0; k < out; ++k) result.data()[k] = params_[b2Off + k];
	for (std::size_t j = 0; j < hidden_; ++j) {
		const double zj = z[j];
		const double* w = params_.data() + w2Off + j * out;
		for (std::size_t k = 0; k < out; ++k) result.data()[k] += w[k] * zj;
	}
	return result;
}

std::vector<double> MlpDF::backward(const SeriesMatrix& input,
                                    const RealMatrix& gradOut) const {
	if (gradOut.rows() != t_ || gradOut.cols() != d_) {
		throw std::invalid_argument("MlpDF::backward: gradient shape mismatch");
	}
	const std::size_t in = h_ * d_;
	const std::size_t out = t_ * d_;
	const std::size_t b1Off = in * hidden_;
	const std::size_t w2Off = b1Off + hidden_;
	const std::size_t b2Off = w2Off + hidden_ * out;

	std::vector<double> z = hiddenPreact(input);
	for (double& v : z) v = std::tanh(v);

	std::vector<double> grad(params_.size(), 0.0);
	// Output layer.
	for (std::size_t k = 0; k < out; ++k) grad[b2Off + k] = gradOut.data()[k];
	std::vector<double> gz(hidden_, 0.0);
	for (std::size_t j = 0; j < hidden_; ++j) {
		const double* w = params_.data() + w2Off + j * out;
		double* gw = grad.data() + w2Off + j * out;
		double s = 0.0;
		for (std::size_t k = 0; k < out; ++k) {
			const double g = gradOut.data()[k];
			gw[k] = z[j] * g;
			s += w[k] * g;
		}
		gz[j] = s * (1.0 - z[j] * z[j]);
	}
	// Hidden layer.
	for (std::size_t j = 0; j < hidden_; ++j) grad[b1Off + j] = gz[j];
	for (std::size_t i = 0; i < in; ++i) {
		const double x = input.data()[i];
		if (x == 0.0) continue;
		double* gw = grad.data() + i * hidden_;
		for (std::size_t j = 0; j < hidden_; ++j) gw[j] = x * gz[j];
	}
	return grad;
}

std::unique_ptr<ForecastModel> MlpDF::clone() const {
	return std::make_unique<MlpDF>(*this);
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

AdamState::AdamState(std::size_t paramCount, double lr)
	: lr(lr), m(paramCount, 0.0), v(paramCount, 0.0) {}

void adamStep(AdamState& state, std::vector<double>& params,
              const std::vector<double>& grads) {
	if (params.size() != state.m.size() || grads.size() != state.m.size()) {
		throw std::invalid_argument("adamStep: size mismatch");
	}
	state.step += 1;
	const double t = static_cast<double>(state.step);
	const double c1 = 1.0 - std::pow(state.beta1, t);
	const double c2 = 1.0 - std::pow(state.beta2, t);
	for (std::size_t i = 0; i < params.size(); ++i) {
		state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
		state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
		const double mHat = state.m[i] / c1;
		const double vHat = state.v[i] / c2;
		params[i] -= state.lr * mHat / (std::sqrt(vHat) + state.eps);
	}
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

double evaluateMse(const ForecastModel& model, const WindowedDataset& data) {
	double sum = 0.0;
	std::size_t elems = 0;
	for (std::size_t w = 0; w < data.count(); ++w) {
		const SeriesMatrix yhat = model.forward(data.input(w));
		const SeriesMatrix y = data.label(w);
		for (std::size_t i = 0; i < y.size(); ++i) {
			const double r = yhat.data()[i] - y.data()[i];
			sum += r * r;
		}
		elems += y.size();
	}
	return sum / static_cast<double>(elems);
}

TrainReport fit(ForecastModel& model, const WindowedDataset& train,
                const WindowedDataset& val, const TrainConfig& cfg) {
	if (train.count() == 0 || val.count() == 0) {
		throw std::invalid_argument("fit: empty train or validation set");
	}
	if (cfg.patience >= cfg.maxEpochs) {
		throw std::invalid_argument("fit: patience must be smaller than maxEpochs");
	}
	const std::size_t batch = cfg.batchSize == 0 ? 32 : cfg.batchSize;

	Rng64 shuffleRng(cfg.seed);
	AdamState adam(model.params().size(), cfg.lr);
	TrainReport report;
	std::vector<double> bestParams = model.params();
	double bestVal = std::numeric_limits<double>::infinity();
	std::size_t sinceImprove = 0;

	for (std::size_t epoch = 0; epoch < cfg.maxEpochs; ++epoch) {
		const std::vector<std::size_t> order = shuffledIndices(train.count(), shuffleRng);
		double epochLoss = 0.0;
		std::size_t batches = 0;
		for (std::size_t start = 0; start < order.size(); start += batch) {
			const std::size_t stop = std::min(start + batch, order.size());
			const double invB = 1.0 / static_cast<double>(stop - start);
			std::vector<double> grad(model.params().size(), 0.0);
			double batchLoss = 0.0;
			for (std::size_t b = start; b < stop; ++b) {
				const SeriesMatrix input = train.input(order[b]);
				const SeriesMatrix label = train.label(order[b]);
				const SeriesMatrix yhat = model.forward(input);
				const LossValueGrad lv = combinedLoss(yhat, label, cfg.loss);
				batchLoss += lv.value;
				const std::vector<double> g = model.backward(input, lv.grad);
				for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
			}
			for (double& g : grad) g *= invB;
			adamStep(adam, model.params(), grad);
			epochLoss += batchLoss * invB;
			++batches;
		}
		report.trainLoss.push_back(epochLoss / static_cast<double>(batches));

		const double valMse = evaluateMse(model, val);
		report.valMse.push_back(valMse);
		if (valMse < bestVal) {
			bestVal = valMse;
			bestParams = model.params();
			report.bestEpoch = epoch;
			sinceImprove = 0;
		} else {
			++sinceImprove;
			if (sinceImprove >= cfg.patience) {
				report.stoppedEarly = true;
				break;
			}
		}
	}
	model.params() = bestParams;
	return report;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'F', 'Q', 'C', 'K', 'P', 'T', '0', '1'};

void writeU64(std::ostream& out, std::uint64_t v) {
	out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t readU64(std::istream& in) {
	std::uint64_t v = 0;
	in.read(reinterpret_cast<char*>(&v), sizeof(v));
	return v;
}

} // namespace

void saveCheckpoint(const ForecastModel& model, const std::string& path) {
	std::ofstream out(path, std::ios::binary);
	if (!out) throw std::runtime_error("saveCheckpoint: cannot open " + path);
	out.write(kMagic, sizeof(kMagic));
	const std::string kind = model.kind();
	writeU64(out, kind.size());
	out.write(kind.data(), static_cast<std::streamsize>(kind.size()));
	writeU64(out, model.inputLength());
	writeU64(out, model.labelLength());
	writeU64(out, model.dims());
	std::uint64_t extra = 0;
	if (const auto* mlp = dynamic_cast<const MlpDF*>(&model)) extra = mlp->hidden();
	writeU64(out, extra);
	writeU64(out, model.params().size());
	out.write(reinterpret_cast<const char*>(model.params().data()),
	          static_cast<std::streamsize>(model.params().size() * sizeof(double)));
	if (!out) throw std::runtime_error("saveCheckpoint: write failed for " + path);
}

std::unique_ptr<ForecastModel> loadCheckpoint(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw std::runtime_error("loadCheckpoint: cannot open " + path);
	char magic[8];
	in.read(magic, sizeof(magic));
	if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
		throw std::runtime_error("loadCheckpoint: bad magic in " + path);
	}
	const std::uint64_t kindLen = readU64(in);
	std::string kind(kindLen, '\0');
	in.read(kind.data(), static_cast<std::streamsize>(kindLen));
	const std::uint64_t h = readU64(in);
	const std::uint64_t t = readU64(in);
	const std::uint64_t d = readU64(in);
	const std::uint64_t extra = readU64(in);
	const std::uint64_t count = readU64(in);

	std::unique_ptr<ForecastModel> model;
	if (kind == "linear" || kind == "linear_pc") {
		model = std::make_unique<LinearDF>(h, t, d, 0, kind == "linear_pc");
	} else if (kind == "mlp") {
		model = std::make_unique<MlpDF>(h, t, d, extra, 0);
	} else {
		throw std::runtime_error("loadCheckpoint: unknown model kind '" + kind + "'");
	}
	if (model->params().size() != count) {
		throw std::runtime_error("loadCheckpoint: parameter count mismatch in " + path);
	}
	in.read(reinterpret_cast<char*>(model->params().data()),
	        static_cast<std::streamsize>(count * sizeof(double)));
	if (!in) throw std::runtime_error("loadCheckpoint: truncated file " + path);
	return model;
}

} // namespace freqcast
