#include "freqcast/analysis.hpp"
#include "freqcast/data.hpp"
#include "freqcast/loss.hpp"
#include "freqcast/metrics.hpp"
#include "freqcast/model.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace freqcast;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

// Exit codes: 0 success, 2 configuration error, 3 data/runtime error.
struct ConfigError : std::runtime_error {
	using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& path, std::uint64_t& bytes) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw DataError("cannot open dataset: " + path);
	std::uint64_t hash = 1469598103934665603ULL;
	bytes = 0;
	char buf[8192];
	while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
		const std::streamsize got = in.gcount();
		for (std::streamsize i = 0; i < got; ++i) {
			hash ^= static_cast<unsigned char>(buf[i]);
			hash *= 1099511628211ULL;
		}
		bytes += static_cast<std::uint64_t>(got);
		if (in.eof()) break;
	}
	return hash;
}

json datasetFingerprint(const std::string& path) {
	std::uint64_t bytes = 0;
	const std::uint64_t checksum = fnv1a(path, bytes);
	return json{{"path", path}, {"bytes", bytes}, {"checksum", checksum}};
}

void writeJson(const json& j, const fs::path& path) {
	std::ofstream out(path);
	if (!out) throw DataError("cannot write " + path.string());
	out << j.dump(2) << "\n";
}

json loadJson(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw DataError("cannot open " + path);
	json j;
	in >> j;
	return j;
}

json makeManifest(const std::string& subcommand, const std::vector<std::string>& args,
                  std::uint64_t seed, const json& fingerprint) {
	return json{{"artifact_version", kArtifactVersion},
	            {"subcommand", subcommand},
	            {"seed", seed},
	            {"dataset", fingerprint},
	            {"args", args}};
}

TransformAxis parseAxis(const std::string& s) {
	if (s == "time") return TransformAxis::Time;
	if (s == "variable") return TransformAxis::Variable;
	if (s == "both") return TransformAxis::Both;
	throw ConfigError("unknown axis: " + s);
}

BasisKind parseBasis(const std::string& s) {
	if (s == "fourier") return BasisKind::Fourier;
	if (s == "legendre") return BasisKind::Legendre;
	if (s == "chebyshev") return BasisKind::Chebyshev;
	if (s == "laguerre") return BasisKind::Laguerre;
	throw ConfigError("unknown basis: " + s);
}

LossVariant parseVariant(const std::string& s) {
	if (s == "full") return LossVariant::Full;
	if (s == "amplitude") return LossVariant::AmplitudeOnly;
	if (s == "phase") return LossVariant::PhaseOnly;
	throw ConfigError("unknown loss variant: " + s);
}

SplitSpec parseSplit(const std::string& s) {
	std::vector<double> parts;
	std::stringstream ss(s);
	std::string cell;
	while (std::getline(ss, cell, ',')) parts.push_back(std::stod(cell));
	if (parts.size() != 3) throw ConfigError("--split expects three comma-separated values");
	if (parts[0] > 1.0 || parts[1] > 1.0 || parts[2] > 1.0) {
		// Values above 1 are read as explicit row counts.
		return SplitSpec::byCount(static_cast<std::size_t>(parts[0]),
		                          static_cast<std::size_t>(parts[1]),
		                          static_cast<std::size_t>(parts[2]));
	}
	return SplitSpec::byFraction(parts[0], parts[1], parts[2]);
}

struct CommonTrainFlags {
	std::string data;
	bool timestampCol = false;
	std::size_t h = 96, t = 96;
	std::string model = "linear";
	std::size_t hidden = 128;
	double alpha = 0.0;
	std::string axis = "time";
	std::string basis = "fourier";
	std::string variant = "full";
	bool splitL1 = false;
	double lr = 1e-3;
	std::size_t batch = 32;
	std::uint64_t seed = 0;
	std::string split = "0.6,0.2,0.2";
	double trainFraction = 1.0;
	bool noStandardize = false;
	std::string out = "run";
};

void addTrainFlags(CLI::App* cmd, CommonTrainFlags& f, bool needAlpha) {
	cmd->add_option("--data", f.data, "input CSV path")->required();
	cmd->add_flag("--timestamp-col", f.timestampCol, "first CSV column is a timestamp");
	cmd->add_option("--input-len", f.h, "input window length");
	cmd->add_option("--horizon", f.t, "forecast horizon");
	cmd->add_option("--model", f.model, "linear | linear-pc | mlp");
	cmd->add_option("--hidden", f.hidden, "MLP hidden width");
	if (needAlpha) {
		cmd->add_option("--alpha", f.alpha, "frequency loss weight in [0,1]")
			->check(CLI::Range(0.0, 1.0));
	}
	cmd->add_option("--axis", f.axis, "time | variable | both");
	cmd->add_option("--basis", f.basis, "fourier | legendre | chebyshev | laguerre");
	cmd->add_option("--variant", f.variant, "full | amplitude | phase");
	cmd->add_flag("--split-l1", f.splitL1, "use |re|+|im| instead of the complex modulus");
	cmd->add_option("--lr", f.lr, "learning rate");
	cmd->add_option("--batch", f.batch, "mini-batch size");
	cmd->add_option("--seed", f.seed, "RNG seed");
	cmd->add_option("--split", f.split, "train,val,test fractions (or row counts)");
	cmd->add_option("--train-fraction", f.trainFraction,
	                "keep only this most-recent fraction of the training segment")
		->check(CLI::Range(0.0, 1.0));
	cmd->add_flag("--no-standardize", f.noStandardize, "skip per-variable z-scoring");
	cmd->add_option("--out", f.out, "output directory");
}

struct PreparedData {
	SplitResult split;
	Scaler scaler;
	WindowedDataset train;
	WindowedDataset val;
	WindowedDataset test;
	std::size_t dims = 0;
};

PreparedData prepareData(const CommonTrainFlags& f) {
	RawSeries series;
	try {
		series = loadCsv(f.data, f.timestampCol);
	} catch (const std::exception& e) {
		throw DataError(e.what());
	}
	SplitResult split = splitChronological(series, parseSplit(f.split));
	Scaler scaler = Scaler::fit(split.train.values);
	RealMatrix trainValues =
		f.noStandardize ? split.train.values : scaler.transform(split.train.values);
	RealMatrix valValues = f.noStandardize ? split.val.values : scaler.transform(split.val.values);
	RealMatrix testValues =
		f.noStandardize ? split.test.values : scaler.transform(split.test.values);

	if (f.trainFraction < 1.0) {
		// Learning-curve mode: the oldest rows are dropped.
		const std::size_t keep = static_cast<std::size_t>(
			std::ceil(f.trainFraction * static_cast<double>(trainValues.rows())));
		const std::size_t start = trainValues.rows() - keep;
		RealMatrix truncated(keep, trainValues.cols());
		for (std::size_t r = 0; r < keep; ++r) {
			for (std::size_t c = 0; c < trainValues.cols(); ++c) {
				truncated(r, c) = trainValues(start + r, c);
			}
		}
		trainValues = std::move(truncated);
	}

	try {
		PreparedData out{std::move(split), std::move(scaler),
		                 WindowedDataset(std::move(trainValues), f.h, f.t),
		                 WindowedDataset(std::move(valValues), f.h, f.t),
		                 WindowedDataset(std::move(testValues), f.h, f.t), series.dims()};
		return out;
	} catch (const std::exception& e) {
		throw DataError(e.what());
	}
}

std::unique_ptr<ForecastModel> makeModel(const CommonTrainFlags& f, std::size_t dims) {
	if (f.model == "linear") return std::make_unique<LinearDF>(f.h, f.t, dims, f.seed);
	if (f.model == "linear-pc") return std::make_unique<LinearDF>(f.h, f.t, dims, f.seed, true);
	if (f.model == "mlp") return std::make_unique<MlpDF>(f.h, f.t, dims, f.hidden, f.seed);
	throw ConfigError("unknown model kind: " + f.model);
}

LossConfig makeLossConfig(const CommonTrainFlags& f) {
	LossConfig cfg;
	cfg.alpha = f.alpha;
	cfg.axis = parseAxis(f.axis);
	cfg.basis = parseBasis(f.basis);
	cfg.variant = parseVariant(f.variant);
	cfg.splitComplexL1 = f.splitL1;
	return cfg;
}

json reportToJson(const TrainReport& report) {
	return json{{"train_loss", report.trainLoss},
	            {"val_mse", report.valMse},
	            {"best_epoch", report.bestEpoch},
	            {"stopped_early", report.stoppedEarly},
	            {"epochs_run", report.trainLoss.size()}};
}

void validateModelKind(const std::string& kind) {
	if (kind != "linear" && kind != "linear-pc" && kind != "mlp") {
		throw ConfigError("unknown model kind: " + kind);
	}
}

int runTrain(const CommonTrainFlags& f, const std::vector<std::string>& rawArgs) {
	validateModelKind(f.model);
	TrainConfig tcfg;
	tcfg.lr = f.lr;
	tcfg.batchSize = f.batch;
	tcfg.seed = f.seed;
	tcfg.loss = makeLossConfig(f);

	const PreparedData data = prepareData(f);
	auto model = makeModel(f, data.dims);

	const TrainReport report = fit(*model, data.train, data.val, tcfg);

	fs::create_directories(f.out);
	saveCheckpoint(*model, (fs::path(f.out) / "checkpoint.bin").string());
	writeJson(reportToJson(report), fs::path(f.out) / "train_report.json");
	writeJson(makeManifest("train", rawArgs, f.seed, datasetFingerprint(f.data)),
	          fs::path(f.out) / "manifest.json");
	std::cout << reportToJson(report).dump(2) << "\n";
	return 0;
}

json evalOnDataset(const ForecastModel& model, const WindowedDataset& test,
                   std::size_t seasonality) {
	double sumSq = 0.0, sumAbs = 0.0;
	std::size_t elems = 0;
	double sSmape = 0.0, sMase = 0.0, sRefSmape = 0.0, sRefMase = 0.0;
	std::size_t shortCount = 0;

	for (std::size_t w = 0; w < test.count(); ++w) {
		const SeriesMatrix input = test.input(w);
		const SeriesMatrix label = test.label(w);
		const SeriesMatrix yhat = model.forward(input);
		for (std::size_t i = 0; i < label.size(); ++i) {
			const double r = yhat.data()[i] - label.data()[i];
			sumSq += r * r;
			sumAbs += std::abs(r);
		}
		elems += label.size();
		if (seasonality > 0) {
			for (std::size_t d = 0; d < label.cols(); ++d) {
				const std::vector<double> yh = yhat.column(d);
				const std::vector<double> yc = label.column(d);
				const std::vector<double> insample = input.column(d);
				try {
					const std::vector<double> ref =
						seasonalNaiveForecast(insample, seasonality, yc.size());
					sSmape += smape(yh, yc);
					sMase += mase(yh, yc, insample, seasonality);
					sRefSmape += smape(ref, yc);
					sRefMase += mase(ref, yc, insample, seasonality);
					++shortCount;
				} catch (const std::invalid_argument&) {
					// Degenerate window (zero naive denominator); skipped.
				}
			}
		}
	}

	json out{{"mse", sumSq / static_cast<double>(elems)},
	         {"mae", sumAbs / static_cast<double>(elems)},
	         {"n_windows", test.count()}};
	if (seasonality > 0 && shortCount > 0) {
		const double n = static_cast<double>(shortCount);
		out["smape"] = sSmape / n;
		out["mase"] = sMase / n;
		out["owa"] = owa(sSmape / n, sMase / n, sRefSmape / n, sRefMase / n);
	}
	return out;
}

int runEval(const CommonTrainFlags& f, const std::string& checkpoint,
            std::size_t seasonality, const std::string& segment,
            const std::vector<std::string>& rawArgs) {
	std::unique_ptr<ForecastModel> model;
	try {
		model = loadCheckpoint(checkpoint);
	} catch (const std::exception& e) {
		throw DataError(e.what());
	}
	CommonTrainFlags flags = f;
	flags.h = model->inputLength();
	flags.t = model->labelLength();
	const PreparedData data = prepareData(flags);
	if (model->dims() != data.dims) {
		throw DataError("checkpoint/dataset dimension mismatch");
	}
	const WindowedDataset& target = segment == "train"  ? data.train
	                                : segment == "val" ? data.val
	                                                   : data.test;
	json report = evalOnDataset(*model, target, seasonality);
	report["segment"] = segment;
	std::cout << report.dump(2) << "\n";
	if (!f.out.empty() && f.out != "-") {
		fs::create_directories(f.out);
		writeJson(report, fs::path(f.out) / "eval_report.json");
		writeJson(makeManifest("eval", rawArgs, f.seed, datasetFingerprint(f.data)),
		          fs::path(f.out) / "manifest.json");
	}
	return 0;
}

int runSweep(const CommonTrainFlags& f, const std::string& alphaList,
             const std::vector<std::string>& rawArgs) {
	std::vector<double> alphas;
	{
		std::stringstream ss(alphaList);
		std::string cell;
		while (std::getline(ss, cell, ',')) alphas.push_back(std::stod(cell));
	}
	if (alphas.empty()) throw ConfigError("--alphas: empty grid");
	for (double a : alphas) {
		if (a < 0.0 || a > 1.0) throw ConfigError("--alphas: values must lie in [0,1]");
	}
	std::sort(alphas.begin(), alphas.end());
	validateModelKind(f.model);
	makeLossConfig(f); // surface axis/basis/variant config errors before I/O

	const PreparedData data = prepareData(f);
	json table = json::array();
	double bestVal = std::numeric_limits<double>::infinity();
	double bestAlpha = alphas.front();
	for (double alpha : alphas) {
		CommonTrainFlags flags = f;
		flags.alpha = alpha;
		auto model = makeModel(flags, data.dims);
		TrainConfig tcfg;
		tcfg.lr = f.lr;
		tcfg.batchSize = f.batch;
		tcfg.seed = f.seed;
		tcfg.loss = makeLossConfig(flags);
		const TrainReport report = fit(*model, data.train, data.val, tcfg);
		const double valMse = report.valMse[report.bestEpoch];
		const json evalReport = evalOnDataset(*model, data.test, 0);
		table.push_back(json{{"alpha", alpha},
		                     {"val_mse", valMse},
		                     {"test_mse", evalReport["mse"]},
		                     {"test_mae", evalReport["mae"]}});
		// Ascending grid plus strict comparison breaks ties toward smaller alpha.
		if (valMse < bestVal) {
			bestVal = valMse;
			bestAlpha = alpha;
		}
	}
	json out{{"grid", table}, {"best_alpha", bestAlpha}, {"best_val_mse", bestVal}};
	std::cout << out.dump(2) << "\n";
	fs::create_directories(f.out);
	writeJson(out, fs::path(f.out) / "alpha_sweep.json");
	writeJson(makeManifest("sweep-alpha", rawArgs, f.seed, datasetFingerprint(f.data)),
	          fs::path(f.out) / "manifest.json");
	return 0;
}

int runAnalyzeCorr(const std::string& dataPath, bool timestampCol, std::size_t h,
                   std::size_t t, std::size_t variable, bool fullControls,
                   const std::string& out, const std::vector<std::string>& rawArgs) {
	RawSeries series;
	try {
		series = loadCsv(dataPath, timestampCol);
	} catch (const std::exception& e) {
		throw DataError(e.what());
	}
	CorrOptions options;
	options.fullInputControls = fullControls;
	try {
		WindowedDataset windows(series.values, h, t);
		const CorrMatrix timeMat = timeCorrMatrix(windows, variable, options);
		const auto [freqReal, freqImag] = freqCorrMatrix(windows, variable, options);

		fs::create_directories(out);
		const fs::path dir(out);
		writeCorrCsv(timeMat, (dir / "corr_time.csv").string());
		writeCorrJson(timeMat, t, (dir / "corr_time.json").string());
		writeCorrCsv(freqReal, (dir / "corr_freq_real.csv").string());
		writeCorrJson(freqReal, t, (dir / "corr_freq_real.json").string());
		writeCorrCsv(freqImag, (dir / "corr_freq_imag.csv").string());
		writeCorrJson(freqImag, t, (dir / "corr_freq_imag.json").string());

		const json summary{
			{"time_offdiag_frac_above_0.3", offDiagonalExceedance(timeMat, 0.3)},
			{"freq_real_offdiag_frac_above_0.1", offDiagonalExceedance(freqReal, 0.1)},
			{"freq_imag_offdiag_frac_above_0.1", offDiagonalExceedance(freqImag, 0.1)},
			{"time_size", timeMat.size},
			{"freq_size", freqReal.size}};
		writeJson(summary, dir / "corr_summary.json");
		writeJson(makeManifest("analyze-corr", rawArgs, 0, datasetFingerprint(dataPath)),
		          dir / "manifest.json");
		std::cout << summary.dump(2) << "\n";
	} catch (const std::invalid_argument& e) {
		throw DataError(e.what());
	}
	return 0;
}

int runSynth(const std::string& kind, double phi, double noiseSd, double arSd,
             const std::vector<double>& freqs, const std::vector<double>& amps,
             std::size_t n, std::size_t d, std::uint64_t seed, const std::string& out,
             const std::vector<std::string>& rawArgs) {
	RawSeries series;
	try {
		if (kind == "ar") {
			series = synthAr(phi, n, d, seed, noiseSd);
		} else if (kind == "sines") {
			series = synthSines(freqs, amps, noiseSd, n, d, seed);
		} else if (kind == "sines-ar") {
			series = synthSinesAr(freqs, amps, phi, arSd, n, d, seed);
		} else {
			throw ConfigError("unknown generator kind: " + kind);
		}
	} catch (const std::invalid_argument& e) {
		throw ConfigError(e.what());
	}
	writeCsv(series, out);
	writeJson(makeManifest("synth", rawArgs, seed, datasetFingerprint(out)),
	          fs::path(out + ".manifest.json"));
	return 0;
}

int dispatch(const std::vector<std::string>& args);

int runRerun(const std::string& manifestPath) {
	const json manifest = loadJson(manifestPath);
	if (!manifest.contains("args")) throw DataError("manifest has no args field");
	std::vector<std::string> args = manifest["args"].get<std::vector<std::string>>();
	return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
	CLI::App app{"Frequency-domain direct forecasting toolkit"};
	app.require_subcommand(1);

	CommonTrainFlags trainFlags;
	auto* train = app.add_subcommand("train", "train a direct forecast model");
	addTrainFlags(train, trainFlags, true);

	CommonTrainFlags evalFlags;
	std::string checkpoint;
	std::size_t seasonality = 0;
	std::string segment = "test";
	auto* evalCmd = app.add_subcommand("eval", "evaluate a checkpoint");
	evalCmd->add_option("--checkpoint", checkpoint, "checkpoint path")->required();
	evalCmd->add_option("--data", evalFlags.data, "input CSV path")->required();
	evalCmd->add_flag("--timestamp-col", evalFlags.timestampCol, "first column is a timestamp");
	evalCmd->add_option("--split", evalFlags.split, "train,val,test fractions or counts");
	evalCmd->add_option("--segment", segment, "train | val | test");
	evalCmd->add_option("--seasonality", seasonality, "enable SMAPE/MASE/OWA at this period");
	evalCmd->add_flag("--no-standardize", evalFlags.noStandardize, "skip z-scoring");
	evalCmd->add_option("--out", evalFlags.out, "output directory (empty: stdout only)")
		->default_val("");

	CommonTrainFlags sweepFlags;
	std::string alphaList = "0,0.2,0.5,0.8,1.0";
	auto* sweep = app.add_subcommand("sweep-alpha", "train across an alpha grid");
	addTrainFlags(sweep, sweepFlags, false);
	sweep->add_option("--alphas", alphaList, "comma-separated alpha grid");

	std::string corrData, corrOut = "corr";
	bool corrTimestamp = false, corrFullControls = false;
	std::size_t corrH = 96, corrT = 96, corrVariable = 0;
	auto* corr = app.add_subcommand("analyze-corr", "partial-correlation matrices");
	corr->add_option("--data", corrData, "input CSV path")->required();
	corr->add_flag("--timestamp-col", corrTimestamp, "first column is a timestamp");
	corr->add_option("--input-len", corrH, "input window length");
	corr->add_option("--horizon", corrT, "label length");
	corr->add_option("--variable", corrVariable, "variable index");
	corr->add_flag("--full-controls", corrFullControls, "condition on the whole input window");
	corr->add_option("--out", corrOut, "output directory");

	std::string synthKind = "ar", synthOut = "synth.csv";
	double synthPhi = 0.8, synthNoiseSd = 1.0, synthArSd = 0.3;
	std::vector<double> synthFreqs{1.0 / 24.0};
	std::vector<double> synthAmps{1.0};
	std::size_t synthN = 2000, synthD = 1;
	std::uint64_t synthSeed = 0;
	auto* synth = app.add_subcommand("synth", "generate a synthetic CSV dataset");
	synth->add_option("--kind", synthKind, "ar | sines | sines-ar");
	synth->add_option("--phi", synthPhi, "AR(1) coefficient");
	synth->add_option("--noise-sd", synthNoiseSd, "white noise level");
	synth->add_option("--ar-sd", synthArSd, "AR noise innovation level (sines-ar)");
	synth->add_option("--freqs", synthFreqs, "sine frequencies (cycles/step)");
	synth->add_option("--amps", synthAmps, "sine amplitudes");
	synth->add_option("--n", synthN, "series length");
	synth->add_option("--d", synthD, "variable count");
	synth->add_option("--seed", synthSeed, "RNG seed");
	synth->add_option("--out", synthOut, "output CSV path");

	std::string manifestPath;
	auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
	rerun->add_option("manifest", manifestPath, "manifest.json path")->required();

	std::vector<const char*> argv;
	argv.push_back("freqcast");
	for (const auto& a : args) argv.push_back(a.c_str());
	try {
		app.parse(static_cast<int>(argv.size()), argv.data());
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	if (train->parsed()) return runTrain(trainFlags, args);
	if (evalCmd->parsed()) {
		return runEval(evalFlags, checkpoint, seasonality, segment, args);
	}
	if (sweep->parsed()) return runSweep(sweepFlags, alphaList, args);
	if (corr->parsed()) {
		return runAnalyzeCorr(corrData, corrTimestamp, corrH, corrT, corrVariable,
		                      corrFullControls, corrOut, args);
	}
	if (synth->parsed()) {
		return runSynth(synthKind, synthPhi, synthNoiseSd, synthArSd, synthFreqs, synthAmps,
		                synthN, synthD, synthSeed, synthOut, args);
	}
	if (rerun->parsed()) return runRerun(manifestPath);
	return 2;
}

} // namespace

int main(int argc, char** argv) {
	std::vector<std::string> args(argv + 1, argv + argc);
	try {
		return dispatch(args);
	} catch (const ConfigError& e) {
		std::cerr << "config error: " << e.what() << "\n";
		return 2;
	} catch (const DataError& e) {
		std::cerr << "data error: " << e.what() << "\n";
		return 3;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 3;
	}
}
