#pragma once

#include "solarcast/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast {

/// Fully connected network: tanh hidden layers, identity output.
/// Inputs are divided by `input_scale` and the raw output multiplied by
/// `output_scale`, so weights live in unit-normalized space.
class MlpModel {
public:
	struct Layer {
		std::size_t inputs = 0;
		std::size_t outputs = 0;
		std::vector<double> weights; ///< row-major, outputs x inputs
		std::vector<double> biases;
	};

	MlpModel() = default;
	/// All parameters zero. `layer_sizes` = {inputs, hidden..., 1}.
	MlpModel(std::vector<std::size_t> layer_sizes, double input_scale, double output_scale);

	/// Parameters drawn uniform(-0.5, 0.5), layer by layer, weights before biases.
	static MlpModel random(std::vector<std::size_t> layer_sizes, double input_scale, double output_scale, Rng &rng);

	const std::vector<std::size_t> &layer_sizes() const { return sizes_; }
	std::size_t input_count() const { return sizes_.front(); }
	double input_scale() const { return input_scale_; }
	double output_scale() const { return output_scale_; }
	const std::vector<Layer> &layers() const { return layers_; }
	std::vector<Layer> &layers() { return layers_; }

	/// Throws std::invalid_argument on a length mismatch or non-finite input.
	double forward(std::span<const double> input) const;

	std::size_t parameter_count() const;
	std::vector<double> parameters() const;
	void set_parameters(std::span<const double> params);
	bool all_finite() const;

	/// Per-sample loss 0.5 * (y - target)^2 in scaled units; accumulates
	/// d loss / d parameters into `grad` (flattened in parameters() order).
	double accumulate_gradient(std::span<const double> input, double target, std::span<double> grad) const;

	/// Versioned plain-text format; weights as 17-significant-digit decimals.
	std::string serialize() const;
	static MlpModel deserialize(std::string_view text);

	friend bool operator==(const MlpModel &a, const MlpModel &b);

private:
	void check_input(std::span<const double> input) const;

	std::vector<std::size_t> sizes_;
	std::vector<Layer> layers_;
	double input_scale_ = 1.0;
	double output_scale_ = 1.0;
};

/// Lag vectors (row-major, `n_lags` wide) with one target each, in time order.
struct Dataset {
	std::size_t n_lags = 0;
	std::vector<double> inputs;
	std::vector<double> targets;

	std::size_t size() const { return targets.size(); }
	std::span<const double> row(std::size_t i) const { return {inputs.data() + i * n_lags, n_lags}; }
	void push(std::span<const double> lags, double target);
};

struct TrainSpec {
	std::size_t n_lags = 8;
	std::size_t n_hidden = 10;
	double learning_rate = 0.1;
	double momentum = 0.9;
	int max_epochs = 200;
	int patience = 20;
	std::uint64_t seed = 1;
	double validation_fraction = 0.2;
	double input_scale = 1.0;
	double output_scale = 1.0;

	void validate() const;
};

class TrainingDiverged : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct TrainResult {
	MlpModel model;
	/// sqrt(sum e^2) / sqrt(sum y^2) on the validation block; nullopt when
	/// every validation target is zero.
	std::optional<double> validation_nrmse;
	double validation_mse = 0.0; ///< selection criterion, original units
	int epochs_run = 0;
	int best_epoch = 0;
	std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinTrainingPairs = 100;

/// Full-batch gradient descent with momentum on the mean squared error.
/// The last `validation_fraction` of the pairs are held out; training stops
/// after `patience` epochs without validation improvement and the best
/// snapshot is returned. Deterministic for a given spec.
/// Throws DataError below 100 pairs and TrainingDiverged on a non-finite loss.
TrainResult train(const Dataset &data, const TrainSpec &spec);

/// Trains with seeds spec.seed, spec.seed + 1, ... and keeps the lowest
/// validation error (earliest seed on ties). Diverged runs are skipped;
/// throws TrainingDiverged if every run diverged.
struct BestOfRuns {
	TrainResult best;
	std::vector<std::optional<double>> run_validation_mse; ///< per seed, nullopt = diverged
	std::size_t best_run = 0;
};
BestOfRuns best_of_runs(const Dataset &data, const TrainSpec &spec, int n_runs = 7);

/// Index of the smallest value; earliest index wins ties, nullopt entries
/// are skipped.
std::optional<std::size_t> argmin_run(std::span<const std::optional<double>> scores);

/// Largest relative difference between back-propagated and central finite
/// difference gradients (step `h` on each parameter). The relative error is
/// |a - b| / max(|a|, |b|, 1e-6), the floor keeping exactly-zero gradients
/// from inflating the ratio.
double gradient_check(const MlpModel &model, std::span<const double> input, double target, double h = 1e-5);

} // namespace solarcast
