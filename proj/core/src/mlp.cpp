#include "solarcast/mlp.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace solarcast {

MlpModel::MlpModel(std::vector<std::size_t> layer_sizes, double input_scale, double output_scale)
    : sizes_(std::move(layer_sizes)), input_scale_(input_scale), output_scale_(output_scale) {
	if (sizes_.size() < 2 || sizes_.back() != 1) {
		throw std::invalid_argument("layer sizes must be {inputs, hidden..., 1}");
	}
	if (std::find(sizes_.begin(), sizes_.end(), std::size_t{0}) != sizes_.end()) {
		throw std::invalid_argument("layer sizes must be positive");
	}
	if (!(input_scale_ > 0.0) || !(output_scale_ > 0.0)) {
		throw std::invalid_argument("scales must be positive");
	}
	for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
		Layer layer;
		layer.inputs = sizes_[l];
		layer.outputs = sizes_[l + 1];
		layer.weights.assign(layer.inputs * layer.outputs, 0.0);
		layer.biases.assign(layer.outputs, 0.0);
		layers_.push_back(std::move(layer));
	}
}

MlpModel MlpModel::random(std::vector<std::size_t> layer_sizes, double input_scale, double output_scale, Rng &rng) {
	MlpModel m(std::move(layer_sizes), input_scale, output_scale);
	for (Layer &layer : m.layers_) {
		for (double &w : layer.weights) {
			w = rng.uniform(-0.5, 0.5);
		}
		for (double &b : layer.biases) {
			b = rng.uniform(-0.5, 0.5);
		}
	}
	return m;
}

void MlpModel::check_input(std::span<const double> input) const {
	if (input.size() != input_count()) {
		throw std::invalid_argument("expected " + std::to_string(input_count()) + " inputs, got " +
		                            std::to_string(input.size()));
	}
	for (const double v : input) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument("non-finite network input");
		}
	}
}

double MlpModel::forward(std::span<const double> input) const {
	check_input(input);
	std::vector<double> a(input.begin(), input.end());
	for (double &v : a) {
		v /= input_scale_;
	}
	std::vector<double> next;
	for (std::size_t l = 0; l < layers_.size(); ++l) {
		const Layer &layer = layers_[l];
		const bool hidden = l + 1 < layers_.size();
		next.assign(layer.outputs, 0.0);
		for (std::size_t o = 0; o < layer.outputs; ++o) {
			double z = layer.biases[o];
			const double *w = layer.weights.data() + o * layer.inputs;
			for (std::size_t i = 0; i < layer.inputs; ++i) {
				z += w[i] * a[i];
			}
			next[o] = hidden ? std::tanh(z) : z;
		}
		a.swap(next);
	}
	return a[0] * output_scale_;
}

std::size_t MlpModel::parameter_count() const {
	std::size_t n = 0;
	for (const Layer &layer : layers_) {
		n += layer.weights.size() + layer.biases.size();
	}
	return n;
}

std::vector<double> MlpModel::parameters() const {
	std::vector<double> p;
	p.reserve(parameter_count());
	for (const Layer &layer : layers_) {
		p.insert(p.end(), layer.weights.begin(), layer.weights.end());
		p.insert(p.end(), layer.biases.begin(), layer.biases.end());
	}
	return p;
}

void MlpModel::set_parameters(std::span<const double> params) {
	if (params.size() != parameter_count()) {
		throw std::invalid_argument("parameter vector has the wrong length");
	}
	std::size_t k = 0;
	for (Layer &layer : layers_) {
		for (double &w : layer.weights) {
			w = params[k++];
		}
		for (double &b : layer.biases) {
			b = params[k++];
		}
	}
}

bool MlpModel::all_finite() const {
	for (const Layer &layer : layers_) {
		for (const double w : layer.weights) {
			if (!std::isfinite(w)) {
				return false;
			}
		}
		for (const double b : layer.biases) {
			if (!std::isfinite(b)) {
				return false;
			}
		}
	}
	return true;
}

double MlpModel::accumulate_gradient(std::span<const double> input, double target, std::span<double> grad) const {
	check_input(input);
	if (grad.size() != parameter_count()) {
		throw std::invalid_argument("gradient buffer has the wrong length");
	}
	// activations[l] is the input to layer l; activations.back() the output.
	std::vector<std::vector<double>> activations(layers_.size() + 1);
	activations[0].assign(input.begin(), input.end());
	for (double &v : activations[0]) {
		v /= input_scale_;
	}
	for (std::size_t l = 0; l < layers_.size(); ++l) {
		const Layer &layer = layers_[l];
		const bool hidden = l + 1 < layers_.size();
		auto &out = activations[l + 1];
		out.assign(layer.outputs, 0.0);
		for (std::size_t o = 0; o < layer.outputs; ++o) {
			double z = layer.biases[o];
			const double *w = layer.weights.data() + o * layer.inputs;
			for (std::size_t i = 0; i < layer.inputs; ++i) {
				z += w[i] * activations[l][i];
			}
			out[o] = hidden ? std::tanh(z) : z;
		}
	}

	const double err = activations.back()[0] - target / output_scale_;

	// Offsets of each layer's block in the flattened parameter vector.
	std::vector<std::size_t> offset(layers_.size());
	std::size_t k = 0;
	for (std::size_t l = 0; l < layers_.size(); ++l) {
		offset[l] = k;
		k += layers_[l].weights.size() + layers_[l].biases.size();
	}

	std::vector<double> delta{err}; // dL/dz for the current layer
	std::vector<double> prev;
	for (std::size_t l = layers_.size(); l-- > 0;) {
		const Layer &layer = layers_[l];
		const auto &a_in = activations[l];
		double *gw = grad.data() + offset[l];
		double *gb = gw + layer.weights.size();
		for (std::size_t o = 0; o < layer.outputs; ++o) {
			for (std::size_t i = 0; i < layer.inputs; ++i) {
				gw[o * layer.inputs + i] += delta[o] * a_in[i];
			}
			gb[o] += delta[o];
		}
		if (l == 0) {
			break;
		}
		prev.assign(layer.inputs, 0.0);
		for (std::size_t o = 0; o < layer.outputs; ++o) {
			const double *w = layer.weights.data() + o * layer.inputs;
			for (std::size_t i = 0; i < layer.inputs; ++i) {
				prev[i] += w[i] * delta[o];
			}
		}
		// a_in came out of a tanh layer: tanh' = 1 - a^2
		for (std::size_t i = 0; i < layer.inputs; ++i) {
			prev[i] *= 1.0 - a_in[i] * a_in[i];
		}
		delta.swap(prev);
	}
	return 0.5 * err * err;
}

namespace {

void append_number(std::string &out, double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	out += buf;
}

} // namespace

std::string MlpModel::serialize() const {
	std::string out = "solarcast-mlp 1\nlayers";
	for (const std::size_t s : sizes_) {
		out += ' ' + std::to_string(s);
	}
	out += "\nscales ";
	append_number(out, input_scale_);
	out += ' ';
	append_number(out, output_scale_);
	out += '\n';
	for (const Layer &layer : layers_) {
		for (std::size_t i = 0; i < layer.weights.size(); ++i) {
			if (i) {
				out += ' ';
			}
			append_number(out, layer.weights[i]);
		}
		out += '\n';
		for (std::size_t i = 0; i < layer.biases.size(); ++i) {
			if (i) {
				out += ' ';
			}
			append_number(out, layer.biases[i]);
		}
		out += '\n';
	}
	return out;
}

MlpModel MlpModel::deserialize(std::string_view text) {
	std::istringstream in{std::string(text)};
	std::string line;
	if (!std::getline(in, line) || line != "solarcast-mlp 1") {
		throw std::invalid_argument("not a version-1 model file");
	}
	std::string word;
	if (!std::getline(in, line)) {
		throw std::invalid_argument("missing layers line");
	}
	std::istringstream layers_line(line);
	layers_line >> word;
	if (word != "layers") {
		throw std::invalid_argument("missing layers line");
	}
	std::vector<std::size_t> sizes;
	std::size_t s = 0;
	while (layers_line >> s) {
		sizes.push_back(s);
	}
	double in_scale = 0.0;
	double out_scale = 0.0;
	if (!std::getline(in, line)) {
		throw std::invalid_argument("missing scales line");
	}
	std::istringstream scales_line(line);
	if (!(scales_line >> word >> in_scale >> out_scale) || word != "scales") {
		throw std::invalid_argument("malformed scales line");
	}
	MlpModel m(sizes, in_scale, out_scale);
	std::vector<double> params;
	double v = 0.0;
	while (in >> v) {
		params.push_back(v);
	}
	if (!in.eof()) {
		throw std::invalid_argument("malformed parameter value");
	}
	m.set_parameters(params);
	return m;
}

bool operator==(const MlpModel &a, const MlpModel &b) {
	return a.sizes_ == b.sizes_ && a.input_scale_ == b.input_scale_ && a.output_scale_ == b.output_scale_ &&
	       a.parameters() == b.parameters();
}

void Dataset::push(std::span<const double> lags, double target) {
	if (n_lags == 0) {
		n_lags = lags.size();
	}
	if (lags.size() != n_lags) {
		throw std::invalid_argument("lag vector width changed");
	}
	inputs.insert(inputs.end(), lags.begin(), lags.end());
	targets.push_back(target);
}

void TrainSpec::validate() const {
	if (n_lags == 0 || n_hidden == 0) {
		throw std::invalid_argument("mlp.lags and mlp.hidden must be positive");
	}
	if (!(learning_rate > 0.0) || !(momentum > 0.0) || momentum >= 1.0) {
		throw std::invalid_argument("mlp.lr must be positive and mlp.momentum in (0, 1)");
	}
	if (max_epochs <= 0 || patience <= 0) {
		throw std::invalid_argument("mlp.epochs and mlp.patience must be positive");
	}
	if (!(validation_fraction > 0.0 && validation_fraction <= 0.5)) {
		throw std::invalid_argument("validation fraction must lie in (0, 0.5]");
	}
	if (!(input_scale > 0.0) || !(output_scale > 0.0)) {
		throw std::invalid_argument("scales must be positive");
	}
}

namespace {

double mse_over(const MlpModel &m, const Dataset &data, std::size_t begin, std::size_t end) {
	double s = 0.0;
	for (std::size_t i = begin; i < end; ++i) {
		const double e = m.forward(data.row(i)) - data.targets[i];
		s += e * e;
	}
	return s / static_cast<double>(end - begin);
}

} // namespace

TrainResult train(const Dataset &data, const TrainSpec &spec) {
	spec.validate();
	if (data.size() < kMinTrainingPairs) {
		throw DataError("training needs at least " + std::to_string(kMinTrainingPairs) + " pairs, got " +
		                std::to_string(data.size()));
	}
	if (data.n_lags != spec.n_lags) {
		throw std::invalid_argument("dataset width does not match mlp.lags");
	}
	const std::size_t n = data.size();
	const auto n_val = std::max<std::size_t>(
	    1, static_cast<std::size_t>(std::floor(spec.validation_fraction * static_cast<double>(n))));
	const std::size_t n_train = n - n_val;

	Rng rng(spec.seed);
	MlpModel model = MlpModel::random({spec.n_lags, spec.n_hidden, 1}, spec.input_scale, spec.output_scale, rng);

	TrainResult result;
	result.seed = spec.seed;
	result.model = model;
	result.validation_mse = mse_over(model, data, n_train, n);
	if (!std::isfinite(result.validation_mse)) {
		throw TrainingDiverged("non-finite validation loss at initialization");
	}

	std::vector<double> params = model.parameters();
	std::vector<double> velocity(params.size(), 0.0);
	std::vector<double> grad(params.size(), 0.0);
	const double grad_scale = 2.0 / static_cast<double>(n_train);

	int since_best = 0;
	int epoch = 0;
	for (epoch = 1; epoch <= spec.max_epochs; ++epoch) {
		std::fill(grad.begin(), grad.end(), 0.0);
		double loss = 0.0;
		for (std::size_t i = 0; i < n_train; ++i) {
			loss += model.accumulate_gradient(data.row(i), data.targets[i], grad);
		}
		if (!std::isfinite(loss)) {
			throw TrainingDiverged("non-finite training loss at epoch " + std::to_string(epoch));
		}
		for (std::size_t k = 0; k < params.size(); ++k) {
			velocity[k] = spec.momentum * velocity[k] - spec.learning_rate * grad_scale * grad[k];
			params[k] += velocity[k];
		}
		model.set_parameters(params);

		const double val = mse_over(model, data, n_train, n);
		if (!std::isfinite(val)) {
			throw TrainingDiverged("non-finite validation loss at epoch " + std::to_string(epoch));
		}
		if (val < result.validation_mse) {
			result.validation_mse = val;
			result.model = model;
			result.best_epoch = epoch;
			since_best = 0;
		} else if (++since_best >= spec.patience) {
			break;
		}
	}
	result.epochs_run = std::min(epoch, spec.max_epochs);

	double sum_e2 = 0.0;
	double sum_y2 = 0.0;
	for (std::size_t i = n_train; i < n; ++i) {
		const double e = result.model.forward(data.row(i)) - data.targets[i];
		sum_e2 += e * e;
		sum_y2 += data.targets[i] * data.targets[i];
	}
	if (sum_y2 > 0.0) {
		result.validation_nrmse = std::sqrt(sum_e2) / std::sqrt(sum_y2);
	}
	return result;
}

std::optional<std::size_t> argmin_run(std::span<const std::optional<double>> scores) {
	std::optional<std::size_t> best;
	for (std::size_t i = 0; i < scores.size(); ++i) {
		if (scores[i] && (!best || *scores[i] < *scores[*best])) {
			best = i;
		}
	}
	return best;
}

BestOfRuns best_of_runs(const Dataset &data, const TrainSpec &spec, int n_runs) {
	if (n_runs < 1) {
		throw std::invalid_argument("n_runs must be at least 1");
	}
	BestOfRuns out;
	std::vector<std::optional<TrainResult>> results;
	for (int r = 0; r < n_runs; ++r) {
		TrainSpec run_spec = spec;
		run_spec.seed = spec.seed + static_cast<std::uint64_t>(r);
		try {
			results.emplace_back(train(data, run_spec));
			out.run_validation_mse.emplace_back(results.back()->validation_mse);
		} catch (const TrainingDiverged &) {
			results.emplace_back();
			out.run_validation_mse.emplace_back();
		}
	}
	const auto best = argmin_run(out.run_validation_mse);
	if (!best) {
		throw TrainingDiverged("all " + std::to_string(n_runs) + " training runs diverged");
	}
	out.best_run = *best;
	out.best = std::move(*results[*best]);
	return out;
}

double gradient_check(const MlpModel &model, std::span<const double> input, double target, double h) {
	std::vector<double> analytic(model.parameter_count(), 0.0);
	model.accumulate_gradient(input, target, analytic);

	MlpModel probe = model;
	std::vector<double> params = model.parameters();
	std::vector<double> scratch(params.size(), 0.0);
	double worst = 0.0;
	for (std::size_t k = 0; k < params.size(); ++k) {
		const double saved = params[k];
		params[k] = saved + h;
		probe.set_parameters(params);
		const double up = probe.accumulate_gradient(input, target, scratch);
		params[k] = saved - h;
		probe.set_parameters(params);
		const double down = probe.accumulate_gradient(input, target, scratch);
		params[k] = saved;
		const double numeric = (up - down) / (2.0 * h);
		const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-6});
		worst = std::max(worst, std::abs(analytic[k] - numeric) / denom);
	}
	return worst;
}

} // namespace solarcast
