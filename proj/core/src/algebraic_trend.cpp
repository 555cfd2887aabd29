#include "solarcast/algebraic_trend.hpp"

#include <cmath>
#include <stdexcept>

namespace solarcast {

TrendEstimate fit_local_linear(std::span<const WindowSample> window, double window_s) {
	if (!(window_s > 0.0)) {
		throw std::invalid_argument("window length must be positive");
	}
	const std::size_t n = window.size();
	if (n < 5) {
		throw std::invalid_argument("local fit needs at least 5 samples, got " + std::to_string(n));
	}
	for (std::size_t i = 0; i < n; ++i) {
		const double tau = window[i].tau_s;
		if (!(tau >= 0.0 && tau <= window_s)) {
			throw std::invalid_argument("sample time outside [0, window]");
		}
		if (i > 0 && !(tau > window[i - 1].tau_s)) {
			throw std::invalid_argument("sample times must be strictly increasing");
		}
	}

	auto weight = [&](std::size_t i) {
		if (i == 0) {
			return window[1].tau_s - window[0].tau_s;
		}
		if (i == n - 1) {
			return window[n - 1].tau_s - window[n - 2].tau_s;
		}
		return 0.5 * (window[i + 1].tau_s - window[i - 1].tau_s);
	};

	// Zeroth and first moments of the weights, then the integrals I0, I1 and
	// the second moment taken about the weighted centre c; solving the 2x2
	// normal system in that frame keeps it well conditioned for long windows.
	double m0 = 0.0;
	double m1 = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		const double w = weight(i);
		m0 += w;
		m1 += w * window[i].tau_s;
	}
	const double c = m1 / m0;

	double i0 = 0.0;
	double i1c = 0.0;
	double m2c = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		const double w = weight(i);
		const double u = window[i].tau_s - c;
		i0 += w * window[i].x;
		i1c += w * u * window[i].x;
		m2c += w * u * u;
	}

	TrendEstimate est;
	est.a1 = i1c / m2c;
	est.a0 = i0 / m0 - est.a1 * c;
	est.window_s = window_s;
	est.samples = n;
	return est;
}

std::optional<TrendEstimate> fit_window(const RegularSeries &series, Epoch anchor, double window_s,
                                        double min_valid_fraction) {
	if (series.empty() || !(window_s > 0.0)) {
		return std::nullopt;
	}
	const auto window_len = static_cast<Epoch>(std::llround(window_s));
	const Epoch begin = anchor - window_len;
	if (begin < series.start_epoch() || anchor > series.last_epoch()) {
		return std::nullopt;
	}

	const Epoch step = series.step();
	// first grid index at or after `begin`
	const Epoch offset = begin - series.start_epoch();
	const auto first = static_cast<std::size_t>((offset + step - 1) / step);
	const auto last = static_cast<std::size_t>((anchor - series.start_epoch()) / step);

	std::vector<WindowSample> samples;
	samples.reserve(last - first + 1);
	for (std::size_t i = first; i <= last; ++i) {
		if (series.is_valid(i)) {
			samples.push_back({static_cast<double>(series.epoch_at(i) - begin), series.value(i)});
		}
	}
	const std::size_t expected = last - first + 1;
	if (samples.size() < 5 ||
	    static_cast<double>(samples.size()) < min_valid_fraction * static_cast<double>(expected)) {
		return std::nullopt;
	}
	TrendEstimate est = fit_local_linear(samples, window_s);
	est.anchor_epoch = anchor;
	return est;
}

std::optional<double> trend(const RegularSeries &series, Epoch anchor, double window_s) {
	const auto est = fit_window(series, anchor, window_s);
	if (!est) {
		return std::nullopt;
	}
	return est->trend_at_anchor();
}

std::optional<double> trend_derivative(const RegularSeries &series, Epoch anchor, double window_s) {
	const auto est = fit_window(series, anchor, window_s);
	if (!est) {
		return std::nullopt;
	}
	return est->a1;
}

Decomposition decompose(const RegularSeries &series, double window_s) {
	Decomposition d;
	d.start_epoch = series.start_epoch();
	d.step = series.step();
	d.trend.assign(series.size(), 0.0);
	d.fluctuation.assign(series.size(), 0.0);
	d.valid.assign(series.size(), false);
	for (std::size_t i = 0; i < series.size(); ++i) {
		if (!series.is_valid(i)) {
			continue;
		}
		const auto tr = trend(series, series.epoch_at(i), window_s);
		if (!tr) {
			continue;
		}
		d.trend[i] = *tr;
		d.fluctuation[i] = series.value(i) - *tr;
		d.valid[i] = true;
	}
	return d;
}

} // namespace solarcast
