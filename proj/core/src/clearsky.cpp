#include "solarcast/clearsky.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace solarcast {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kInvPhi = 0.6180339887498949;

bool params_in_range(const SolisParams &p) {
	return std::isfinite(p.tau) && std::isfinite(p.g) && std::isfinite(p.i0_adj) && p.tau > 0.0 && p.g > 0.0 &&
	       p.g <= 1.5 && p.i0_adj > 0.0;
}

template <typename F>
double golden_minimize(F &&f, double lo, double hi, double tol) {
	double a = lo;
	double b = hi;
	double c = b - kInvPhi * (b - a);
	double d = a + kInvPhi * (b - a);
	double fc = f(c);
	double fd = f(d);
	while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
		if (fc < fd) {
			b = d;
			d = c;
			fd = fc;
			c = b - kInvPhi * (b - a);
			fc = f(c);
		} else {
			a = c;
			c = d;
			fc = fd;
			d = a + kInvPhi * (b - a);
			fd = f(d);
		}
	}
	return fc < fd ? c : d;
}

struct EnvelopePoint {
	double sin_h;
	double value;
};

double sse(const std::vector<EnvelopePoint> &pts, const SolisParams &p) {
	double s = 0.0;
	for (const auto &pt : pts) {
		const double model = p.i0_adj * std::exp(-p.tau / std::pow(pt.sin_h, p.g)) * pt.sin_h;
		s += (model - pt.value) * (model - pt.value);
	}
	return s;
}

// For fixed g, ln(G / sin h) = ln(i0) - tau * sin(h)^-g is linear in
// (ln i0, tau). Weights G^2 make the log residual approximate the linear one.
SolisParams log_linear_fit(const std::vector<EnvelopePoint> &pts, double g) {
	double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
	for (const auto &pt : pts) {
		if (pt.value <= 0.0) {
			continue;
		}
		const double w = pt.value * pt.value;
		const double x = std::pow(pt.sin_h, -g);
		const double y = std::log(pt.value / pt.sin_h);
		sw += w;
		sx += w * x;
		sy += w * y;
		sxx += w * x * x;
		sxy += w * x * y;
	}
	const double det = sw * sxx - sx * sx;
	SolisParams p;
	p.g = g;
	if (det <= 0.0) {
		p.tau = std::numeric_limits<double>::quiet_NaN();
		return p;
	}
	const double slope = (sw * sxy - sx * sy) / det;
	const double intercept = (sy - slope * sx) / sw;
	p.tau = -slope;
	p.i0_adj = std::exp(intercept);
	return p;
}

} // namespace

void SolisParams::validate() const {
	if (!(tau > 0.0) || !std::isfinite(tau)) {
		throw std::invalid_argument("solis.tau must be positive");
	}
	if (!(g > 0.0 && g <= 1.5)) {
		throw std::invalid_argument("solis.g must lie in (0, 1.5]");
	}
	if (!(i0_adj > 0.0) || !std::isfinite(i0_adj)) {
		throw std::invalid_argument("solis.i0_adj must be positive");
	}
}

double solis_from_elevation(const SolisParams &params, double elevation_deg) {
	if (elevation_deg <= 0.0) {
		return 0.0;
	}
	const double sin_h = std::sin(std::min(elevation_deg, 90.0) * kDeg);
	return params.i0_adj * std::exp(-params.tau / std::pow(sin_h, params.g)) * sin_h;
}

double solis_irradiance(const SiteConfig &site, const SolisParams &params, Epoch t) {
	return solis_from_elevation(params, solar_elevation_deg(site, t));
}

double max_clear_sky(const SiteConfig &site, const SolisParams &params) {
	constexpr double kMaxDeclination = 23.45;
	const double zenith_at_noon = std::max(0.0, std::abs(site.latitude_deg) - kMaxDeclination);
	return solis_from_elevation(params, 90.0 - zenith_at_noon);
}

double clear_sky_reference(const SiteConfig &site, const SolisParams &params, Epoch t, SeriesKind kind,
                           std::int64_t window_s) {
	if (kind == SeriesKind::Irradiance || window_s <= 60) {
		return solis_irradiance(site, params, t);
	}
	double sum = 0.0;
	int n = 0;
	for (Epoch m = t - window_s + 60; m <= t; m += 60) {
		sum += solis_irradiance(site, params, m);
		++n;
	}
	return sum / n;
}

MinuteSeries solis_curve(const SiteConfig &site, const SolisParams &params, Epoch start, std::size_t n) {
	std::vector<double> values(n);
	for (std::size_t i = 0; i < n; ++i) {
		values[i] = solis_irradiance(site, params, start + static_cast<Epoch>(i) * 60);
	}
	return MinuteSeries(start, 60, std::move(values), std::vector<bool>(n, true),
	                    std::max(kDefaultCeilingWm2, params.i0_adj));
}

ClearSkyIndexSeries clear_sky_index(const HourlySeries &measured, const SiteConfig &site, const SolisParams &params,
                                    double floor_wm2) {
	return clear_sky_index(measured, measured.kind(), measured.window_s(), site, params, floor_wm2);
}

ClearSkyIndexSeries clear_sky_index(const RegularSeries &measured, SeriesKind kind, std::int64_t window_s,
                                    const SiteConfig &site, const SolisParams &params, double floor_wm2) {
	if (!(floor_wm2 > 0.0)) {
		throw std::invalid_argument("clear-sky floor must be positive");
	}
	const std::size_t n = measured.size();
	std::vector<double> values(n, 0.0);
	std::vector<bool> valid(n, false);
	std::vector<bool> below(n, false);
	for (std::size_t i = 0; i < n; ++i) {
		const double cs = clear_sky_reference(site, params, measured.epoch_at(i), kind, window_s);
		if (cs < floor_wm2) {
			below[i] = measured.is_valid(i);
			continue;
		}
		if (!measured.is_valid(i)) {
			continue;
		}
		values[i] = std::min(measured.value(i) / cs, kClearSkyIndexCap);
		valid[i] = true;
	}
	return ClearSkyIndexSeries(measured.start_epoch(), measured.step(), std::move(values), std::move(valid),
	                           std::move(below), kind, window_s);
}

std::vector<std::optional<double>> clear_sky_index_at(const HourlySeries &measured, std::span<const Epoch> timestamps,
                                                      const SiteConfig &site, const SolisParams &params,
                                                      double floor_wm2) {
	if (!(floor_wm2 > 0.0)) {
		throw std::invalid_argument("clear-sky floor must be positive");
	}
	std::vector<std::optional<double>> out;
	out.reserve(timestamps.size());
	for (const Epoch t : timestamps) {
		const auto idx = measured.index_of(t);
		if (!idx) {
			throw std::invalid_argument(format_iso8601(t) + " is not on the measurement grid");
		}
		const double cs = clear_sky_reference(site, params, t, measured.kind(), measured.window_s());
		if (cs < floor_wm2 || !measured.is_valid(*idx)) {
			out.emplace_back();
		} else {
			out.emplace_back(std::min(measured.value(*idx) / cs, kClearSkyIndexCap));
		}
	}
	return out;
}

CalibrationResult calibrate_solis(const MinuteSeries &clear_days, const SiteConfig &site) {
	constexpr double kMinElevation = 1.0;
	constexpr double kBinDeg = 0.5;

	std::map<int, EnvelopePoint> bins;
	std::size_t daylight = 0;
	for (std::size_t i = 0; i < clear_days.size(); ++i) {
		if (!clear_days.is_valid(i)) {
			continue;
		}
		const double h = solar_elevation_deg(site, clear_days.epoch_at(i));
		if (h <= kMinElevation) {
			continue;
		}
		++daylight;
		const int bin = static_cast<int>(h / kBinDeg);
		const EnvelopePoint pt{std::sin(h * kDeg), clear_days.value(i)};
		auto [it, inserted] = bins.try_emplace(bin, pt);
		if (!inserted && pt.value > it->second.value) {
			it->second = pt;
		}
	}
	if (daylight < 100) {
		throw DataError("calibration needs at least 100 daylight samples, got " + std::to_string(daylight));
	}

	std::vector<EnvelopePoint> pts;
	pts.reserve(bins.size());
	for (const auto &[bin, pt] : bins) {
		pts.push_back(pt);
	}

	CalibrationResult result;
	result.envelope_points = pts.size();
	const SolisParams defaults;

	auto profile = [&](double g) {
		const SolisParams p = log_linear_fit(pts, g);
		return params_in_range(p) ? sse(pts, p) : std::numeric_limits<double>::infinity();
	};
	const double g0 = golden_minimize(profile, 0.01, 1.5, 1e-10);
	SolisParams p = log_linear_fit(pts, g0);

	if (params_in_range(p)) {
		double current = sse(pts, p);
		for (int sweep = 0; sweep < 100; ++sweep) {
			const double before = current;
			for (double SolisParams::*field : {&SolisParams::tau, &SolisParams::g, &SolisParams::i0_adj}) {
				const double x0 = p.*field;
				double lo = 0.8 * x0;
				double hi = 1.2 * x0;
				if (field == &SolisParams::g) {
					hi = std::min(hi, 1.5);
				}
				SolisParams trial = p;
				const double best = golden_minimize(
				    [&](double x) {
					    trial.*field = x;
					    return sse(pts, trial);
				    },
				    lo, hi, 1e-12);
				trial.*field = best;
				const double s = sse(pts, trial);
				if (s < current) {
					p = trial;
					current = s;
				}
			}
			if (before - current <= 1e-14 * std::max(1.0, before)) {
				break;
			}
		}
	}

	if (!params_in_range(p)) {
		result.params = defaults;
		result.converged = false;
	} else {
		result.params = p;
		result.converged = true;
	}
	result.rmse_wm2 = std::sqrt(sse(pts, result.params) / static_cast<double>(pts.size()));
	return result;
}

} // namespace solarcast
