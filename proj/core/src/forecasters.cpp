#include "solarcast/forecasters.hpp"

#include "solarcast/algebraic_trend.hpp"
#include "solarcast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace solarcast {

std::string_view to_string(Method m) {
	switch (m) {
	case Method::P:
		return "P";
	case Method::SP:
		return "SP";
	case Method::WM:
		return "WM";
	case Method::MLP:
		return "MLP";
	case Method::CSI_MLP:
		return "CSI_MLP";
	}
	return "?";
}

Method parse_method(std::string_view text) {
	for (const Method m : kAllMethods) {
		if (text == to_string(m)) {
			return m;
		}
	}
	throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

std::string ForecastRecord::label() const {
	std::string s(to_string(method));
	if (learning_years > 0) {
		s += '_' + std::to_string(learning_years) + 'y';
	}
	return s;
}

std::optional<double> persistence(const HourlySeries &series, Epoch t, std::int64_t horizon_s) {
	if (horizon_s <= 0) {
		throw std::invalid_argument("horizon must be positive");
	}
	return series.at(t);
}

ScaledForecast scaled_persistence(const HourlySeries &series, const SiteConfig &site, const SolisParams &solis,
                                  Epoch t, std::int64_t horizon_s, double floor_wm2) {
	ScaledForecast out;
	const auto now = persistence(series, t, horizon_s);
	if (!now) {
		return out;
	}
	const double cs_now = clear_sky_reference(site, solis, t, series.kind(), series.window_s());
	const double cs_then = clear_sky_reference(site, solis, t + horizon_s, series.kind(), series.window_s());
	if (cs_now < floor_wm2 || cs_then < floor_wm2) {
		out.value = now;
		out.fallback = true;
		return out;
	}
	out.value = *now * cs_then / cs_now;
	return out;
}

std::optional<double> wm_forecast(const MinuteSeries &minutes, Epoch t, std::int64_t horizon_s) {
	if (horizon_s <= 0) {
		throw std::invalid_argument("horizon must be positive");
	}
	const auto level = trend(minutes, t, kTrendWindowS);
	if (!level) {
		return std::nullopt;
	}
	const auto slope = trend_derivative(minutes, t, kDerivativeWindowS);
	if (!slope) {
		return std::nullopt;
	}
	return std::max(0.0, *level + *slope * static_cast<double>(horizon_s));
}

std::optional<std::vector<double>> lag_vector(const RegularSeries &series, Epoch t, std::size_t n_lags) {
	std::vector<double> lags(n_lags);
	for (std::size_t k = 0; k < n_lags; ++k) {
		const auto v = series.at(t - static_cast<Epoch>(k) * series.step());
		if (!v) {
			return std::nullopt;
		}
		lags[k] = *v;
	}
	return lags;
}

std::optional<std::vector<double>> csi_lag_vector(const ClearSkyIndexSeries &csi, Epoch t, std::size_t n_lags) {
	std::vector<double> lags(n_lags);
	for (std::size_t k = 0; k < n_lags; ++k) {
		const auto idx = csi.index_of(t - static_cast<Epoch>(k) * csi.step());
		if (!idx) {
			return std::nullopt;
		}
		if (csi.is_valid(*idx)) {
			lags[k] = csi.value(*idx);
		} else if (k > 0 && csi.below_floor(*idx)) {
			lags[k] = lags[k - 1];
		} else {
			return std::nullopt;
		}
	}
	return lags;
}

std::optional<double> mlp_forecast(const MlpModel &model, const HourlySeries &series, Epoch t) {
	const auto lags = lag_vector(series, t, model.input_count());
	if (!lags) {
		return std::nullopt;
	}
	return std::max(0.0, model.forward(*lags));
}

std::optional<double> csi_mlp_forecast(const MlpModel &model, const ClearSkyIndexSeries &csi, const SiteConfig &site,
                                       const SolisParams &solis, Epoch t, std::int64_t horizon_s, double floor_wm2) {
	if (horizon_s <= 0) {
		throw std::invalid_argument("horizon must be positive");
	}
	const double cs_then = clear_sky_reference(site, solis, t + horizon_s, csi.kind(), csi.window_s());
	if (cs_then < floor_wm2) {
		return std::nullopt;
	}
	const auto lags = csi_lag_vector(csi, t, model.input_count());
	if (!lags) {
		return std::nullopt;
	}
	return std::max(0.0, model.forward(*lags)) * cs_then;
}

// --- benchmark -----------------------------------------------------------

std::vector<Method> BenchmarkConfig::effective_methods() const {
	if (!methods.empty()) {
		return methods;
	}
	if (step_minutes == 60) {
		return {kAllMethods.begin(), kAllMethods.end()};
	}
	return {Method::SP, Method::WM};
}

std::vector<std::string> BenchmarkConfig::problems() const {
	std::vector<std::string> out;
	if (horizon_minutes <= 0) {
		out.emplace_back("bench.horizon_min must be positive");
	}
	if (step_minutes <= 0) {
		out.emplace_back("bench.step_min must be positive");
	}
	if (horizon_minutes > 0 && step_minutes > 0 && horizon_minutes % step_minutes != 0) {
		out.emplace_back("bench.horizon_min must be a multiple of bench.step_min");
	}
	if (step_minutes > 0 && 1440 % step_minutes != 0) {
		out.emplace_back("bench.step_min must divide a day");
	}
	if (test_year < 1950 || test_year > 2100) {
		out.emplace_back("bench.test_year must be set to a year in 1950-2100");
	}
	std::set<int> seen;
	for (const int y : train_years) {
		if (!seen.insert(y).second) {
			out.emplace_back("bench.train_years lists " + std::to_string(y) + " twice");
		}
		if (y == test_year) {
			out.emplace_back("bench.test_year " + std::to_string(y) + " overlaps bench.train_years");
		}
	}
	const auto ms = effective_methods();
	const bool needs_training =
	    std::find(ms.begin(), ms.end(), Method::MLP) != ms.end() ||
	    std::find(ms.begin(), ms.end(), Method::CSI_MLP) != ms.end();
	if (needs_training && train_years.empty()) {
		out.emplace_back("MLP methods need at least one bench.train_years entry");
	}
	if (needs_training && mlp_runs < 1) {
		out.emplace_back("mlp.runs must be at least 1");
	}
	auto capture = [&out](auto &&check) {
		try {
			check();
		} catch (const std::invalid_argument &e) {
			out.emplace_back(e.what());
		}
	};
	capture([&] { site.validate(); });
	capture([&] { solis.validate(); });
	if (needs_training) {
		TrainSpec probe = train;
		probe.input_scale = 1.0;
		probe.output_scale = 1.0;
		capture([&] { probe.validate(); });
	}
	if (!(clear_sky_floor_wm2 > 0.0)) {
		out.emplace_back("solis.floor must be positive");
	}
	if (!(daylight_min_elevation_deg >= -5.0 && daylight_min_elevation_deg <= 20.0)) {
		out.emplace_back("eval.daylight_min_elev must lie in [-5, 20]");
	}
	return out;
}

namespace {

struct Slot {
	Epoch issue;
	std::optional<double> observed;
};

bool is_daylight_pair(const BenchmarkConfig &cfg, Epoch t, std::int64_t horizon_s) {
	return solar_elevation_deg(cfg.site, t) > cfg.daylight_min_elevation_deg &&
	       solar_elevation_deg(cfg.site, t + horizon_s) > cfg.daylight_min_elevation_deg;
}

// Daylight issue times on the target grid inside [begin, end) whose target
// instant is still inside the data.
std::vector<Slot> daylight_slots(const BenchmarkConfig &cfg, const HourlySeries &target, Epoch begin, Epoch end,
                                 std::int64_t horizon_s) {
	std::vector<Slot> slots;
	for (std::size_t i = 0; i < target.size(); ++i) {
		const Epoch t = target.epoch_at(i);
		if (t < begin || t >= end || t + horizon_s > target.last_epoch()) {
			continue;
		}
		if (!is_daylight_pair(cfg, t, horizon_s)) {
			continue;
		}
		slots.push_back({t, target.at(t + horizon_s)});
	}
	return slots;
}

ForecastRecord make_record(Epoch t, std::int64_t horizon_s, Method m, int years, std::optional<double> predicted,
                           const std::optional<double> &observed, bool fallback = false) {
	ForecastRecord r;
	r.issue_epoch = t;
	r.horizon_s = horizon_s;
	r.method = m;
	r.learning_years = years;
	r.fallback = fallback;
	if (predicted && observed && std::isfinite(*predicted)) {
		r.predicted = *predicted;
		r.observed = *observed;
		r.valid = true;
	} else {
		r.predicted = predicted.value_or(std::nan(""));
		r.observed = observed.value_or(std::nan(""));
	}
	return r;
}

void require_coverage(const MinuteSeries &data, int year, const char *role) {
	const Epoch begin = year_start(year);
	const Epoch end = year_start(year + 1);
	if (data.empty() || data.last_epoch() < begin || data.start_epoch() >= end) {
		throw DataError(std::string(role) + " year " + std::to_string(year) + " is not covered by the data");
	}
}

} // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig &cfg, const MinuteSeries &data) {
	if (const auto issues = cfg.problems(); !issues.empty()) {
		std::string msg;
		for (const auto &p : issues) {
			msg += p + '\n';
		}
		msg.pop_back();
		throw std::invalid_argument(msg);
	}
	const std::vector<Method> methods = cfg.effective_methods();
	const bool wants_mlp = std::find(methods.begin(), methods.end(), Method::MLP) != methods.end();
	const bool wants_csi = std::find(methods.begin(), methods.end(), Method::CSI_MLP) != methods.end();

	require_coverage(data, cfg.test_year, "test");
	if (wants_mlp || wants_csi) {
		for (const int y : cfg.train_years) {
			require_coverage(data, y, "train");
		}
	}

	const std::int64_t horizon_s = std::int64_t{cfg.horizon_minutes} * 60;
	const HourlySeries target = cfg.target == SeriesKind::Irradiation
	                                ? trailing_mean_resample(data, cfg.step_minutes)
	                                : hourly_instantaneous(data, cfg.step_minutes);

	BenchmarkResult result;
	result.test_begin = year_start(cfg.test_year);
	result.test_end = year_start(cfg.test_year + 1);
	const std::vector<Slot> slots = daylight_slots(cfg, target, result.test_begin, result.test_end, horizon_s);
	if (slots.empty()) {
		throw DataError("no daylight test slots in " + std::to_string(cfg.test_year));
	}
	result.test_slots = slots.size();

	ClearSkyIndexSeries csi;
	if (wants_csi) {
		csi = clear_sky_index(target, cfg.site, cfg.solis, cfg.clear_sky_floor_wm2);
	}

	for (const Method m : methods) {
		switch (m) {
		case Method::P:
			for (const Slot &s : slots) {
				result.records.push_back(
				    make_record(s.issue, horizon_s, m, 0, persistence(target, s.issue, horizon_s), s.observed));
			}
			break;
		case Method::SP:
			for (const Slot &s : slots) {
				const auto f =
				    scaled_persistence(target, cfg.site, cfg.solis, s.issue, horizon_s, cfg.clear_sky_floor_wm2);
				result.records.push_back(make_record(s.issue, horizon_s, m, 0, f.value, s.observed, f.fallback));
			}
			break;
		case Method::WM: {
			// WM reads minute data; for irradiation it forecasts the minute
			// running mean, which equals the target at grid points.
			const MinuteSeries source =
			    cfg.target == SeriesKind::Irradiation
			        ? running_mean(data, cfg.step_minutes, (cfg.step_minutes * kDefaultMinValidPerHour + 59) / 60)
			        : data;
			for (const Slot &s : slots) {
				result.records.push_back(
				    make_record(s.issue, horizon_s, m, 0, wm_forecast(source, s.issue, horizon_s), s.observed));
			}
			break;
		}
		case Method::MLP:
		case Method::CSI_MLP: {
			std::vector<int> years = cfg.train_years;
			std::sort(years.rbegin(), years.rend());
			const double scale = max_clear_sky(cfg.site, cfg.solis);
			for (std::size_t k = 1; k <= years.size(); ++k) {
				Dataset ds;
				ds.n_lags = cfg.train.n_lags;
				std::vector<int> chosen(years.begin(), years.begin() + static_cast<std::ptrdiff_t>(k));
				std::sort(chosen.begin(), chosen.end());
				for (const int y : chosen) {
					for (const Slot &s : daylight_slots(cfg, target, year_start(y), year_start(y + 1), horizon_s)) {
						if (m == Method::MLP) {
							const auto lags = lag_vector(target, s.issue, cfg.train.n_lags);
							if (lags && s.observed) {
								ds.push(*lags, *s.observed);
							}
						} else {
							const auto lags = csi_lag_vector(csi, s.issue, cfg.train.n_lags);
							const auto kt = csi.at(s.issue + horizon_s);
							if (lags && kt) {
								ds.push(*lags, *kt);
							}
						}
					}
				}
				TrainSpec spec = cfg.train;
				spec.input_scale = m == Method::MLP ? scale : 1.0;
				spec.output_scale = m == Method::MLP ? scale : 1.0;
				const BestOfRuns trained = best_of_runs(ds, spec, cfg.mlp_runs);

				MlpTrainingSummary summary;
				summary.method = m;
				summary.learning_years = static_cast<int>(k);
				summary.pairs = ds.size();
				summary.best_run = trained.best_run;
				summary.validation_nrmse = trained.best.validation_nrmse;
				summary.run_validation_mse = trained.run_validation_mse;
				result.training.push_back(std::move(summary));

				for (const Slot &s : slots) {
					const auto f = m == Method::MLP
					                   ? mlp_forecast(trained.best.model, target, s.issue)
					                   : csi_mlp_forecast(trained.best.model, csi, cfg.site, cfg.solis, s.issue,
					                                      horizon_s, cfg.clear_sky_floor_wm2);
					result.records.push_back(make_record(s.issue, horizon_s, m, static_cast<int>(k), f, s.observed));
				}
			}
			break;
		}
		}
	}

	std::stable_sort(result.records.begin(), result.records.end(), [](const auto &a, const auto &b) {
		if (a.method != b.method) {
			return a.method < b.method;
		}
		if (a.learning_years != b.learning_years) {
			return a.learning_years < b.learning_years;
		}
		return a.issue_epoch < b.issue_epoch;
	});
	return result;
}

namespace {

void append_double(std::string &out, double v) {
	if (!std::isfinite(v)) {
		return;
	}
	char buf[64];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
	out.append(buf, ptr);
}

} // namespace

std::string records_to_csv(const std::vector<ForecastRecord> &records) {
	std::string out = "issue_iso8601,horizon_s,method,predicted,observed,valid,fallback_flag\n";
	for (const auto &r : records) {
		out += format_iso8601(r.issue_epoch);
		out += ',' + std::to_string(r.horizon_s) + ',' + r.label() + ',';
		append_double(out, r.predicted);
		out += ',';
		append_double(out, r.observed);
		out += r.valid ? ",1," : ",0,";
		out += r.fallback ? "1\n" : "0\n";
	}
	return out;
}

std::string plot_data_csv(const std::vector<ForecastRecord> &records) {
	std::map<Method, int> largest;
	for (const auto &r : records) {
		largest[r.method] = std::max(largest[r.method], r.learning_years);
	}
	struct Row {
		std::optional<double> observed;
		std::array<std::optional<double>, kAllMethods.size()> predicted;
	};
	std::map<Epoch, Row> rows;
	for (const auto &r : records) {
		if (r.learning_years != largest[r.method]) {
			continue;
		}
		Row &row = rows[r.issue_epoch + r.horizon_s];
		if (std::isfinite(r.observed)) {
			row.observed = r.observed;
		}
		if (r.valid) {
			row.predicted[static_cast<std::size_t>(r.method)] = r.predicted;
		}
	}
	std::string out = "epoch,observed,P,SP,WM,MLP,CSI_MLP\n";
	for (const auto &[epoch, row] : rows) {
		out += std::to_string(epoch);
		out += ',';
		if (row.observed) {
			append_double(out, *row.observed);
		}
		for (const auto &p : row.predicted) {
			out += ',';
			if (p) {
				append_double(out, *p);
			}
		}
		out += '\n';
	}
	return out;
}

} // namespace solarcast
