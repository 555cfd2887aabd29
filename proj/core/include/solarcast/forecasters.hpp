#pragma once

#include "solarcast/clearsky.hpp"
#include "solarcast/mlp.hpp"
#include "solarcast/series.hpp"
#include "solarcast/solar_geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast {

/// Declaration order is the reporting and tie-break order.
enum class Method { P, SP, WM, MLP, CSI_MLP };

inline constexpr std::array kAllMethods{Method::P, Method::SP, Method::WM, Method::MLP, Method::CSI_MLP};

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

struct ForecastRecord {
	Epoch issue_epoch = 0;
	std::int64_t horizon_s = 0;
	Method method = Method::P;
	int learning_years = 0; ///< MLP variants only; 0 otherwise
	double predicted = 0.0;
	double observed = 0.0;
	bool valid = false;
	bool fallback = false; ///< SP fell back to plain persistence

	/// `P`, `WM`, ... and `MLP_2y`, `CSI_MLP_1y` for the learning variants.
	std::string label() const;
};

// --- single forecasts ----------------------------------------------------

/// Last measure carried forward.
std::optional<double> persistence(const HourlySeries &series, Epoch t, std::int64_t horizon_s);

struct ScaledForecast {
	std::optional<double> value;
	bool fallback = false;
};

/// series(t) * CS(t + T) / CS(t), with CS the clear-sky reference matching the
/// series kind. Falls back to persistence (flagged) when either clear-sky
/// value is below `floor_wm2`.
ScaledForecast scaled_persistence(const HourlySeries &series, const SiteConfig &site, const SolisParams &solis,
                                  Epoch t, std::int64_t horizon_s, double floor_wm2 = kDefaultClearSkyFloorWm2);

/// trend(t, 10 min) + trend_derivative(t, 75 min) * T on minute data,
/// clamped below at 0.
std::optional<double> wm_forecast(const MinuteSeries &minutes, Epoch t, std::int64_t horizon_s);

/// Lags x(t), x(t - step), ..., most recent first. nullopt if any is invalid.
std::optional<std::vector<double>> lag_vector(const RegularSeries &series, Epoch t, std::size_t n_lags);

/// kt* lags, most recent first. The newest must be valid; older slots that are
/// invalid only because of the clear-sky floor (night) repeat the next newer
/// lag. An invalid measurement anywhere gives nullopt.
std::optional<std::vector<double>> csi_lag_vector(const ClearSkyIndexSeries &csi, Epoch t, std::size_t n_lags);

std::optional<double> mlp_forecast(const MlpModel &model, const HourlySeries &series, Epoch t);

/// Model output (a clear-sky index) times CS(t + T); nullopt if CS(t + T)
/// is under the floor or the lags are unusable.
std::optional<double> csi_mlp_forecast(const MlpModel &model, const ClearSkyIndexSeries &csi, const SiteConfig &site,
                                       const SolisParams &solis, Epoch t, std::int64_t horizon_s,
                                       double floor_wm2 = kDefaultClearSkyFloorWm2);

// --- benchmark -----------------------------------------------------------

struct BenchmarkConfig {
	int horizon_minutes = 60;
	int step_minutes = 60;
	SeriesKind target = SeriesKind::Irradiation;
	std::vector<int> train_years;
	int test_year = 0;
	/// Empty selects all five for hourly steps and {SP, WM} otherwise.
	std::vector<Method> methods;
	SiteConfig site;
	SolisParams solis;
	double clear_sky_floor_wm2 = kDefaultClearSkyFloorWm2;
	double daylight_min_elevation_deg = kDefaultDaylightElevationDeg;
	TrainSpec train;
	int mlp_runs = 7;

	/// Every inconsistency at once, one message per line; empty when valid.
	std::vector<std::string> problems() const;
	std::vector<Method> effective_methods() const;
};

struct MlpTrainingSummary {
	Method method = Method::MLP;
	int learning_years = 0;
	std::size_t pairs = 0;
	std::size_t best_run = 0;
	std::optional<double> validation_nrmse;
	std::vector<std::optional<double>> run_validation_mse;
};

struct BenchmarkResult {
	/// Ordered by (method, learning_years, issue_epoch).
	std::vector<ForecastRecord> records;
	std::vector<MlpTrainingSummary> training;
	Epoch test_begin = 0;
	Epoch test_end = 0;
	std::size_t test_slots = 0;
};

/// Builds the target grid from `data` (WM always reads minute data), trains
/// one MLP and one CSI-MLP per learning size (the most recent 1, 2, ... train
/// years) and emits one record per method per daylight test slot.
/// Throws std::invalid_argument listing every configuration problem and
/// DataError when the data cannot support the run.
BenchmarkResult run_benchmark(const BenchmarkConfig &cfg, const MinuteSeries &data);

/// `issue_iso8601,horizon_s,method,predicted,observed,valid,fallback_flag`
std::string records_to_csv(const std::vector<ForecastRecord> &records);

/// `epoch,observed,P,SP,WM,MLP,CSI_MLP`, one row per target instant; MLP
/// columns show the largest learning size, blank cells mean no forecast.
std::string plot_data_csv(const std::vector<ForecastRecord> &records);

} // namespace solarcast
