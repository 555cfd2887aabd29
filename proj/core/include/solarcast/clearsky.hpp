#pragma once

#include "solarcast/series.hpp"
#include "solarcast/solar_geometry.hpp"

#include <span>

namespace solarcast {

/// Simplified Solis global clear-sky model:
///   G = i0_adj * exp(-tau / sin(h)^g) * sin(h),   h > 0
struct SolisParams {
	double tau = 0.35;     ///< broadband optical depth, > 0
	double g = 0.55;       ///< elevation exponent, (0, 1.5]
	double i0_adj = 1450.0; ///< enhanced extraterrestrial irradiance, W/m^2

	void validate() const;
	friend bool operator==(const SolisParams &, const SolisParams &) = default;
};

double solis_from_elevation(const SolisParams &params, double elevation_deg);

double solis_irradiance(const SiteConfig &site, const SolisParams &params, Epoch t);

/// Largest clear-sky value the site can see (sun at its highest noon).
double max_clear_sky(const SiteConfig &site, const SolisParams &params);

/// Clear-sky counterpart of one sample. For Irradiation this is the mean of
/// the minute clear-sky values over the same trailing window (t - window + 60 ... t),
/// so that ratios compare like with like.
double clear_sky_reference(const SiteConfig &site, const SolisParams &params, Epoch t, SeriesKind kind,
                           std::int64_t window_s);

/// Minute-grid Solis curve, `n` samples from `start`.
MinuteSeries solis_curve(const SiteConfig &site, const SolisParams &params, Epoch start, std::size_t n);

inline constexpr double kDefaultClearSkyFloorWm2 = 20.0;
inline constexpr double kClearSkyIndexCap = 2.0;

/// kt* on the grid of its source. Entries whose clear-sky reference is under
/// the floor, or whose measurement is invalid, are invalid.
class ClearSkyIndexSeries : public RegularSeries {
public:
	ClearSkyIndexSeries() = default;
	ClearSkyIndexSeries(Epoch start, std::int64_t step_s, std::vector<double> values, std::vector<bool> valid,
	                    std::vector<bool> below_floor, SeriesKind kind, std::int64_t window_s)
	    : RegularSeries(start, step_s, std::move(values), std::move(valid), kClearSkyIndexCap),
	      below_floor_(std::move(below_floor)), kind_(kind), window_s_(window_s) {}

	/// Kind and aggregation window of the measurement the index came from.
	SeriesKind kind() const { return kind_; }
	std::int64_t window_s() const { return window_s_; }

	/// True where the slot is invalid only because the clear-sky reference
	/// is below the floor (night, twilight) while the measurement was valid.
	bool below_floor(std::size_t i) const { return below_floor_[i]; }

private:
	std::vector<bool> below_floor_;
	SeriesKind kind_ = SeriesKind::Irradiance;
	std::int64_t window_s_ = 0;
};

ClearSkyIndexSeries clear_sky_index(const HourlySeries &measured, const SiteConfig &site, const SolisParams &params,
                                    double floor_wm2 = kDefaultClearSkyFloorWm2);

/// General form: `kind`/`window_s` select the clear-sky reference.
ClearSkyIndexSeries clear_sky_index(const RegularSeries &measured, SeriesKind kind, std::int64_t window_s,
                                    const SiteConfig &site, const SolisParams &params,
                                    double floor_wm2 = kDefaultClearSkyFloorWm2);

/// kt* evaluated at explicit timestamps. Throws std::invalid_argument if a
/// timestamp is not on the series grid.
std::vector<std::optional<double>> clear_sky_index_at(const HourlySeries &measured, std::span<const Epoch> timestamps,
                                                      const SiteConfig &site, const SolisParams &params,
                                                      double floor_wm2 = kDefaultClearSkyFloorWm2);

struct CalibrationResult {
	SolisParams params;
	bool converged = false; ///< false when the defaults were returned
	double rmse_wm2 = 0.0;  ///< fit residual on the envelope points
	std::size_t envelope_points = 0;
};

/// Fits tau, g and i0_adj to the upper envelope (max per 0.5 degree elevation
/// bin) of clear-day measurements. A weighted log-linear profile over g gives
/// the start point; cyclic golden-section coordinate descent then minimizes
/// the squared error in W/m^2. Throws DataError with fewer than 100 daylight
/// samples.
CalibrationResult calibrate_solis(const MinuteSeries &clear_days, const SiteConfig &site);

} // namespace solarcast
