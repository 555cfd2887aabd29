#pragma once

#include "solarcast/series.hpp"
#include "solarcast/time_util.hpp"

#include <string>
#include <vector>

namespace solarcast {

struct SiteConfig {
	double latitude_deg = 48.66;  ///< north positive
	double longitude_deg = 6.16;  ///< east positive
	double altitude_m = 0.0;
	std::string name = "nancy-brabois (assumed)";

	/// Throws std::invalid_argument when a coordinate is out of range.
	void validate() const;
};

struct SunPosition {
	double elevation_deg = 0.0;   ///< geometric, no refraction
	double azimuth_deg = 0.0;     ///< clockwise from north, [0, 360)
	double declination_deg = 0.0;
	double eot_minutes = 0.0;     ///< equation of time
};

/// NOAA general solar position (fractional-year series). Accuracy is a few
/// tenths of a degree between 1950 and 2100.
SunPosition sun_position(const SiteConfig &site, Epoch t);

/// Solar elevation only.
double solar_elevation_deg(const SiteConfig &site, Epoch t);

inline constexpr double kDefaultDaylightElevationDeg = 1.0;

/// True where the sun is above `min_elevation_deg` and the sample is valid.
/// Throws std::invalid_argument if the threshold is outside [-5, 20].
std::vector<bool> daylight_mask(const SiteConfig &site, const RegularSeries &series,
                                double min_elevation_deg = kDefaultDaylightElevationDeg);

} // namespace solarcast
