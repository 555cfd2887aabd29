#include "solarcast/solar_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace solarcast {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

} // namespace

void SiteConfig::validate() const {
	if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) {
		throw std::invalid_argument("latitude must lie in [-90, 90]");
	}
	if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0)) {
		throw std::invalid_argument("longitude must lie in [-180, 180]");
	}
	if (!(altitude_m >= -430.0)) {
		throw std::invalid_argument("altitude must be >= -430 m");
	}
}

SunPosition sun_position(const SiteConfig &site, Epoch t) {
	const CivilTime c = to_civil(t);
	const double hours = c.hour + c.minute / 60.0 + c.second / 3600.0;
	const double gamma = 2.0 * std::numbers::pi / days_in_year(c.year) * (day_of_year(t) - 1 + (hours - 12.0) / 24.0);

	SunPosition p;
	p.eot_minutes = 229.18 * (0.000075 + 0.001868 * std::cos(gamma) - 0.032077 * std::sin(gamma) -
	                          0.014615 * std::cos(2 * gamma) - 0.040849 * std::sin(2 * gamma));
	// The series overshoots the solstice value by a few thousandths of a degree.
	constexpr double kMaxDecl = 23.45 * kDeg;
	const double decl_series = 0.006918 - 0.399912 * std::cos(gamma) + 0.070257 * std::sin(gamma) -
	                    0.006758 * std::cos(2 * gamma) + 0.000907 * std::sin(2 * gamma) -
	                    0.002697 * std::cos(3 * gamma) + 0.00148 * std::sin(3 * gamma);
	const double decl = std::clamp(decl_series, -kMaxDecl, kMaxDecl);
	p.declination_deg = decl / kDeg;

	// UTC input, so no timezone term.
	const double true_solar_minutes = hours * 60.0 + p.eot_minutes + 4.0 * site.longitude_deg;
	const double hour_angle = (true_solar_minutes / 4.0 - 180.0) * kDeg;

	const double lat = site.latitude_deg * kDeg;
	double sin_elev = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
	sin_elev = std::clamp(sin_elev, -1.0, 1.0);
	p.elevation_deg = std::asin(sin_elev) / kDeg;

	const double az = std::atan2(-std::cos(decl) * std::sin(hour_angle),
	                             std::sin(decl) * std::cos(lat) - std::cos(decl) * std::sin(lat) * std::cos(hour_angle));
	double az_deg = az / kDeg;
	if (az_deg < 0.0) {
		az_deg += 360.0;
	}
	if (az_deg >= 360.0) {
		az_deg -= 360.0;
	}
	p.azimuth_deg = az_deg;
	return p;
}

double solar_elevation_deg(const SiteConfig &site, Epoch t) {
	return sun_position(site, t).elevation_deg;
}

std::vector<bool> daylight_mask(const SiteConfig &site, const RegularSeries &series, double min_elevation_deg) {
	if (!(min_elevation_deg >= -5.0 && min_elevation_deg <= 20.0)) {
		throw std::invalid_argument("daylight threshold must lie in [-5, 20] degrees");
	}
	std::vector<bool> mask(series.size(), false);
	for (std::size_t i = 0; i < series.size(); ++i) {
		mask[i] = series.is_valid(i) && solar_elevation_deg(site, series.epoch_at(i)) > min_elevation_deg;
	}
	return mask;
}

} // namespace solarcast
