#pragma once

#include "solarcast/clearsky.hpp"
#include "solarcast/series.hpp"
#include "solarcast/solar_geometry.hpp"

#include <cstdint>
#include <string_view>

namespace solarcast {

enum class CloudRegime { Custom, Clear, Broken, Overcast };

std::string_view to_string(CloudRegime regime);
CloudRegime parse_cloud_regime(std::string_view text);

/// Minute-scale cloud attenuation kt, a mean-reverting AR(1) process
///   kt[k+1] = mean_kt + rho * (kt[k] - mean_kt) + sigma * N(0, 1)
/// reflected back into [kt_floor, 1]. Each day restarts at mean_kt with
/// its own generator seeded `seed + day_index`.
struct CloudModel {
	std::uint64_t seed = 1;
	double rho = 0.995;
	double sigma = 0.03;
	double kt_floor = 0.05;
	double mean_kt = 0.7;
	CloudRegime regime = CloudRegime::Custom;

	/// Parameters after applying the regime preset (Custom returns *this).
	CloudModel resolved() const;
	void validate() const;
};

/// Presets: Clear kt = 1, Overcast kt = 0.2 (both noise-free); Broken is a
/// fast-fluctuating sky around kt = 0.6.
CloudModel cloud_preset(CloudRegime regime, std::uint64_t seed);

/// `n_days` of minute samples from `start_date` (UTC midnight):
/// value = solis_irradiance * kt, zero at night. Deterministic per seed.
MinuteSeries gen_days(const SiteConfig &site, const SolisParams &solis, const CloudModel &cloud, Epoch start_date,
                      int n_days);

/// The kt path gen_days multiplies in, for tests and diagnostics.
std::vector<double> gen_attenuation(const CloudModel &cloud, int n_days);

} // namespace solarcast
