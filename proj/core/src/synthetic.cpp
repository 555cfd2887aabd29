#include "solarcast/synthetic.hpp"

#include "solarcast/random.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace solarcast {

namespace {

constexpr int kMinutesPerDay = 1440;

double reflect(double kt, double lo, double hi) {
	// A couple of reflections covers any realistic innovation; the clamp
	// handles pathological sigma.
	for (int i = 0; i < 4 && (kt < lo || kt > hi); ++i) {
		if (kt > hi) {
			kt = 2.0 * hi - kt;
		}
		if (kt < lo) {
			kt = 2.0 * lo - kt;
		}
	}
	return std::clamp(kt, lo, hi);
}

} // namespace

std::string_view to_string(CloudRegime regime) {
	switch (regime) {
	case CloudRegime::Clear:
		return "clear";
	case CloudRegime::Broken:
		return "broken";
	case CloudRegime::Overcast:
		return "overcast";
	case CloudRegime::Custom:
		break;
	}
	return "custom";
}

CloudRegime parse_cloud_regime(std::string_view text) {
	for (CloudRegime r : {CloudRegime::Custom, CloudRegime::Clear, CloudRegime::Broken, CloudRegime::Overcast}) {
		if (text == to_string(r)) {
			return r;
		}
	}
	throw std::invalid_argument("unknown cloud regime '" + std::string(text) + "'");
}

CloudModel cloud_preset(CloudRegime regime, std::uint64_t seed) {
	CloudModel m;
	m.seed = seed;
	m.regime = regime;
	switch (regime) {
	case CloudRegime::Clear:
		m.rho = 0.0;
		m.sigma = 0.0;
		m.mean_kt = 1.0;
		break;
	case CloudRegime::Overcast:
		m.rho = 0.0;
		m.sigma = 0.0;
		m.mean_kt = 0.2;
		break;
	case CloudRegime::Broken:
		m.rho = 0.2;
		m.sigma = 0.25;
		m.mean_kt = 0.6;
		m.kt_floor = 0.05;
		break;
	case CloudRegime::Custom:
		break;
	}
	return m;
}

CloudModel CloudModel::resolved() const {
	return regime == CloudRegime::Custom ? *this : cloud_preset(regime, seed);
}

void CloudModel::validate() const {
	const CloudModel m = resolved();
	if (!(m.rho >= 0.0 && m.rho < 1.0)) {
		throw std::invalid_argument("cloud rho must lie in [0, 1)");
	}
	if (!(m.sigma >= 0.0)) {
		throw std::invalid_argument("cloud sigma must be non-negative");
	}
	if (!(m.kt_floor >= 0.0 && m.kt_floor < 1.0)) {
		throw std::invalid_argument("cloud kt_floor must lie in [0, 1)");
	}
	if (!(m.mean_kt >= m.kt_floor && m.mean_kt <= 1.0)) {
		throw std::invalid_argument("cloud mean_kt must lie in [kt_floor, 1]");
	}
}

std::vector<double> gen_attenuation(const CloudModel &cloud, int n_days) {
	if (n_days < 1) {
		throw std::invalid_argument("n_days must be at least 1");
	}
	const CloudModel m = cloud.resolved();
	m.validate();
	std::vector<double> kt(static_cast<std::size_t>(n_days) * kMinutesPerDay);
	for (int day = 0; day < n_days; ++day) {
		Rng rng(m.seed + static_cast<std::uint64_t>(day));
		double k = m.mean_kt;
		const auto base = static_cast<std::size_t>(day) * kMinutesPerDay;
		for (int minute = 0; minute < kMinutesPerDay; ++minute) {
			kt[base + static_cast<std::size_t>(minute)] = k;
			if (m.sigma > 0.0) {
				k = reflect(m.mean_kt + m.rho * (k - m.mean_kt) + m.sigma * rng.normal(), m.kt_floor, 1.0);
			}
		}
	}
	return kt;
}

MinuteSeries gen_days(const SiteConfig &site, const SolisParams &solis, const CloudModel &cloud, Epoch start_date,
                      int n_days) {
	site.validate();
	solis.validate();
	const std::vector<double> kt = gen_attenuation(cloud, n_days);
	std::vector<double> values(kt.size());
	for (std::size_t i = 0; i < kt.size(); ++i) {
		values[i] = solis_irradiance(site, solis, start_date + static_cast<Epoch>(i) * 60) * kt[i];
	}
	return MinuteSeries(start_date, 60, std::move(values), std::vector<bool>(kt.size(), true),
	                    std::max(kDefaultCeilingWm2, solis.i0_adj));
}

} // namespace solarcast
