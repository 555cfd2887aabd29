#include "solarcast/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <set>
#include <stdexcept>

namespace solarcast {

namespace {

std::string_view trim(std::string_view s) {
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
		s.remove_prefix(1);
	}
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
		s.remove_suffix(1);
	}
	return s;
}

double to_double(std::string_view v) {
	double out = 0.0;
	auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
	if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
		throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
	}
	return out;
}

template <typename Int>
Int to_int(std::string_view v) {
	Int out{};
	auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
	if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
		throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
	}
	return out;
}

bool to_bool(std::string_view v) {
	if (v == "true" || v == "1" || v == "yes") {
		return true;
	}
	if (v == "false" || v == "0" || v == "no") {
		return false;
	}
	throw std::invalid_argument("expected true/false, got '" + std::string(v) + "'");
}

template <typename F>
void for_each_item(std::string_view list, F &&f) {
	while (!list.empty()) {
		const auto comma = list.find(',');
		const auto item = trim(list.substr(0, comma));
		if (!item.empty()) {
			f(item);
		}
		if (comma == std::string_view::npos) {
			break;
		}
		list.remove_prefix(comma + 1);
	}
}

struct Key {
	const char *name;
	const char *default_value;
	const char *help;
	std::function<void(RunConfig &, std::string_view)> set;
};

const std::vector<Key> &keys() {
	static const std::vector<Key> table = {
	    {"site.lat", "48.66", "latitude, degrees north (assumed station position)",
	     [](RunConfig &c, std::string_view v) { c.bench.site.latitude_deg = to_double(v); }},
	    {"site.lon", "6.16", "longitude, degrees east (assumed station position)",
	     [](RunConfig &c, std::string_view v) { c.bench.site.longitude_deg = to_double(v); }},
	    {"site.alt", "0", "altitude, metres",
	     [](RunConfig &c, std::string_view v) { c.bench.site.altitude_m = to_double(v); }},
	    {"site.name", "nancy-brabois (assumed)", "free-form label",
	     [](RunConfig &c, std::string_view v) { c.bench.site.name = std::string(v); }},
	    {"solis.tau", "0.35", "broadband optical depth",
	     [](RunConfig &c, std::string_view v) { c.bench.solis.tau = to_double(v); }},
	    {"solis.g", "0.55", "elevation exponent",
	     [](RunConfig &c, std::string_view v) { c.bench.solis.g = to_double(v); }},
	    {"solis.i0_adj", "1450", "enhanced extraterrestrial irradiance, W/m^2",
	     [](RunConfig &c, std::string_view v) { c.bench.solis.i0_adj = to_double(v); }},
	    {"solis.floor", "20", "clear-sky floor for index ratios, W/m^2",
	     [](RunConfig &c, std::string_view v) { c.bench.clear_sky_floor_wm2 = to_double(v); }},
	    {"bench.horizon_min", "60", "forecast horizon, minutes",
	     [](RunConfig &c, std::string_view v) { c.bench.horizon_minutes = to_int<int>(v); }},
	    {"bench.step_min", "60", "forecast grid step, minutes",
	     [](RunConfig &c, std::string_view v) { c.bench.step_minutes = to_int<int>(v); }},
	    {"bench.target", "irradiation", "irradiation (trailing mean) or irradiance (instantaneous)",
	     [](RunConfig &c, std::string_view v) { c.bench.target = parse_series_kind(v); }},
	    {"bench.train_years", "", "comma-separated training years",
	     [](RunConfig &c, std::string_view v) {
		     c.bench.train_years.clear();
		     for_each_item(v, [&](std::string_view y) { c.bench.train_years.push_back(to_int<int>(y)); });
	     }},
	    {"bench.test_year", "0", "evaluation year (required for bench)",
	     [](RunConfig &c, std::string_view v) { c.bench.test_year = to_int<int>(v); }},
	    {"bench.methods", "auto", "comma-separated subset of P,SP,WM,MLP,CSI_MLP; auto = all five on hourly steps, SP,WM otherwise",
	     [](RunConfig &c, std::string_view v) {
		     c.bench.methods.clear();
		     if (v == "auto") {
			     return;
		     }
		     for_each_item(v, [&](std::string_view m) { c.bench.methods.push_back(parse_method(m)); });
	     }},
	    {"mlp.lags", "8", "input lags",
	     [](RunConfig &c, std::string_view v) { c.bench.train.n_lags = to_int<std::size_t>(v); }},
	    {"mlp.hidden", "10", "hidden tanh units",
	     [](RunConfig &c, std::string_view v) { c.bench.train.n_hidden = to_int<std::size_t>(v); }},
	    {"mlp.lr", "0.1", "learning rate",
	     [](RunConfig &c, std::string_view v) { c.bench.train.learning_rate = to_double(v); }},
	    {"mlp.momentum", "0.9", "momentum",
	     [](RunConfig &c, std::string_view v) { c.bench.train.momentum = to_double(v); }},
	    {"mlp.epochs", "200", "maximum epochs",
	     [](RunConfig &c, std::string_view v) { c.bench.train.max_epochs = to_int<int>(v); }},
	    {"mlp.patience", "20", "epochs without validation gain before stopping",
	     [](RunConfig &c, std::string_view v) { c.bench.train.patience = to_int<int>(v); }},
	    {"mlp.seed", "1", "seed of the first training run",
	     [](RunConfig &c, std::string_view v) { c.bench.train.seed = to_int<std::uint64_t>(v); }},
	    {"mlp.runs", "7", "training runs per model; the best validation error is kept",
	     [](RunConfig &c, std::string_view v) { c.bench.mlp_runs = to_int<int>(v); }},
	    {"mlp.val_fraction", "0.2", "chronologically last share held out for validation",
	     [](RunConfig &c, std::string_view v) { c.bench.train.validation_fraction = to_double(v); }},
	    {"eval.exclude_fallback", "false", "drop SP records that fell back to persistence",
	     [](RunConfig &c, std::string_view v) { c.exclude_fallback = to_bool(v); }},
	    {"eval.daylight_min_elev", "1.0", "solar elevation a test slot must exceed, degrees",
	     [](RunConfig &c, std::string_view v) { c.bench.daylight_min_elevation_deg = to_double(v); }},
	    {"synth.regime", "custom", "custom, clear, broken or overcast",
	     [](RunConfig &c, std::string_view v) { c.cloud.regime = parse_cloud_regime(v); }},
	    {"synth.rho", "0.995", "AR(1) coefficient of the cloud index (custom regime)",
	     [](RunConfig &c, std::string_view v) { c.cloud.rho = to_double(v); }},
	    {"synth.sigma", "0.03", "innovation standard deviation (custom regime)",
	     [](RunConfig &c, std::string_view v) { c.cloud.sigma = to_double(v); }},
	    {"synth.kt_floor", "0.05", "lowest cloud index (custom regime)",
	     [](RunConfig &c, std::string_view v) { c.cloud.kt_floor = to_double(v); }},
	    {"synth.mean_kt", "0.7", "mean cloud index (custom regime)",
	     [](RunConfig &c, std::string_view v) { c.cloud.mean_kt = to_double(v); }},
	    {"synth.start", "2013-01-01", "first generated day, UTC",
	     [](RunConfig &c, std::string_view v) {
		     c.synth_start = std::string(v);
		     (void)c.synth_start_epoch();
	     }},
	};
	return table;
}

} // namespace

Epoch RunConfig::synth_start_epoch() const {
	return parse_iso8601(synth_start + "T00:00:00Z").epoch;
}

RunConfig parse_run_config(std::string_view text) {
	RunConfig cfg;
	std::set<std::string, std::less<>> seen;
	std::size_t line_no = 0;
	while (!text.empty()) {
		const auto nl = text.find('\n');
		std::string_view line = text.substr(0, nl);
		text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
		++line_no;
		if (const auto hash = line.find('#'); hash != std::string_view::npos) {
			line = line.substr(0, hash);
		}
		line = trim(line);
		if (line.empty()) {
			continue;
		}
		const auto eq = line.find('=');
		const std::string where = "config line " + std::to_string(line_no) + ": ";
		if (eq == std::string_view::npos) {
			throw std::invalid_argument(where + "expected key = value");
		}
		const auto key = trim(line.substr(0, eq));
		const auto value = trim(line.substr(eq + 1));
		const auto &table = keys();
		const auto it = std::find_if(table.begin(), table.end(), [&](const Key &k) { return key == k.name; });
		if (it == table.end()) {
			throw std::invalid_argument(where + "unknown key '" + std::string(key) + "'");
		}
		if (!seen.insert(std::string(key)).second) {
			throw std::invalid_argument(where + "duplicate key '" + std::string(key) + "'");
		}
		try {
			it->set(cfg, value);
		} catch (const std::invalid_argument &e) {
			throw std::invalid_argument(where + std::string(key) + ": " + e.what());
		}
	}
	return cfg;
}

std::string run_config_help() {
	std::string out = "Config keys (key = value, '#' comments):\n";
	for (const Key &k : keys()) {
		char buf[256];
		std::snprintf(buf, sizeof buf, "  %-22s default %-26s %s\n", k.name,
		              (std::string("'") + k.default_value + "'").c_str(), k.help);
		out += buf;
	}
	return out;
}

std::string format_site_fragment(const SiteConfig &site, const SolisParams &solis) {
	char buf[512];
	std::snprintf(buf, sizeof buf,
	              "site.lat = %.17g\nsite.lon = %.17g\nsite.alt = %.17g\nsolis.tau = %.17g\nsolis.g = %.17g\n"
	              "solis.i0_adj = %.17g\n",
	              site.latitude_deg, site.longitude_deg, site.altitude_m, solis.tau, solis.g, solis.i0_adj);
	return buf;
}

} // namespace solarcast
