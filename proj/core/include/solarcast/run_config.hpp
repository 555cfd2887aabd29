#pragma once

#include "solarcast/forecasters.hpp"
#include "solarcast/synthetic.hpp"

#include <string>
#include <string_view>

namespace solarcast {

/// Everything a CLI run can be configured with. Read from a flat
/// `key = value` file (`#` starts a comment); unknown keys are rejected.
struct RunConfig {
	BenchmarkConfig bench;        ///< site.*, solis.*, bench.*, mlp.*, eval.daylight_min_elev
	bool exclude_fallback = false; ///< eval.exclude_fallback
	CloudModel cloud;             ///< synth.*
	std::string synth_start = "2013-01-01"; ///< synth.start (UTC date)

	Epoch synth_start_epoch() const;
};

/// Throws std::invalid_argument naming the line on any error.
RunConfig parse_run_config(std::string_view text);

/// Key reference with defaults, for --help.
std::string run_config_help();

/// `site.*` and `solis.*` lines for a config fragment.
std::string format_site_fragment(const SiteConfig &site, const SolisParams &solis);

} // namespace solarcast
