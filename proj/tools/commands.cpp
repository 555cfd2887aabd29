#include "commands.hpp"

#include "solarcast/clearsky.hpp"
#include "solarcast/errors.hpp"
#include "solarcast/evaluation.hpp"
#include "solarcast/forecasters.hpp"
#include "solarcast/mlp.hpp"
#include "solarcast/run_config.hpp"
#include "solarcast/series.hpp"
#include "solarcast/synthetic.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace solarcast::cli {

namespace {

class UsageError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw std::ios_base::failure("cannot open " + path);
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw std::ios_base::failure("cannot write " + path);
	}
	out << content;
	if (!out) {
		throw std::ios_base::failure("write failed for " + path);
	}
}

RunConfig load_config(const std::string &path) {
	if (path.empty()) {
		return {};
	}
	std::string text;
	try {
		text = read_file(path);
	} catch (const std::ios_base::failure &e) {
		throw UsageError(e.what());
	}
	try {
		return parse_run_config(text);
	} catch (const std::invalid_argument &e) {
		throw UsageError(path + ": " + e.what());
	}
}

// --- ingest --------------------------------------------------------------

int cmd_ingest(const std::string &in_path, const std::string &out_path, std::ostream &err) {
	std::string text;
	try {
		text = read_file(in_path);
	} catch (const std::ios_base::failure &e) {
		err << "ingest: " << e.what() << '\n';
		return kUsage;
	}
	ParsedSeries parsed;
	try {
		parsed = parse_csv(text);
	} catch (const CsvError &e) {
		err << "ingest: " << e.what() << '\n';
		return kUsage;
	}
	const auto &s = parsed.stats;
	err << "ingest: " << s.rows << " rows, " << parsed.series.size() << " slots, " << s.gaps << " gaps, "
	    << s.negatives << " negative, " << s.spikes << " spikes, " << s.unparseable << " unparseable\n";
	write_file(out_path, serialize_csv(parsed.series));
	return kOk;
}

// --- synth ---------------------------------------------------------------

int cmd_synth(const std::string &config_path, int days, std::optional<std::uint64_t> seed,
              const std::optional<std::string> &regime, const std::string &out_path, std::ostream &err) {
	if (days < 1) {
		err << "synth: --days must be at least 1\n";
		return kUsage;
	}
	RunConfig cfg = load_config(config_path);
	if (seed) {
		cfg.cloud.seed = *seed;
	}
	if (regime) {
		try {
			cfg.cloud.regime = parse_cloud_regime(*regime);
		} catch (const std::invalid_argument &e) {
			throw UsageError(e.what());
		}
	}
	MinuteSeries series;
	try {
		series = gen_days(cfg.bench.site, cfg.bench.solis, cfg.cloud, cfg.synth_start_epoch(), days);
	} catch (const std::invalid_argument &e) {
		throw UsageError(std::string("synth: ") + e.what());
	}
	write_file(out_path, serialize_csv(series));
	err << "synth: wrote " << series.size() << " minutes (" << to_string(cfg.cloud.resolved().regime)
	    << ", seed " << cfg.cloud.seed << ")\n";
	return kOk;
}

// --- bench ---------------------------------------------------------------

struct BenchPaths {
	std::string config;
	std::string data;
	std::string records;
	std::string report;
	std::string report_csv;
	std::string report_json;
	std::string plot;
};

int cmd_bench(const BenchPaths &paths, std::ostream &out, std::ostream &err) {
	const RunConfig cfg = load_config(paths.config);
	if (const auto problems = cfg.bench.problems(); !problems.empty()) {
		for (const auto &p : problems) {
			err << "bench: config: " << p << '\n';
		}
		return kUsage;
	}

	std::string text;
	try {
		text = read_file(paths.data);
	} catch (const std::ios_base::failure &e) {
		err << "bench: " << e.what() << '\n';
		return kData;
	}
	MinuteSeries data;
	try {
		data = parse_csv(text).series;
	} catch (const CsvError &e) {
		err << "bench: data: " << e.what() << '\n';
		return kData;
	}

	BenchmarkResult result;
	try {
		result = run_benchmark(cfg.bench, data);
	} catch (const DataError &e) {
		err << "bench: " << e.what() << '\n';
		return kData;
	} catch (const TrainingDiverged &e) {
		err << "bench: " << e.what() << '\n';
		return kData;
	}

	EvalReport report = evaluate(result.records, cfg.exclude_fallback);
	report.horizon_s = std::int64_t{cfg.bench.horizon_minutes} * 60;
	report.step_s = std::int64_t{cfg.bench.step_minutes} * 60;
	report.target = cfg.bench.target;
	report.test_begin = result.test_begin;
	report.test_end = result.test_end;

	const std::string table = format_table(report);
	write_file(paths.records, records_to_csv(result.records));
	write_file(paths.report, table);
	write_file(paths.plot.empty() ? paths.report + ".plot.csv" : paths.plot, plot_data_csv(result.records));
	if (!paths.report_csv.empty()) {
		write_file(paths.report_csv, report_to_csv(report));
	}
	if (!paths.report_json.empty()) {
		write_file(paths.report_json, report_to_json(report));
	}
	out << table;
	for (const auto &t : result.training) {
		err << "bench: " << to_string(t.method) << ' ' << t.learning_years << "y: " << t.pairs
		    << " training pairs, best run " << t.best_run << '\n';
	}
	return kOk;
}

// --- calibrate -----------------------------------------------------------

int cmd_calibrate(const std::string &data_path, const std::string &config_path, const std::string &out_path,
                  std::ostream &out, std::ostream &err) {
	const RunConfig cfg = load_config(config_path);
	try {
		cfg.bench.site.validate();
	} catch (const std::invalid_argument &e) {
		throw UsageError(e.what());
	}
	std::string text;
	try {
		text = read_file(data_path);
	} catch (const std::ios_base::failure &e) {
		err << "calibrate: " << e.what() << '\n';
		return kData;
	}
	CalibrationResult fit;
	try {
		fit = calibrate_solis(parse_csv(text).series, cfg.bench.site);
	} catch (const CsvError &e) {
		err << "calibrate: data: " << e.what() << '\n';
		return kData;
	} catch (const DataError &e) {
		err << "calibrate: " << e.what() << '\n';
		return kData;
	}
	std::string fragment = "# solis fit over " + std::to_string(fit.envelope_points) + " envelope points, rmse " +
	                       std::to_string(fit.rmse_wm2) + " W/m^2" +
	                       (fit.converged ? "" : " (fit diverged, defaults kept)") + "\n";
	fragment += format_site_fragment(cfg.bench.site, fit.params);
	if (out_path.empty()) {
		out << fragment;
	} else {
		write_file(out_path, fragment);
	}
	return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
	CLI::App app{"solarcast: short-horizon solar irradiance forecasting benchmarks"};
	app.require_subcommand(1);
	app.footer(run_config_help());

	std::string in_path;
	std::string out_path;
	auto *ingest = app.add_subcommand("ingest", "validate a minute CSV and write it normalized");
	ingest->add_option("--in", in_path, "input CSV (timestamp,irradiance_wm2)")->required();
	ingest->add_option("--out", out_path, "normalized output CSV")->required();

	std::string config_path;
	int days = 0;
	std::optional<std::uint64_t> seed;
	std::optional<std::string> regime;
	auto *synth = app.add_subcommand("synth", "generate a seeded synthetic minute dataset");
	synth->add_option("--config", config_path, "run configuration file");
	synth->add_option("--days", days, "number of days")->required();
	synth->add_option("--seed", seed, "cloud seed (overrides synth seed)");
	synth->add_option("--regime", regime, "clear, broken, overcast or custom (overrides synth.regime)");
	synth->add_option("--out", out_path, "output CSV")->required();

	BenchPaths bench_paths;
	auto *bench = app.add_subcommand("bench", "run the forecasting benchmark and score it");
	bench->add_option("--config", bench_paths.config, "run configuration file")->required();
	bench->add_option("--data", bench_paths.data, "minute CSV")->required();
	bench->add_option("--out-records", bench_paths.records, "forecast records CSV")->required();
	bench->add_option("--out-report", bench_paths.report, "plain-text score table")->required();
	bench->add_option("--out-report-csv", bench_paths.report_csv, "score table as CSV");
	bench->add_option("--out-report-json", bench_paths.report_json, "score table as JSON");
	bench->add_option("--out-plot", bench_paths.plot, "plot data CSV (default <out-report>.plot.csv)");

	std::string data_path;
	auto *calibrate = app.add_subcommand("calibrate", "fit Solis parameters to clear-day data");
	calibrate->add_option("--data", data_path, "minute CSV of clear days")->required();
	calibrate->add_option("--config", config_path, "run configuration file (site)");
	calibrate->add_option("--out", out_path, "write the config fragment here instead of stdout");

	std::vector<std::string> reversed(args.rbegin(), args.rend());
	try {
		app.parse(reversed);
	} catch (const CLI::Error &e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? kOk : kUsage;
	}

	try {
		if (*ingest) {
			return cmd_ingest(in_path, out_path, err);
		}
		if (*synth) {
			return cmd_synth(config_path, days, seed, regime, out_path, err);
		}
		if (*bench) {
			return cmd_bench(bench_paths, out, err);
		}
		if (*calibrate) {
			return cmd_calibrate(data_path, config_path, out_path, out, err);
		}
	} catch (const UsageError &e) {
		err << e.what() << '\n';
		return kUsage;
	} catch (const std::ios_base::failure &e) {
		err << e.what() << '\n';
		return kUsage;
	}
	return kUsage;
}

} // namespace solarcast::cli
