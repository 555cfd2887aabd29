#pragma once

#include "solarcast/forecasters.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace solarcast {

/// sum |predicted - observed| / sum |observed| over valid records.
/// nullopt when there is no valid record or the denominator is zero.
std::optional<double> normalized_l1(std::span<const ForecastRecord> records, bool exclude_fallback = false);

/// sqrt(sum (predicted - observed)^2) / sqrt(sum observed^2) over valid records.
std::optional<double> normalized_l2(std::span<const ForecastRecord> records, bool exclude_fallback = false);

enum class Metric { NL1, NL2 };

struct MethodScore {
	Method method = Method::P;
	int learning_years = 0;
	std::optional<double> nl1;
	std::optional<double> nl2;
	std::size_t n_records = 0;
	std::size_t n_valid = 0;
	std::size_t n_fallback = 0;

	std::string label() const;
	std::optional<double> score(Metric m) const { return m == Metric::NL1 ? nl1 : nl2; }
};

struct EvalReport {
	std::vector<MethodScore> entries; ///< enum order, then learning size
	std::int64_t horizon_s = 0;
	std::int64_t step_s = 0;
	SeriesKind target = SeriesKind::Irradiation;
	Epoch test_begin = 0;
	Epoch test_end = 0;
	bool fallback_excluded = false;
};

/// Groups records by (method, learning_years) and scores each group.
EvalReport evaluate(std::span<const ForecastRecord> records, bool exclude_fallback = false);

/// Entries ascending by `metric`; ties keep enum order, undefined scores go last.
/// Throws std::invalid_argument with fewer than two entries.
std::vector<MethodScore> rank_methods(const EvalReport &report, Metric metric);

/// 100 * (b - a) / b: how much better score `a` is than score `b`, in percent.
/// Throws std::invalid_argument if b <= 0.
double relative_improvement(double a, double b);

/// Aligned plain-text table, one column per method, nL1 and nL2 rows.
std::string format_table(const EvalReport &report);
std::string report_to_csv(const EvalReport &report);
std::string report_to_json(const EvalReport &report);

} // namespace solarcast
