#pragma once

#include "solarcast/time_util.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast {

inline constexpr double kDefaultCeilingWm2 = 1500.0;

/// Values on a uniform time grid `start + k * step` with per-sample validity.
/// Invalid samples keep a stored value of 0 and must never be read as data.
class RegularSeries {
public:
	RegularSeries() = default;
	/// Throws std::invalid_argument if step <= 0, the lengths differ, or a
	/// valid value falls outside [0, ceiling].
	RegularSeries(Epoch start_epoch, std::int64_t step_s, std::vector<double> values, std::vector<bool> valid,
	              double ceiling = kDefaultCeilingWm2);

	Epoch start_epoch() const { return start_; }
	std::int64_t step() const { return step_; }
	std::size_t size() const { return values_.size(); }
	bool empty() const { return values_.empty(); }

	Epoch epoch_at(std::size_t i) const { return start_ + static_cast<Epoch>(i) * step_; }
	/// Epoch of the last sample; only meaningful when non-empty.
	Epoch last_epoch() const { return epoch_at(values_.size() - 1); }

	double value(std::size_t i) const { return values_[i]; }
	bool is_valid(std::size_t i) const { return valid_[i]; }

	std::span<const double> values() const { return values_; }
	const std::vector<bool> &valid() const { return valid_; }

	/// Index of the sample stamped exactly `t`, if `t` lies on the grid.
	std::optional<std::size_t> index_of(Epoch t) const;
	/// Value at exact timestamp `t` if on-grid and valid.
	std::optional<double> at(Epoch t) const;

	std::size_t valid_count() const;

private:
	Epoch start_ = 0;
	std::int64_t step_ = 60;
	std::vector<double> values_;
	std::vector<bool> valid_;
};

/// Raw station record, normally one sample per minute (W/m^2).
class MinuteSeries : public RegularSeries {
public:
	using RegularSeries::RegularSeries;
};

enum class SeriesKind {
	Irradiation, ///< trailing mean of minute samples over the aggregation window
	Irradiance,  ///< instantaneous sample at each grid point
};

std::string_view to_string(SeriesKind kind);
SeriesKind parse_series_kind(std::string_view text);

/// Coarse forecasting grid (hourly, or e.g. 5-minute) derived from a MinuteSeries.
class HourlySeries : public RegularSeries {
public:
	HourlySeries() = default;
	/// `window_s` is the trailing aggregation window for Irradiation (equal to
	/// the step), 0 for Irradiance.
	HourlySeries(Epoch start_epoch, std::int64_t step_s, std::vector<double> values, std::vector<bool> valid,
	             SeriesKind kind, std::int64_t window_s);

	SeriesKind kind() const { return kind_; }
	std::int64_t window_s() const { return window_s_; }

	/// Re-derives every valid entry from `source` and compares within `tol`.
	/// Used to audit the Irradiation invariant.
	bool matches_source(const MinuteSeries &source, double tol = 1e-9) const;

private:
	SeriesKind kind_ = SeriesKind::Irradiance;
	std::int64_t window_s_ = 0;
};

// --- CSV ingestion -------------------------------------------------------

class CsvError : public std::runtime_error {
public:
	enum class Code { Empty, Malformed, NonMonotonic, Duplicate, NonIntegerStep, OffGrid };

	CsvError(Code code, const std::string &what) : std::runtime_error(what), code_(code) {}
	Code code() const { return code_; }

private:
	Code code_;
};

struct ParseOptions {
	/// Grid step in seconds. nullopt infers it as the gcd of successive
	/// timestamp differences.
	std::optional<std::int64_t> step_s = 60;
	double ceiling_wm2 = kDefaultCeilingWm2;
};

struct IngestStats {
	std::size_t rows = 0;
	std::size_t gaps = 0;        ///< grid slots with no row
	std::size_t negatives = 0;   ///< value < 0
	std::size_t spikes = 0;      ///< value > ceiling
	std::size_t unparseable = 0; ///< value column not a number

	std::size_t warnings() const { return negatives + spikes + unparseable; }
};

struct ParsedSeries {
	MinuteSeries series;
	IngestStats stats;
};

/// Reads `timestamp,irradiance_wm2` rows (optional header, LF or CRLF).
/// Throws CsvError for structural failures; bad values only invalidate
/// their slot and are counted in the stats.
ParsedSeries parse_csv(std::string_view text, const ParseOptions &options = {});

/// Writes the header and one row per valid sample. Values use the shortest
/// decimal form that round-trips to the same double.
std::string serialize_csv(const RegularSeries &series);

// --- resampling ----------------------------------------------------------

inline constexpr int kDefaultMinValidPerHour = 55;

/// Irradiation at each `t = 60 k` minutes: mean of the valid samples among
/// the 60 trailing minutes (t-59 ... t). An hour with fewer than
/// `min_valid` valid samples is invalid. Throws DataError if no full hour fits.
HourlySeries hourly_irradiation(const MinuteSeries &ms, int min_valid = kDefaultMinValidPerHour);

/// Generalization of hourly_irradiation to a `step_minutes` grid; the
/// validity threshold scales as ceil(step_minutes * 55 / 60) unless given.
HourlySeries trailing_mean_resample(const MinuteSeries &ms, int step_minutes,
                                    std::optional<int> min_valid = std::nullopt);

/// Sample picked at every `t = step_minutes * k`.
HourlySeries hourly_instantaneous(const MinuteSeries &ms, int step_minutes);

/// Minute-resolution trailing mean over `window_minutes`; same grid as `ms`,
/// the first `window_minutes - 1` slots invalid.
MinuteSeries running_mean(const MinuteSeries &ms, int window_minutes, int min_valid);

} // namespace solarcast
