#include "solarcast/series.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace solarcast {

RegularSeries::RegularSeries(Epoch start_epoch, std::int64_t step_s, std::vector<double> values,
                             std::vector<bool> valid, double ceiling)
    : start_(start_epoch), step_(step_s), values_(std::move(values)), valid_(std::move(valid)) {
	if (step_ <= 0) {
		throw std::invalid_argument("series step must be positive");
	}
	if (values_.size() != valid_.size()) {
		throw std::invalid_argument("values and validity flags differ in length");
	}
	for (std::size_t i = 0; i < values_.size(); ++i) {
		if (!valid_[i]) {
			continue;
		}
		const double v = values_[i];
		if (!std::isfinite(v) || v < 0.0 || v > ceiling) {
			throw std::invalid_argument("valid sample " + std::to_string(i) + " outside [0, " +
			                            std::to_string(ceiling) + "]");
		}
	}
}

std::optional<std::size_t> RegularSeries::index_of(Epoch t) const {
	if (values_.empty() || t < start_) {
		return std::nullopt;
	}
	const Epoch offset = t - start_;
	if (offset % step_ != 0) {
		return std::nullopt;
	}
	const auto idx = static_cast<std::size_t>(offset / step_);
	if (idx >= values_.size()) {
		return std::nullopt;
	}
	return idx;
}

std::optional<double> RegularSeries::at(Epoch t) const {
	const auto idx = index_of(t);
	if (!idx || !valid_[*idx]) {
		return std::nullopt;
	}
	return values_[*idx];
}

std::size_t RegularSeries::valid_count() const {
	return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), true));
}

std::string_view to_string(SeriesKind kind) {
	return kind == SeriesKind::Irradiation ? "irradiation" : "irradiance";
}

SeriesKind parse_series_kind(std::string_view text) {
	if (text == "irradiation" || text == "Irradiation") {
		return SeriesKind::Irradiation;
	}
	if (text == "irradiance" || text == "Irradiance") {
		return SeriesKind::Irradiance;
	}
	throw std::invalid_argument("unknown target kind '" + std::string(text) + "'");
}

HourlySeries::HourlySeries(Epoch start_epoch, std::int64_t step_s, std::vector<double> values,
                           std::vector<bool> valid, SeriesKind kind, std::int64_t window_s)
    : RegularSeries(start_epoch, step_s, std::move(values), std::move(valid)), kind_(kind), window_s_(window_s) {
	if (kind_ == SeriesKind::Irradiation && window_s_ <= 0) {
		throw std::invalid_argument("irradiation series needs a positive aggregation window");
	}
}

bool HourlySeries::matches_source(const MinuteSeries &source, double tol) const {
	for (std::size_t i = 0; i < size(); ++i) {
		if (!is_valid(i)) {
			continue;
		}
		const Epoch t = epoch_at(i);
		if (kind_ == SeriesKind::Irradiance) {
			const auto v = source.at(t);
			if (!v || std::abs(*v - value(i)) > tol) {
				return false;
			}
			continue;
		}
		double sum = 0.0;
		int n = 0;
		for (Epoch m = t - window_s_ + source.step(); m <= t; m += source.step()) {
			if (const auto v = source.at(m)) {
				sum += *v;
				++n;
			}
		}
		if (n == 0 || std::abs(sum / n - value(i)) > tol * std::max(1.0, std::abs(value(i)))) {
			return false;
		}
	}
	return true;
}

// --- CSV -----------------------------------------------------------------

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

std::optional<double> parse_double(std::string_view s) {
	double v = 0.0;
	const char *first = s.data();
	const char *last = s.data() + s.size();
	if (first != last && *first == '+') {
		++first;
	}
	auto [ptr, ec] = std::from_chars(first, last, v);
	if (ec != std::errc() || ptr != last || first == last || !std::isfinite(v)) {
		return std::nullopt;
	}
	return v;
}

struct Row {
	Epoch epoch;
	std::optional<double> value;
};

} // namespace

ParsedSeries parse_csv(std::string_view text, const ParseOptions &options) {
	// UTF-8 byte order mark
	if (text.starts_with("\xEF\xBB\xBF")) {
		text.remove_prefix(3);
	}

	std::vector<Row> rows;
	std::size_t line_no = 0;
	bool first_content_line = true;
	while (!text.empty()) {
		const auto nl = text.find('\n');
		std::string_view line = trim(text.substr(0, nl));
		text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
		++line_no;
		if (line.empty()) {
			continue;
		}
		const auto comma = line.find(',');
		const std::string_view stamp = trim(line.substr(0, comma));
		if (first_content_line) {
			first_content_line = false;
			if (stamp.empty() || stamp.front() < '0' || stamp.front() > '9') {
				continue; // header
			}
		}
		if (comma == std::string_view::npos) {
			throw CsvError(CsvError::Code::Malformed, "line " + std::to_string(line_no) + ": missing value column");
		}
		ParsedTimestamp ts;
		try {
			ts = parse_iso8601(stamp);
		} catch (const std::invalid_argument &e) {
			throw CsvError(CsvError::Code::Malformed, "line " + std::to_string(line_no) + ": " + e.what());
		}
		if (ts.fraction != 0.0) {
			throw CsvError(CsvError::Code::NonIntegerStep,
			               "line " + std::to_string(line_no) + ": timestamp is not on a whole second");
		}
		if (!rows.empty()) {
			if (ts.epoch == rows.back().epoch) {
				throw CsvError(CsvError::Code::Duplicate,
				               "line " + std::to_string(line_no) + ": duplicate timestamp " + std::string(stamp));
			}
			if (ts.epoch < rows.back().epoch) {
				throw CsvError(CsvError::Code::NonMonotonic,
				               "line " + std::to_string(line_no) + ": timestamp goes backwards " + std::string(stamp));
			}
		}
		rows.push_back(Row{ts.epoch, parse_double(trim(line.substr(comma + 1)))});
	}
	if (rows.empty()) {
		throw CsvError(CsvError::Code::Empty, "no data rows");
	}

	std::int64_t step = 60;
	if (options.step_s) {
		step = *options.step_s;
		if (step <= 0) {
			throw std::invalid_argument("step must be positive");
		}
	} else if (rows.size() > 1) {
		step = 0;
		for (std::size_t i = 1; i < rows.size(); ++i) {
			step = std::gcd(step, rows[i].epoch - rows[i - 1].epoch);
		}
	}

	const Epoch start = rows.front().epoch;
	for (const Row &r : rows) {
		if ((r.epoch - start) % step != 0) {
			throw CsvError(CsvError::Code::OffGrid,
			               format_iso8601(r.epoch) + " is off the " + std::to_string(step) + " s grid");
		}
	}

	const auto n = static_cast<std::size_t>((rows.back().epoch - start) / step) + 1;
	std::vector<double> values(n, 0.0);
	std::vector<bool> valid(n, false);
	ParsedSeries out;
	out.stats.rows = rows.size();
	out.stats.gaps = n - rows.size();
	for (const Row &r : rows) {
		const auto idx = static_cast<std::size_t>((r.epoch - start) / step);
		if (!r.value) {
			++out.stats.unparseable;
		} else if (*r.value < 0.0) {
			++out.stats.negatives;
		} else if (*r.value > options.ceiling_wm2) {
			++out.stats.spikes;
		} else {
			values[idx] = *r.value;
			valid[idx] = true;
		}
	}
	out.series = MinuteSeries(start, step, std::move(values), std::move(valid), options.ceiling_wm2);
	return out;
}

std::string serialize_csv(const RegularSeries &series) {
	std::string out = "timestamp,irradiance_wm2\n";
	out.reserve(out.size() + series.size() * 32);
	char buf[64];
	for (std::size_t i = 0; i < series.size(); ++i) {
		if (!series.is_valid(i)) {
			continue;
		}
		out += format_iso8601(series.epoch_at(i));
		out += ',';
		auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, series.value(i));
		out.append(buf, ptr);
		out += '\n';
	}
	return out;
}

// --- resampling ----------------------------------------------------------

namespace {

void require_minute_grid(const MinuteSeries &ms) {
	if (ms.step() != 60) {
		throw std::invalid_argument("resampling needs a 60 s minute series");
	}
	if (ms.start_epoch() % 60 != 0) {
		throw std::invalid_argument("minute series must start on a whole minute");
	}
}

// First grid epoch (multiple of grid_s) whose trailing window of `lead_s`
// seconds before it starts inside the series.
Epoch first_grid_point(Epoch start, std::int64_t grid_s, std::int64_t lead_s) {
	const Epoch earliest = start + lead_s;
	Epoch t = earliest - ((earliest % grid_s) + grid_s) % grid_s;
	if (t < earliest) {
		t += grid_s;
	}
	return t;
}

} // namespace

HourlySeries hourly_irradiation(const MinuteSeries &ms, int min_valid) {
	return trailing_mean_resample(ms, 60, min_valid);
}

HourlySeries trailing_mean_resample(const MinuteSeries &ms, int step_minutes, std::optional<int> min_valid) {
	require_minute_grid(ms);
	if (step_minutes <= 0) {
		throw std::invalid_argument("step_minutes must be positive");
	}
	const int threshold = min_valid.value_or((step_minutes * kDefaultMinValidPerHour + 59) / 60);
	if (threshold < 1 || threshold > step_minutes) {
		throw std::invalid_argument("min_valid must lie in [1, step_minutes]");
	}
	const std::int64_t grid_s = std::int64_t{step_minutes} * 60;
	if (ms.empty()) {
		throw DataError("series shorter than one aggregation window");
	}
	const Epoch first = first_grid_point(ms.start_epoch(), grid_s, grid_s - 60);
	if (first > ms.last_epoch()) {
		throw DataError("series shorter than one aggregation window");
	}

	std::vector<double> values;
	std::vector<bool> valid;
	for (Epoch t = first; t <= ms.last_epoch(); t += grid_s) {
		const std::size_t end = *ms.index_of(t);
		double sum = 0.0;
		int n = 0;
		for (std::size_t i = end + 1 - static_cast<std::size_t>(step_minutes); i <= end; ++i) {
			if (ms.is_valid(i)) {
				sum += ms.value(i);
				++n;
			}
		}
		const bool ok = n >= threshold;
		values.push_back(ok ? sum / n : 0.0);
		valid.push_back(ok);
	}
	return HourlySeries(first, grid_s, std::move(values), std::move(valid), SeriesKind::Irradiation, grid_s);
}

HourlySeries hourly_instantaneous(const MinuteSeries &ms, int step_minutes) {
	if (step_minutes <= 0) {
		throw std::invalid_argument("step_minutes must be positive");
	}
	require_minute_grid(ms);
	const std::int64_t grid_s = std::int64_t{step_minutes} * 60;
	if (ms.empty()) {
		throw DataError("empty series");
	}
	const Epoch first = first_grid_point(ms.start_epoch(), grid_s, 0);
	std::vector<double> values;
	std::vector<bool> valid;
	for (Epoch t = first; t <= ms.last_epoch(); t += grid_s) {
		const std::size_t i = *ms.index_of(t);
		values.push_back(ms.is_valid(i) ? ms.value(i) : 0.0);
		valid.push_back(ms.is_valid(i));
	}
	if (values.empty()) {
		throw DataError("series holds no grid point");
	}
	return HourlySeries(first, grid_s, std::move(values), std::move(valid), SeriesKind::Irradiance, 0);
}

MinuteSeries running_mean(const MinuteSeries &ms, int window_minutes, int min_valid) {
	require_minute_grid(ms);
	if (window_minutes <= 0 || min_valid < 1 || min_valid > window_minutes) {
		throw std::invalid_argument("bad running-mean window");
	}
	const auto w = static_cast<std::size_t>(window_minutes);
	std::vector<double> values(ms.size(), 0.0);
	std::vector<bool> valid(ms.size(), false);
	// Sums are recomputed per slot rather than updated incrementally so the
	// result is bit-identical to trailing_mean_resample at shared grid points.
	for (std::size_t end = w - 1; end < ms.size(); ++end) {
		double sum = 0.0;
		int n = 0;
		for (std::size_t i = end + 1 - w; i <= end; ++i) {
			if (ms.is_valid(i)) {
				sum += ms.value(i);
				++n;
			}
		}
		if (n >= min_valid) {
			values[end] = sum / n;
			valid[end] = true;
		}
	}
	return MinuteSeries(ms.start_epoch(), ms.step(), std::move(values), std::move(valid));
}

} // namespace solarcast
