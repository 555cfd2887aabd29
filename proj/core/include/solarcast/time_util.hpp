#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace solarcast {

using Epoch = std::int64_t; ///< seconds since 1970-01-01T00:00:00Z

struct CivilTime {
	int year = 1970;
	unsigned month = 1;
	unsigned day = 1;
	int hour = 0;
	int minute = 0;
	int second = 0;
};

Epoch to_epoch(const CivilTime &c);
CivilTime to_civil(Epoch t);

/// Day of year, 1-based.
int day_of_year(Epoch t);
int days_in_year(int year);
Epoch year_start(int year);

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff]Z` (also accepts a space separator or a
/// `+00:00` suffix). Fractional seconds are returned separately so that the
/// caller can reject off-grid stamps. Throws std::invalid_argument.
struct ParsedTimestamp {
	Epoch epoch = 0;
	double fraction = 0.0;
};
ParsedTimestamp parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Epoch t);

} // namespace solarcast
