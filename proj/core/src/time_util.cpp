#include "solarcast/time_util.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace solarcast {

namespace {

using namespace std::chrono;

int parse_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
	if (pos + len > s.size()) {
		throw std::invalid_argument("truncated timestamp: " + std::string(whole));
	}
	int value = 0;
	const char *first = s.data() + pos;
	auto [ptr, ec] = std::from_chars(first, first + len, value);
	if (ec != std::errc() || ptr != first + len) {
		throw std::invalid_argument("malformed timestamp: " + std::string(whole));
	}
	return value;
}

void expect_char(std::string_view s, std::size_t pos, char c, std::string_view whole) {
	if (pos >= s.size() || s[pos] != c) {
		throw std::invalid_argument("malformed timestamp: " + std::string(whole));
	}
}

} // namespace

Epoch to_epoch(const CivilTime &c) {
	const year_month_day ymd{year{c.year}, month{c.month}, day{c.day}};
	if (!ymd.ok()) {
		throw std::invalid_argument("invalid calendar date");
	}
	const auto days = sys_days{ymd}.time_since_epoch().count();
	return static_cast<Epoch>(days) * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
}

CivilTime to_civil(Epoch t) {
	const auto dp = floor<days>(sys_seconds{seconds{t}});
	const year_month_day ymd{dp};
	const auto rem = t - static_cast<Epoch>(dp.time_since_epoch().count()) * 86400;
	CivilTime c;
	c.year = static_cast<int>(ymd.year());
	c.month = static_cast<unsigned>(ymd.month());
	c.day = static_cast<unsigned>(ymd.day());
	c.hour = static_cast<int>(rem / 3600);
	c.minute = static_cast<int>((rem % 3600) / 60);
	c.second = static_cast<int>(rem % 60);
	return c;
}

int day_of_year(Epoch t) {
	const CivilTime c = to_civil(t);
	return static_cast<int>((t - year_start(c.year)) / 86400) + 1;
}

int days_in_year(int y) {
	return year{y}.is_leap() ? 366 : 365;
}

Epoch year_start(int y) {
	return to_epoch(CivilTime{y, 1, 1, 0, 0, 0});
}

ParsedTimestamp parse_iso8601(std::string_view s) {
	CivilTime c;
	c.year = parse_int(s, 0, 4, s);
	expect_char(s, 4, '-', s);
	c.month = static_cast<unsigned>(parse_int(s, 5, 2, s));
	expect_char(s, 7, '-', s);
	c.day = static_cast<unsigned>(parse_int(s, 8, 2, s));
	if (s.size() <= 10 || (s[10] != 'T' && s[10] != ' ')) {
		throw std::invalid_argument("malformed timestamp: " + std::string(s));
	}
	c.hour = parse_int(s, 11, 2, s);
	expect_char(s, 13, ':', s);
	c.minute = parse_int(s, 14, 2, s);
	expect_char(s, 16, ':', s);
	c.second = parse_int(s, 17, 2, s);
	if (c.hour > 23 || c.minute > 59 || c.second > 59) {
		throw std::invalid_argument("time of day out of range: " + std::string(s));
	}

	ParsedTimestamp out;
	std::size_t pos = 19;
	if (pos < s.size() && s[pos] == '.') {
		const std::size_t begin = pos;
		++pos;
		while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
			++pos;
		}
		if (pos == begin + 1) {
			throw std::invalid_argument("malformed fractional seconds: " + std::string(s));
		}
		std::string frac = "0" + std::string(s.substr(begin, pos - begin));
		out.fraction = std::stod(frac);
	}
	const std::string_view zone = s.substr(pos);
	if (zone != "Z" && zone != "+00:00" && zone != "") {
		throw std::invalid_argument("timestamp is not UTC: " + std::string(s));
	}
	out.epoch = to_epoch(c);
	return out;
}

std::string format_iso8601(Epoch t) {
	const CivilTime c = to_civil(t);
	char buf[32];
	std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", c.year, c.month, c.day, c.hour, c.minute,
	              c.second);
	return buf;
}

} // namespace solarcast
