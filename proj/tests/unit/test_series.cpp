#include "solarcast/errors.hpp"
#include "solarcast/random.hpp"
#include "solarcast/series.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace solarcast;

namespace {

Epoch at(const char *iso) { return parse_iso8601(iso).epoch; }

MinuteSeries minutes_from(Epoch start, const std::vector<double> &v) {
	return MinuteSeries(start, 60, v, std::vector<bool>(v.size(), true));
}

} // namespace

TEST_CASE("time helpers round-trip civil dates") {
	const Epoch t = at("2013-02-13T08:01:00Z");
	CHECK(t == 1360742460);
	CHECK(format_iso8601(t) == "2013-02-13T08:01:00Z");
	CHECK(day_of_year(at("2012-12-31T12:00:00Z")) == 366);
	CHECK(days_in_year(2013) == 365);
	CHECK(year_start(2014) == at("2014-01-01T00:00:00Z"));
	CHECK(parse_iso8601("2013-02-13 08:01:00").epoch == t);
	CHECK(parse_iso8601("2013-02-13T08:01:00+00:00").epoch == t);
	CHECK(parse_iso8601("2013-02-13T08:01:00.250Z").fraction == doctest::Approx(0.25));
	CHECK_THROWS_AS(parse_iso8601("2013-02-30T08:01:00Z"), std::invalid_argument);
	CHECK_THROWS_AS(parse_iso8601("yesterday"), std::invalid_argument);
}

TEST_CASE("RegularSeries rejects broken invariants") {
	CHECK_THROWS_AS(RegularSeries(0, 0, {1.0}, {true}), std::invalid_argument);
	CHECK_THROWS_AS(RegularSeries(0, 60, {1.0, 2.0}, {true}), std::invalid_argument);
	CHECK_THROWS_AS(RegularSeries(0, 60, {-1.0}, {true}), std::invalid_argument);
	CHECK_THROWS_AS(RegularSeries(0, 60, {1600.0}, {true}), std::invalid_argument);
	CHECK_NOTHROW(RegularSeries(0, 60, {1600.0}, {false}));
	CHECK_NOTHROW(RegularSeries(0, 60, {1600.0}, {true}, 2000.0));

	const RegularSeries s(120, 60, {1.0, 2.0, 3.0}, {true, false, true});
	CHECK(s.index_of(180) == 1u);
	CHECK_FALSE(s.index_of(150).has_value());
	CHECK_FALSE(s.index_of(60).has_value());
	CHECK_FALSE(s.at(180).has_value());
	CHECK(s.at(240) == 3.0);
	CHECK(s.valid_count() == 2);
	CHECK(s.last_epoch() == 240);
}

TEST_CASE("parse_csv reads two consecutive rows") {
	const auto p = parse_csv("2013-02-13T08:00:00Z,100\n2013-02-13T08:01:00Z,110\n");
	CHECK(p.series.start_epoch() == at("2013-02-13T08:00:00Z"));
	CHECK(p.series.step() == 60);
	REQUIRE(p.series.size() == 2);
	CHECK(p.series.value(0) == 100.0);
	CHECK(p.series.value(1) == 110.0);
	CHECK(p.series.valid_count() == 2);
	CHECK(p.stats.warnings() == 0);
}

TEST_CASE("parse_csv leaves a missing minute as an invalid slot") {
	const auto p = parse_csv("timestamp,irradiance_wm2\r\n2013-02-13T08:00:00Z,100\r\n2013-02-13T08:02:00Z,120\r\n");
	REQUIRE(p.series.size() == 3);
	CHECK(p.series.is_valid(0));
	CHECK_FALSE(p.series.is_valid(1));
	CHECK(p.series.is_valid(2));
	CHECK(p.stats.gaps == 1);
}

TEST_CASE("parse_csv flags bad values without failing") {
	const auto p = parse_csv("2013-02-13T08:00:00Z,100\n2013-02-13T08:01:00Z,-5\n2013-02-13T08:02:00Z,abc\n"
	                         "2013-02-13T08:03:00Z,1700\n2013-02-13T08:04:00Z,50\n");
	REQUIRE(p.series.size() == 5);
	CHECK_FALSE(p.series.is_valid(1));
	CHECK_FALSE(p.series.is_valid(2));
	CHECK_FALSE(p.series.is_valid(3));
	CHECK(p.stats.negatives == 1);
	CHECK(p.stats.unparseable == 1);
	CHECK(p.stats.spikes == 1);
	CHECK(p.stats.warnings() == 3);
}

TEST_CASE("parse_csv reports each structural failure distinctly") {
	auto code_of = [](const std::string &text, ParseOptions opts = {}) {
		try {
			(void)parse_csv(text, opts);
		} catch (const CsvError &e) {
			return e.code();
		}
		FAIL("no CsvError");
		return CsvError::Code::Empty;
	};
	CHECK(code_of("") == CsvError::Code::Empty);
	CHECK(code_of("timestamp,irradiance_wm2\n") == CsvError::Code::Empty);
	CHECK(code_of("2013-02-13T08:01:00Z,1\n2013-02-13T08:00:00Z,2\n") == CsvError::Code::NonMonotonic);
	CHECK(code_of("2013-02-13T08:01:00Z,1\n2013-02-13T08:01:00Z,2\n") == CsvError::Code::Duplicate);
	CHECK(code_of("2013-02-13T08:01:00.5Z,1\n") == CsvError::Code::NonIntegerStep);
	CHECK(code_of("2013-02-13T08:00:00Z,1\n2013-02-13T08:01:30Z,2\n") == CsvError::Code::OffGrid);
	CHECK(code_of("2013-02-13T08:00:00Z,1\nnot a timestamp,1\n") == CsvError::Code::Malformed);
	CHECK(code_of("2013-02-13T08:00:00Z;1\n2013-02-13T08:01:00Z;2\n") == CsvError::Code::Malformed);
}

TEST_CASE("parse_csv can infer a coarser step") {
	ParseOptions opts;
	opts.step_s = std::nullopt;
	const auto p = parse_csv("2013-02-13T08:00:00Z,1\n2013-02-13T08:05:00Z,2\n2013-02-13T08:15:00Z,3\n", opts);
	CHECK(p.series.step() == 300);
	CHECK(p.series.size() == 4);
	CHECK_FALSE(p.series.is_valid(2));
}

TEST_CASE("serialize_csv round-trips bit-exactly") {
	Rng rng(99);
	std::vector<double> v(500);
	for (auto &x : v) {
		x = rng.uniform(0.0, 1400.0);
	}
	v[3] = 0.0;
	v[4] = 1e-300;
	const auto ms = minutes_from(at("2013-06-01T00:00:00Z"), v);
	const auto back = parse_csv(serialize_csv(ms)).series;
	REQUIRE(back.size() == ms.size());
	CHECK(back.start_epoch() == ms.start_epoch());
	for (std::size_t i = 0; i < v.size(); ++i) {
		CHECK(back.value(i) == v[i]);
	}
}

TEST_CASE("hourly_irradiation averages the trailing hour") {
	const Epoch t0 = at("2013-02-13T00:01:00Z");
	SUBCASE("constant") {
		const auto h = hourly_irradiation(minutes_from(t0, std::vector<double>(120, 100.0)));
		REQUIRE(h.size() == 2);
		CHECK(h.kind() == SeriesKind::Irradiation);
		CHECK(h.step() == 3600);
		CHECK(h.start_epoch() == at("2013-02-13T01:00:00Z"));
		CHECK(h.value(0) == 100.0);
		CHECK(h.value(1) == 100.0);
	}
	SUBCASE("ramp 0..59") {
		std::vector<double> v(60);
		for (int i = 0; i < 60; ++i) {
			v[i] = i;
		}
		const auto h = hourly_irradiation(minutes_from(t0, v));
		REQUIRE(h.size() == 1);
		CHECK(h.value(0) == doctest::Approx(29.5).epsilon(1e-15));
	}
	SUBCASE("too few valid minutes") {
		std::vector<bool> valid(60, true);
		for (int i = 0; i < 30; ++i) {
			valid[2 * i] = false;
		}
		const auto h = hourly_irradiation(MinuteSeries(t0, 60, std::vector<double>(60, 10.0), valid));
		REQUIRE(h.size() == 1);
		CHECK_FALSE(h.is_valid(0));
	}
	SUBCASE("mean over valid minutes only") {
		std::vector<double> v(60, 10.0);
		std::vector<bool> valid(60, true);
		v[7] = 0.0;
		valid[7] = false;
		v[8] = 70.0;
		const auto h = hourly_irradiation(MinuteSeries(t0, 60, v, valid));
		CHECK(h.value(0) == doctest::Approx((58 * 10.0 + 70.0) / 59.0));
	}
	SUBCASE("shorter than an hour") {
		CHECK_THROWS_AS(hourly_irradiation(minutes_from(t0, std::vector<double>(59, 1.0))), DataError);
	}
}

TEST_CASE("hourly_irradiation is linear and matches its source") {
	Rng rng(5);
	const Epoch t0 = at("2013-02-13T00:00:00Z");
	std::vector<double> x(600), y(600), z(600);
	for (std::size_t i = 0; i < x.size(); ++i) {
		x[i] = rng.uniform(0, 500);
		y[i] = rng.uniform(0, 500);
		z[i] = 0.75 * x[i] + 1.25 * y[i];
	}
	const auto hx = hourly_irradiation(minutes_from(t0, x));
	const auto hy = hourly_irradiation(minutes_from(t0, y));
	const auto mz = minutes_from(t0, z);
	const auto hz = hourly_irradiation(mz);
	REQUIRE(hz.size() == hx.size());
	for (std::size_t i = 0; i < hz.size(); ++i) {
		CHECK(hz.value(i) == doctest::Approx(0.75 * hx.value(i) + 1.25 * hy.value(i)).epsilon(1e-12));
	}
	CHECK(hz.matches_source(mz));
	const auto tweaked = HourlySeries(hz.start_epoch(), hz.step(), std::vector<double>(hz.size(), 1.0), hz.valid(),
	                                  SeriesKind::Irradiation, 3600);
	CHECK_FALSE(tweaked.matches_source(mz));
}

TEST_CASE("hourly_instantaneous selects grid samples") {
	const Epoch t0 = at("2013-02-13T00:00:00Z");
	std::vector<double> v(180);
	for (std::size_t i = 0; i < v.size(); ++i) {
		v[i] = static_cast<double>(i);
	}
	auto ms = minutes_from(t0, v);
	SUBCASE("hourly") {
		const auto h = hourly_instantaneous(ms, 60);
		REQUIRE(h.size() == 3);
		CHECK(h.kind() == SeriesKind::Irradiance);
		for (std::size_t k = 0; k < 3; ++k) {
			CHECK(h.epoch_at(k) % 3600 == 0);
			CHECK(h.value(k) == v[*ms.index_of(h.epoch_at(k))]);
		}
	}
	SUBCASE("five minutes") {
		const auto h = hourly_instantaneous(ms, 5);
		CHECK(h.size() == 36);
		CHECK(h.step() == 300);
		CHECK(h.value(1) == 5.0);
	}
	SUBCASE("invalid source sample") {
		std::vector<bool> valid(v.size(), true);
		valid[60] = false;
		const auto h = hourly_instantaneous(MinuteSeries(t0, 60, v, valid), 60);
		CHECK(h.is_valid(0));
		CHECK_FALSE(h.is_valid(1));
	}
	CHECK_THROWS_AS(hourly_instantaneous(ms, 0), std::invalid_argument);
	CHECK_THROWS_AS(hourly_instantaneous(ms, -5), std::invalid_argument);
}

TEST_CASE("running_mean agrees with trailing resampling") {
	Rng rng(11);
	std::vector<double> v(300);
	std::vector<bool> valid(v.size(), true);
	for (std::size_t i = 0; i < v.size(); ++i) {
		v[i] = rng.uniform(0, 900);
		if (rng.uniform01() < 0.05) {
			valid[i] = false;
			v[i] = 0.0;
		}
	}
	const MinuteSeries ms(at("2013-02-13T00:01:00Z"), 60, v, valid);
	const auto run = running_mean(ms, 60, 55);
	const auto hourly = hourly_irradiation(ms);
	for (std::size_t k = 0; k < hourly.size(); ++k) {
		const auto i = run.index_of(hourly.epoch_at(k));
		REQUIRE(i.has_value());
		CHECK(run.is_valid(*i) == hourly.is_valid(k));
		if (hourly.is_valid(k)) {
			CHECK(run.value(*i) == hourly.value(k));
		}
	}
	for (std::size_t i = 0; i < 59; ++i) {
		CHECK_FALSE(run.is_valid(i));
	}
}
