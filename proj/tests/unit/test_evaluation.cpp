#include "solarcast/evaluation.hpp"
#include "solarcast/random.hpp"

#include <nlohmann/json.hpp>

#include <doctest.h>

#include <cmath>

using namespace solarcast;

namespace {

std::vector<ForecastRecord> records(Method m, const std::vector<double> &pred, const std::vector<double> &obs) {
	std::vector<ForecastRecord> out;
	for (std::size_t i = 0; i < pred.size(); ++i) {
		ForecastRecord r;
		r.issue_epoch = static_cast<Epoch>(i) * 3600;
		r.horizon_s = 3600;
		r.method = m;
		r.predicted = pred[i];
		r.observed = obs[i];
		r.valid = true;
		out.push_back(r);
	}
	return out;
}

MethodScore score(Method m, double v) {
	MethodScore s;
	s.method = m;
	s.nl1 = v;
	s.nl2 = v;
	return s;
}

} // namespace

TEST_CASE("normalized L1") {
	CHECK(*normalized_l1(records(Method::P, {1, 2, 3}, {1, 2, 3})) == 0.0);
	CHECK(*normalized_l1(records(Method::P, {0, 0, 0}, {4, 5, 6})) == 1.0);
	CHECK(*normalized_l1(records(Method::P, {1, 2}, {1, 1})) == 0.5);
	CHECK_FALSE(normalized_l1(records(Method::P, {1, 2}, {0, 0})).has_value());
	CHECK_FALSE(normalized_l1(std::vector<ForecastRecord>{}).has_value());
}

TEST_CASE("normalized L2") {
	CHECK(*normalized_l2(records(Method::P, {1, 2, 3}, {1, 2, 3})) == 0.0);
	CHECK(*normalized_l2(records(Method::P, {0, 0}, {3, 4})) == 1.0);
	CHECK(*normalized_l2(records(Method::P, {3, 0}, {0, 4})) == 1.25);
	CHECK_FALSE(normalized_l2(records(Method::P, {1}, {0})).has_value());
}

TEST_CASE("invalid and fallback records") {
	auto rs = records(Method::SP, {1, 100, 2}, {1, 1, 4});
	rs[1].valid = false;
	CHECK(*normalized_l1(rs) == doctest::Approx(2.0 / 5.0));
	rs[1].valid = true;
	rs[1].fallback = true;
	CHECK(*normalized_l1(rs, true) == doctest::Approx(2.0 / 5.0));
	CHECK(*normalized_l1(rs, false) == doctest::Approx(101.0 / 6.0));
	const auto report = evaluate(rs, true);
	REQUIRE(report.entries.size() == 1);
	CHECK(report.entries[0].n_valid == 2);
	CHECK(report.entries[0].n_fallback == 1);
	CHECK(report.entries[0].n_records == 3);
	CHECK(report.fallback_excluded);
}

TEST_CASE("metric axioms on random record sets") {
	Rng rng(1234);
	for (int set = 0; set < 2000; ++set) {
		const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 20);
		std::vector<double> pred(n), obs(n);
		for (std::size_t i = 0; i < n; ++i) {
			obs[i] = rng.uniform(0.0, 1000.0);
			pred[i] = rng.uniform(0.0, 1000.0);
		}
		const auto rs = records(Method::P, pred, obs);
		const double l1 = *normalized_l1(rs);
		const double l2 = *normalized_l2(rs);
		CHECK(l1 >= 0.0);
		CHECK(l2 >= 0.0);
		CHECK(*normalized_l1(records(Method::P, obs, obs)) == 0.0);

		const double alpha = rng.uniform(0.01, 100.0);
		auto scaled = rs;
		for (auto &r : scaled) {
			r.predicted *= alpha;
			r.observed *= alpha;
		}
		CHECK(*normalized_l1(scaled) == doctest::Approx(l1).epsilon(1e-12));
		CHECK(*normalized_l2(scaled) == doctest::Approx(l2).epsilon(1e-12));

		auto worse = rs;
		const auto k = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
		const double away = worse[k].predicted >= worse[k].observed ? 1.0 : -1.0;
		worse[k].predicted += away * rng.uniform(0.0, 200.0);
		CHECK(*normalized_l1(worse) >= l1);
		CHECK(*normalized_l2(worse) >= l2);
	}
}

TEST_CASE("evaluate groups by method and learning size") {
	auto rs = records(Method::WM, {1, 2}, {1, 1});
	auto mlp1 = records(Method::MLP, {1, 1}, {1, 1});
	auto mlp2 = records(Method::MLP, {0, 0}, {1, 1});
	for (auto &r : mlp1) {
		r.learning_years = 1;
	}
	for (auto &r : mlp2) {
		r.learning_years = 2;
	}
	auto p = records(Method::P, {2, 2}, {1, 1});
	rs.insert(rs.end(), mlp2.begin(), mlp2.end());
	rs.insert(rs.end(), p.begin(), p.end());
	rs.insert(rs.end(), mlp1.begin(), mlp1.end());
	const auto report = evaluate(rs);
	REQUIRE(report.entries.size() == 4);
	CHECK(report.entries[0].label() == "P");
	CHECK(report.entries[1].label() == "WM");
	CHECK(report.entries[2].label() == "MLP_1y");
	CHECK(report.entries[3].label() == "MLP_2y");
	CHECK(*report.entries[3].nl1 == 1.0);
	CHECK(report.horizon_s == 3600);
}

TEST_CASE("ranking") {
	SUBCASE("irradiation row ranks SP first") {
		EvalReport r;
		r.entries = {score(Method::P, 0.3373), score(Method::SP, 0.1962), score(Method::WM, 0.2393),
		             score(Method::MLP, 0.2445), score(Method::CSI_MLP, 0.2236)};
		const auto ranked = rank_methods(r, Metric::NL1);
		CHECK(ranked.front().method == Method::SP);
		CHECK(ranked.back().method == Method::P);
	}
	SUBCASE("irradiance row ranks WM first") {
		EvalReport r;
		r.entries = {score(Method::P, 1.0177), score(Method::SP, 0.8943), score(Method::WM, 0.5126)};
		CHECK(rank_methods(r, Metric::NL2).front().method == Method::WM);
	}
	SUBCASE("ties follow enum order and undefined scores sink") {
		EvalReport r;
		MethodScore undefined;
		undefined.method = Method::P;
		r.entries = {score(Method::WM, 0.5), undefined, score(Method::SP, 0.5)};
		const auto ranked = rank_methods(r, Metric::NL2);
		CHECK(ranked[0].method == Method::SP);
		CHECK(ranked[1].method == Method::WM);
		CHECK(ranked[2].method == Method::P);
	}
	SUBCASE("rescaling keeps the order") {
		Rng rng(6);
		EvalReport r;
		for (Method m : kAllMethods) {
			r.entries.push_back(score(m, rng.uniform(0.1, 1.0)));
		}
		EvalReport s = r;
		for (auto &e : s.entries) {
			e.nl2 = *e.nl2 * 3.7;
		}
		const auto a = rank_methods(r, Metric::NL2);
		const auto b = rank_methods(s, Metric::NL2);
		for (std::size_t i = 0; i < a.size(); ++i) {
			CHECK(a[i].method == b[i].method);
		}
	}
	EvalReport single;
	single.entries = {score(Method::P, 0.1)};
	CHECK_THROWS_AS(rank_methods(single, Metric::NL1), std::invalid_argument);
}

TEST_CASE("relative improvement") {
	CHECK(relative_improvement(0.5399, 0.5624) == doctest::Approx(4.0007).epsilon(1e-4));
	CHECK(relative_improvement(0.3, 0.3) == 0.0);
	CHECK(relative_improvement(0.0, 1.0) == 100.0);
	CHECK_THROWS_AS(relative_improvement(0.1, 0.0), std::invalid_argument);
	CHECK_THROWS_AS(relative_improvement(0.1, -1.0), std::invalid_argument);
}

TEST_CASE("report formats") {
	auto rs = records(Method::P, {3, 0}, {0, 4});
	const auto sp = records(Method::SP, {0, 4}, {0, 4});
	rs.insert(rs.end(), sp.begin(), sp.end());
	auto report = evaluate(rs);
	report.step_s = 3600;
	report.target = SeriesKind::Irradiance;
	report.test_begin = 0;
	report.test_end = 86400;

	const auto table = format_table(report);
	CHECK(table.find("target=irradiance horizon=60 min step=60 min") != std::string::npos);
	CHECK(table.find("1.2500") != std::string::npos);
	CHECK(table.find("0.0000") != std::string::npos);

	const auto csv = report_to_csv(report);
	CHECK(csv.rfind("method,nl1,nl2,n_valid,n_fallback,n_records\n", 0) == 0);
	CHECK(csv.find("P,1.75,1.25,2,0,2\n") != std::string::npos);

	const auto j = nlohmann::json::parse(report_to_json(report));
	CHECK(j["horizon_s"] == 3600);
	CHECK(j["methods"].size() == 2);
	CHECK(j["methods"][0]["method"] == "P");
	CHECK(j["methods"][0]["nl2"].get<double>() == 1.25);
	CHECK(j["methods"][1]["nl1"].get<double>() == 0.0);
}
