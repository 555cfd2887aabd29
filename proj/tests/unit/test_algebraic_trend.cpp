#include "oracles.hpp"

#include "solarcast/algebraic_trend.hpp"
#include "solarcast/random.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace solarcast;

namespace {

std::vector<WindowSample> sampled(double L, double h, double (*f)(double)) {
	std::vector<WindowSample> w;
	const auto n = static_cast<int>(std::lround(L / h));
	for (int i = 0; i <= n; ++i) {
		const double tau = L * i / n;
		w.push_back({tau, f(tau)});
	}
	return w;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

MinuteSeries minute_series(const std::vector<double> &v, Epoch start = 1'356'998'400) {
	return MinuteSeries(start, 60, v, std::vector<bool>(v.size(), true), 1e9);
}

} // namespace

TEST_CASE("constant window gives the constant") {
	const auto w = sampled(600, 60, [](double) { return 7.25; });
	const auto e = fit_local_linear(w, 600);
	CHECK(e.a0 == doctest::Approx(7.25).epsilon(1e-14));
	CHECK(std::abs(e.a1) < 1e-15);
	CHECK(e.samples == 11);
	CHECK(e.trend_at_anchor() == doctest::Approx(7.25).epsilon(1e-14));
}

TEST_CASE("affine window is recovered exactly") {
	const auto w = sampled(600, 60, [](double t) { return 2.0 + 3.0 * t; });
	const auto e = fit_local_linear(w, 600);
	CHECK(rel_close(e.a0, 2.0, 1e-9));
	CHECK(rel_close(e.a1, 3.0, 1e-9));

	std::vector<double> t, x;
	for (const auto &s : w) {
		t.push_back(s.tau_s);
		x.push_back(s.x);
	}
	const auto [b0, b1] = oracle::least_squares_line(t, x);
	CHECK(rel_close(e.a0, b0, 1e-6));
	CHECK(rel_close(e.a1, b1, 1e-6));
}

TEST_CASE("tau squared projects onto the continuous affine fit") {
	// Fine sampling approaches the continuous projection a0 = -1/6, a1 = 1.
	const auto w = sampled(1.0, 1e-3, [](double t) { return t * t; });
	const auto e = fit_local_linear(w, 1.0);
	CHECK(std::abs(e.a0 - (-1.0 / 6.0)) < 1e-3);
	CHECK(std::abs(e.a1 - 1.0) < 1e-9);
}

TEST_CASE("fit_local_linear rejects bad windows") {
	const auto w = sampled(600, 60, [](double t) { return t; });
	CHECK_THROWS_AS(fit_local_linear(std::span(w).first(4), 600), std::invalid_argument);
	auto bad = w;
	std::swap(bad[2], bad[3]);
	CHECK_THROWS_AS(fit_local_linear(bad, 600), std::invalid_argument);
	auto dup = w;
	dup[3].tau_s = dup[2].tau_s;
	CHECK_THROWS_AS(fit_local_linear(dup, 600), std::invalid_argument);
	CHECK_THROWS_AS(fit_local_linear(w, 500), std::invalid_argument);
	CHECK_THROWS_AS(fit_local_linear(w, 0), std::invalid_argument);
}

TEST_CASE("estimates are linear and shift covariant") {
	Rng rng(3);
	std::vector<WindowSample> x, y, z, c;
	for (int i = 0; i <= 45; ++i) {
		const double tau = 60.0 * i;
		const double xv = rng.uniform(-50, 50);
		const double yv = rng.uniform(-50, 50);
		x.push_back({tau, xv});
		y.push_back({tau, yv});
		z.push_back({tau, 2.5 * xv - 0.5 * yv});
		c.push_back({tau, xv + 100.0});
	}
	const auto ex = fit_local_linear(x, 2700);
	const auto ey = fit_local_linear(y, 2700);
	const auto ez = fit_local_linear(z, 2700);
	const auto ec = fit_local_linear(c, 2700);
	CHECK(ez.a0 == doctest::Approx(2.5 * ex.a0 - 0.5 * ey.a0).epsilon(1e-12));
	CHECK(ez.a1 == doctest::Approx(2.5 * ex.a1 - 0.5 * ey.a1).epsilon(1e-12));
	CHECK(ec.a0 == doctest::Approx(ex.a0 + 100.0).epsilon(1e-12));
	CHECK(ec.a1 == doctest::Approx(ex.a1).epsilon(1e-9));
}

TEST_CASE("matches discrete least squares on random noisy windows") {
	Rng rng(2024);
	for (int trial = 0; trial < 200; ++trial) {
		const int minutes = 10 + static_cast<int>(rng.uniform01() * 66);
		const double a = rng.uniform(-500, 500);
		const double b = rng.uniform(-1, 1);
		std::vector<WindowSample> w;
		std::vector<double> t, x;
		for (int i = 0; i <= minutes; ++i) {
			const double tau = 60.0 * i;
			const double v = a + b * tau + 30.0 * rng.normal();
			w.push_back({tau, v});
			t.push_back(tau);
			x.push_back(v);
		}
		const auto e = fit_local_linear(w, 60.0 * minutes);
		const auto [b0, b1] = oracle::least_squares_line(t, x);
		CHECK(rel_close(e.a0, b0, 1e-6));
		CHECK(std::abs(e.a1 - b1) <= 1e-6 * std::max(std::abs(b1), 1e-3));
	}
}

TEST_CASE("trend and trend_derivative on series") {
	std::vector<double> v(200);
	for (std::size_t i = 0; i < v.size(); ++i) {
		v[i] = 100.0 + 0.5 * 60.0 * static_cast<double>(i);
	}
	const auto s = minute_series(v);
	const Epoch anchor = s.epoch_at(150);
	CHECK(rel_close(*trend(s, anchor), v[150], 1e-9));
	CHECK(rel_close(*trend_derivative(s, anchor), 0.5, 1e-9));

	const auto flat = minute_series(std::vector<double>(200, 42.0));
	CHECK(*trend(flat, anchor) == doctest::Approx(42.0).epsilon(1e-14));
	CHECK(std::abs(*trend_derivative(flat, anchor)) < 1e-14);

	SUBCASE("window leaving the series") {
		CHECK_FALSE(trend_derivative(s, s.epoch_at(50)).has_value());
		CHECK_FALSE(trend(s, s.epoch_at(5)).has_value());
	}
	SUBCASE("too many invalid samples") {
		std::vector<bool> valid(v.size(), true);
		valid[148] = false;
		valid[147] = false;
		const MinuteSeries holes(s.start_epoch(), 60, v, valid, 1e9);
		CHECK_FALSE(trend(holes, anchor).has_value());
		// A single missing minute in 75 is tolerated, and the fit stays exact.
		std::vector<bool> one(v.size(), true);
		one[120] = false;
		const MinuteSeries gap(s.start_epoch(), 60, v, one, 1e9);
		REQUIRE(trend_derivative(gap, anchor).has_value());
		CHECK(rel_close(*trend_derivative(gap, anchor), 0.5, 1e-9));
	}
}

TEST_CASE("trend under noise stays within three endpoint standard deviations") {
	// On 11 equally spaced samples the right-edge value of a least-squares
	// line has variance sigma^2 (1/11 + 25/110).
	const double sigma = 50.0;
	const double sd = sigma * std::sqrt(1.0 / 11.0 + 25.0 / 110.0);
	int inside = 0;
	for (int seed = 0; seed < 1000; ++seed) {
		Rng rng(static_cast<std::uint64_t>(seed));
		std::vector<double> v(11);
		for (auto &x : v) {
			x = 300.0 + sigma * rng.normal();
		}
		const auto s = minute_series(v);
		const double est = *trend(s, s.last_epoch());
		if (std::abs(est - 300.0) <= 3.0 * sd) {
			++inside;
		}
	}
	CHECK(inside >= 990);
}

TEST_CASE("slope noise shrinks with the window length") {
	const double windows[] = {900.0, 2700.0, 4500.0};
	double prev = INFINITY;
	for (double L : windows) {
		double sum = 0.0, sum2 = 0.0;
		for (int seed = 0; seed < 500; ++seed) {
			Rng rng(static_cast<std::uint64_t>(seed) + 77);
			std::vector<double> v(76);
			for (auto &x : v) {
				x = 200.0 + 20.0 * rng.normal();
			}
			const auto s = minute_series(v);
			const double a1 = *trend_derivative(s, s.last_epoch(), L);
			sum += a1;
			sum2 += a1 * a1;
		}
		const double sd = std::sqrt(sum2 / 500.0 - (sum / 500.0) * (sum / 500.0));
		CHECK(sd < prev);
		prev = sd;
	}
}

TEST_CASE("decompose reconstructs its input") {
	Rng rng(8);
	std::vector<double> affine(240), noisy(240);
	for (std::size_t i = 0; i < affine.size(); ++i) {
		affine[i] = 50.0 + 2.0 * static_cast<double>(i);
		noisy[i] = affine[i] + 10.0 * rng.normal() + 100.0;
	}
	const auto d = decompose(minute_series(affine));
	std::size_t valid = 0;
	for (std::size_t i = 0; i < affine.size(); ++i) {
		if (d.valid[i]) {
			++valid;
			CHECK(std::abs(d.fluctuation[i]) <= 1e-9 * 500.0);
			CHECK(d.trend[i] + d.fluctuation[i] == affine[i]);
		}
	}
	CHECK(valid == affine.size() - 10);
	CHECK_FALSE(d.valid[9]);
	CHECK(d.valid[10]);

	const auto dn = decompose(minute_series(noisy));
	double mean = 0.0;
	std::size_t n = 0;
	for (std::size_t i = 0; i < noisy.size(); ++i) {
		if (dn.valid[i]) {
			CHECK(dn.trend[i] + dn.fluctuation[i] == noisy[i]);
			mean += dn.fluctuation[i];
			++n;
		}
	}
	mean /= static_cast<double>(n);
	CHECK(std::abs(mean) <= 3.0 * 10.0 / std::sqrt(static_cast<double>(n)));
}
