#include "solarcast/algebraic_trend.hpp"
#include "solarcast/clearsky.hpp"
#include "solarcast/forecasters.hpp"
#include "solarcast/mlp.hpp"
#include "solarcast/random.hpp"
#include "solarcast/synthetic.hpp"
#include "solarcast/time_util.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace solarcast;

namespace {

const MinuteSeries &broken_day() {
	static const MinuteSeries s =
	    gen_days(SiteConfig{}, SolisParams{}, cloud_preset(CloudRegime::Broken, 1), year_start(2013) + 172 * 86400, 1);
	return s;
}

void BM_fit_local_linear(benchmark::State &state) {
	const auto n = static_cast<int>(state.range(0));
	Rng rng(1);
	std::vector<WindowSample> w;
	for (int i = 0; i <= n; ++i) {
		w.push_back({60.0 * i, 400.0 + 0.1 * 60.0 * i + 30.0 * rng.normal()});
	}
	for (auto _ : state) {
		benchmark::DoNotOptimize(fit_local_linear(w, 60.0 * n));
	}
}
BENCHMARK(BM_fit_local_linear)->Arg(10)->Arg(75);

void BM_wm_forecast(benchmark::State &state) {
	const auto &s = broken_day();
	const Epoch t = s.start_epoch() + 12 * 3600;
	for (auto _ : state) {
		benchmark::DoNotOptimize(wm_forecast(s, t, state.range(0)));
	}
}
BENCHMARK(BM_wm_forecast)->Arg(900)->Arg(3600);

void BM_solis_irradiance(benchmark::State &state) {
	const SiteConfig site;
	const SolisParams params;
	Epoch t = year_start(2013) + 172 * 86400 + 10 * 3600;
	for (auto _ : state) {
		benchmark::DoNotOptimize(solis_irradiance(site, params, t));
		t += 60;
	}
}
BENCHMARK(BM_solis_irradiance);

void BM_mlp_epoch(benchmark::State &state) {
	Rng rng(2);
	Dataset d;
	d.n_lags = 8;
	std::vector<double> lags(8);
	for (int i = 0; i < state.range(0); ++i) {
		for (auto &x : lags) {
			x = rng.uniform(0, 1000);
		}
		d.push(lags, 0.5 * lags[0]);
	}
	TrainSpec spec;
	spec.max_epochs = 1;
	spec.input_scale = 1000.0;
	spec.output_scale = 1000.0;
	for (auto _ : state) {
		benchmark::DoNotOptimize(train(d, spec));
	}
	state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mlp_epoch)->Arg(4000);

} // namespace
BENCHMARK_MAIN();
