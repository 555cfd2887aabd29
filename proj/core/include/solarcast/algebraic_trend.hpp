#pragma once

#include "solarcast/series.hpp"

#include <optional>
#include <span>
#include <vector>

namespace solarcast {

/// Local affine model x(tau) = a0 + a1 * tau on a window [0, window_s],
/// tau measured from the window start.
struct TrendEstimate {
	double a0 = 0.0;        ///< model value at the window start
	double a1 = 0.0;        ///< slope, signal units per second
	double window_s = 0.0;
	Epoch anchor_epoch = 0; ///< right edge of the window
	std::size_t samples = 0;

	double trend_at_anchor() const { return a0 + a1 * window_s; }
};

struct WindowSample {
	double tau_s; ///< seconds from window start
	double x;
};

/// Algebraic estimate of (a0, a1) from the two moment integrals
///   I0 = int_0^L x dtau,   I1 = int_0^L tau x dtau
/// of the window, i.e. the time-domain form of multiplying the operational
/// identity s^2 P = a0 s + a1 and its s-derivative by s^-2. The integrals
/// (and the matching moments of 1, tau, tau^2) use sample-cell quadrature:
/// each sample owns the half-way span to its neighbours and the outer samples
/// own a full gap. The estimator is therefore exact on affine signals for any
/// sampling, and on a uniform gap-free grid it coincides with unweighted
/// discrete least squares.
///
/// Throws std::invalid_argument with fewer than 5 samples, a non-increasing
/// tau, tau outside [0, window_s], or window_s <= 0.
TrendEstimate fit_local_linear(std::span<const WindowSample> window, double window_s);

inline constexpr double kTrendWindowS = 600.0;      // 10 min
inline constexpr double kDerivativeWindowS = 4500.0; // 75 min
inline constexpr double kMinWindowValidFraction = 0.9;

/// Fits the trailing window [anchor - window_s, anchor] of `series`.
/// nullopt when the window leaves the series or fewer than
/// `min_valid_fraction` of its grid slots are valid.
std::optional<TrendEstimate> fit_window(const RegularSeries &series, Epoch anchor, double window_s,
                                        double min_valid_fraction = kMinWindowValidFraction);

/// Trend E(X) at the anchor: the fitted model evaluated at the window's right edge.
std::optional<double> trend(const RegularSeries &series, Epoch anchor, double window_s = kTrendWindowS);

/// Slope of the trend, signal units per second.
std::optional<double> trend_derivative(const RegularSeries &series, Epoch anchor,
                                       double window_s = kDerivativeWindowS);

/// X = trend + fluctuation on the grid of `series`. Slots without a usable
/// trailing window (or with an invalid input sample) are invalid in both parts.
struct Decomposition {
	Epoch start_epoch = 0;
	std::int64_t step = 60;
	std::vector<double> trend;
	std::vector<double> fluctuation;
	std::vector<bool> valid;
};

Decomposition decompose(const RegularSeries &series, double window_s = kTrendWindowS);

} // namespace solarcast
