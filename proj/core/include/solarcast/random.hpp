#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace solarcast {

// Deterministic random source shared by the synthetic generator and the MLP
// initializer. The engine is std::mt19937_64, whose output sequence is fixed
// by the C++ standard. The real-valued mappings below are spelled out instead
// of using <random> distributions, which are implementation-defined:
//   uniform01 = (next() >> 11) * 2^-53          in [0, 1)
//   normal    = Box-Muller on two uniform01 draws, cosine branch only
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t next() { return engine_(); }

	double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

	double normal() {
		// 1 - u keeps the log argument in (0, 1].
		const double u1 = 1.0 - uniform01();
		const double u2 = uniform01();
		return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
	}

private:
	std::mt19937_64 engine_;
};

} // namespace solarcast
