#pragma once

#include <stdexcept>
#include <string>

namespace solarcast {

/// Input data cannot support the requested computation (too short, too many
/// gaps, empty test span). Distinct from std::invalid_argument, which flags a
/// caller or configuration mistake.
class DataError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

} // namespace solarcast
