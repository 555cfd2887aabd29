#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace solarcast::cli {

/// Process exit codes: nothing else is ever returned.
enum ExitCode : int {
	kOk = 0,
	kUsage = 2, ///< bad flags, bad config, unparseable ingest input
	kData = 3,  ///< data insufficient for the requested run
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace solarcast::cli
