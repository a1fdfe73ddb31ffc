#ifndef ADVSTREAM_CLI_APP_HPP
#define ADVSTREAM_CLI_APP_HPP

#include <string>
#include <vector>

namespace advstream::cli {

/// Runs the experiment CLI. Exit codes: 0 success, 1 configuration error,
/// 2 invariant violation detected mid-run.
int run(const std::vector<std::string>& args);

}  // namespace advstream::cli

#endif
