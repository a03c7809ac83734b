#ifndef REPLICAFLOW_CLI_HPP
#define REPLICAFLOW_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;

/// Runs one subcommand (build, flow, spectrum, reference, sweep, fit).
/// Machine-readable output goes to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rflow::cli

#endif  // REPLICAFLOW_CLI_HPP
