#pragma once

namespace ftl {

/// Full command-line entry point (argument parsing, dispatch, exit codes).
/// Exposed as a library call so tests can drive the real command paths
/// in-process.
///
/// Exit codes: 0 success; 1 unexpected failure; 2 config/parse/missing input;
/// 3 ordering violation; 4 tolerance not met; 5 bound or identity-gap
/// violation.
int run_cli(int argc, const char* const* argv);

} // namespace ftl
