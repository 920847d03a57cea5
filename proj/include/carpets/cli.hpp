#pragma once

namespace carpets {

/// Entry point behind the `carpet` binary. Exit codes: 0 on success, 2 for
/// rejected input or usage errors, 3 when an enumeration budget is exceeded.
int run_cli(int argc, const char* const* argv);

}  // namespace carpets
