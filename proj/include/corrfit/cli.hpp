#pragma once

namespace corrfit {

// Entry point behind the corrfit executable. Returns the process exit code:
// 0 success, 1 validation/usage error, 2 convergence failure.
int cli_main(int argc, const char* const* argv);

}  // namespace corrfit
