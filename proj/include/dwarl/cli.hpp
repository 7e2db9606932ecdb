#pragma once

namespace dwarl {

/// Entry point behind the dwarl binary; exposed so tests can drive it
/// in-process. Exit codes: 0 success, 1 usage error, 2 missing file,
/// 3 config contradiction, 4 runtime failure.
int run_cli(int argc, const char* const* argv);

}  // namespace dwarl
