#pragma once

namespace sz::cli {

// Exit codes: 0 success, 1 failed checks, 2 malformed input.
int run(int argc, char** argv);

}  // namespace sz::cli
