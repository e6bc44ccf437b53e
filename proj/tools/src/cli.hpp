#pragma once

#include <iosfwd>

namespace extmorph::cli {

// Exit codes: 0 no check failed; 1 a check failed (or, with --strict, was
// inapplicable); 2 usage, input or validation error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace extmorph::cli
