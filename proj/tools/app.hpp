#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "suplab/forms.hpp"
#include "suplab/modgroup.hpp"

namespace suplab::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Results go to `out` (or the
/// configured output path), diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "I", "S", "U" or "a,b,c,d".
GroupElement parse_element(const std::string& text);

/// "delta", "eta:r=R" (R even), "monomial:a=A,b=B,c=C", "basis:k=K,j=J" or "file:PATH";
/// `count` coefficients except for file forms.
CuspForm parse_form(const std::string& text, std::size_t count = kDefaultCoeffCount);

}  // namespace suplab::cli
