#pragma once

#include <string>
#include <vector>

namespace lstc::cli {

/// Entry point behind the lstc binary: subcommands synth, mask, impute,
/// eval, spectrum. Returns the process exit code; never throws.
int dispatch(const std::vector<std::string>& args);

}  // namespace lstc::cli
