#pragma once

#include <string>
#include <vector>

namespace mqcic::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace mqcic::cli
