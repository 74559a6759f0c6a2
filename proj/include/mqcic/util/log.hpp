#pragma once

#include <iostream>
#include <string>

namespace mqcic::util {

// Logs go to stderr; stdout carries data.
inline void log_info(const std::string& msg) { std::cerr << "[mqcic] info: " << msg << "\n"; }
inline void log_warn(const std::string& msg) { std::cerr << "[mqcic] warn: " << msg << "\n"; }
inline void log_error(const std::string& msg) { std::cerr << "[mqcic] error: " << msg << "\n"; }

}  // namespace mqcic::util
