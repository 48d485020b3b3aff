#pragma once

#include <string_view>

namespace simspar {

enum class LogLevel { quiet = 0, warning = 1, info = 2, debug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();

void log_warning(std::string_view msg);
void log_info(std::string_view msg);
void log_debug(std::string_view msg);

// Caps internal parallelism from SPARSIFY_THREADS (unset or invalid: leave the
// runtime default). Returns the thread count in effect.
int configure_threads_from_env();

}  // namespace simspar
