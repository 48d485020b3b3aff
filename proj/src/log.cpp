#include "simspar/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

#ifdef SIMSPAR_HAVE_OPENMP
#include <omp.h>
#endif

namespace simspar {
namespace {

std::atomic<int> g_level{static_cast<int>(LogLevel::warning)};
std::mutex g_mutex;

void emit(LogLevel level, const char* tag, std::string_view msg) {
  if (static_cast<int>(level) > g_level.load()) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "simspar: " << tag << ": " << msg << '\n';
}

}  // namespace

void set_log_level(LogLevel level) { g_level.store(static_cast<int>(level)); }
LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void log_warning(std::string_view msg) { emit(LogLevel::warning, "warning", msg); }
void log_info(std::string_view msg) { emit(LogLevel::info, "info", msg); }
void log_debug(std::string_view msg) { emit(LogLevel::debug, "debug", msg); }

int configure_threads_from_env() {
#ifdef SIMSPAR_HAVE_OPENMP
  if (const char* env = std::getenv("SPARSIFY_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) omp_set_num_threads(n);
    } catch (const std::exception&) {
      log_warning(std::string("ignoring invalid SPARSIFY_THREADS=") + env);
    }
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace simspar
