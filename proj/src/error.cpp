#include "fairssl/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace fairssl {

namespace {
std::atomic<bool> g_warnings_enabled{true};
std::mutex g_warn_mutex;
}  // namespace

void warn(const std::string& message) {
    if (!g_warnings_enabled.load(std::memory_order_relaxed)) return;
    std::lock_guard lock(g_warn_mutex);
    std::clog << "[fairssl] warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings_enabled.store(enabled); }

}  // namespace fairssl
