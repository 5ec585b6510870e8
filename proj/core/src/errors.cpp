#include "vplk/errors.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace vplk {

namespace {
std::mutex g_mutex;
WarningHandler g_handler = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(g_mutex);
    return std::exchange(g_handler, std::move(handler));
}

void warn(const std::string& message) {
    WarningHandler h;
    {
        std::lock_guard lock(g_mutex);
        h = g_handler;
    }
    if (h) h(message);
}

}  // namespace vplk
