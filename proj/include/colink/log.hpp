#pragma once

#include <functional>
#include <string_view>

namespace colink {

using WarningHandler = std::function<void(std::string_view)>;

// Installs a process-wide warning sink and returns the previous one.
// The default handler writes "warning: <msg>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

} // namespace colink
