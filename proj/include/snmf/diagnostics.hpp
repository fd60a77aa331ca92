#pragma once

#include <string_view>

namespace snmf {

// Prints `message` to stderr the first time `key` is seen in this process.
void warn_once(std::string_view key, std::string_view message);

// Silences (or re-enables) warn_once output. Keys are still recorded.
void set_warnings_enabled(bool enabled);

}  // namespace snmf
