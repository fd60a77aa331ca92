#include "snmf/diagnostics.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>
#include <string>

#include "snmf/error.hpp"

namespace snmf {

namespace {

std::mutex warn_mutex;
std::set<std::string, std::less<>> warned_keys;
std::atomic<bool> warnings_enabled{true};

}  // namespace

void warn_once(std::string_view key, std::string_view message) {
  std::lock_guard lock(warn_mutex);
  if (warned_keys.find(key) != warned_keys.end()) return;
  warned_keys.emplace(key);
  if (warnings_enabled.load()) std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { warnings_enabled.store(enabled); }

std::string to_string(Index where) {
  return "(" + std::to_string(where.row) + ", " + std::to_string(where.col) + ")";
}

DomainError::DomainError(const std::string& what, std::optional<Index> where)
    : Error(where ? what + " at entry " + to_string(*where) : what), where_(where) {}

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace snmf
