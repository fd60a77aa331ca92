#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "snmf/diagnostics.hpp"

int main(int argc, char** argv) {
  // Frozen-row and rescale warnings are exercised on purpose; keep the log clean.
  snmf::set_warnings_enabled(false);
  doctest::Context context(argc, argv);
  return context.run();
}
