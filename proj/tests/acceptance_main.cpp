// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <iostream>

#include "tcmap/acceptance.hpp"

int main() {
  const auto results = tcmap::run_acceptance(&std::cout);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << '/' << results.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
