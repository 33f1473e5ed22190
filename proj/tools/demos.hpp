#ifndef MULTISUM_TOOLS_DEMOS_HPP
#define MULTISUM_TOOLS_DEMOS_HPP

#include <ostream>

// Reruns the worked examples and prints one PASS/FAIL line each. Returns true
// when all pass.
bool run_demos(std::ostream& out);

#endif  // MULTISUM_TOOLS_DEMOS_HPP
