#pragma once

#include <string>
#include <vector>

namespace l1est {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast invariant checks across all modules (a few seconds in total).
std::vector<SelftestCheck> run_selftest();

}  // namespace l1est
