#pragma once

#include <string>
#include <vector>

#include "cuspext/extension.hpp"

namespace cuspext {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double measured = 0;
    double limit = 0;
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Full property suite for a scenario. `full` additionally runs the dyadic
// slope spot checks (slower).
VerifyReport run_verification(const Scenario& scenario, int threads = 0, bool full = true);

std::string verify_report_json(const VerifyReport& report, const std::string& descriptor_json);

// Shared grid test: consistent quad orientation plus no edge crossings.
bool image_grid_injective(const std::vector<Vec2>& points, int w, int h, std::string* why);

}  // namespace cuspext
