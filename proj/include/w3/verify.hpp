// Self-checks run by `w3tool verify`.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace w3 {

struct CheckResult {
    std::string scope;
    std::string name;
    bool pass = false;
    std::string detail;
};

// scope is one of tables, nilq, johnson, strata, all; throws std::invalid_argument otherwise.
std::vector<CheckResult> run_verify(const std::string& scope, std::uint64_t seed, const std::string& data_dir);

}  // namespace w3
