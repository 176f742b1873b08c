#pragma once

// Noise-free self-checks run by `ris_sim validate`.

#include <cstdint>
#include <string>
#include <vector>

namespace ris {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_noise_free_suite(std::uint64_t seed = 1);

}  // namespace ris
