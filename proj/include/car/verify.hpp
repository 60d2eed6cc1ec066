#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace car {

struct PropertyResult {
    std::string name;
    double worst = 0.0;      // measured worst-case residual (or margin, see note)
    double threshold = 0.0;  // the pinned tolerance
    bool pass = false;
    std::string note;
};

struct VerifyOptions {
    int max_n = 5;
    int samples = 100;
    std::uint64_t seed = 1;
};

std::vector<PropertyResult> verify_core(const VerifyOptions& opts);
std::vector<PropertyResult> verify_expect(const VerifyOptions& opts);
std::vector<PropertyResult> verify_entropy(const VerifyOptions& opts);
std::vector<PropertyResult> verify_families(const VerifyOptions& opts);
std::vector<PropertyResult> verify_all(const VerifyOptions& opts);

void print_results(std::ostream& out, const std::vector<PropertyResult>& results);
bool all_pass(const std::vector<PropertyResult>& results);

} // namespace car
