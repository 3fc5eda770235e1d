#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bmoext/experiments.hpp"

namespace bmoext {

struct VerifyConfig {
    double chart_epsilon{0.1};  // chart-deviation pass threshold (overridable)
    int threads{1};
    std::uint64_t seed{20260801};
};

/// One acceptance criterion: a named runner returning its sub-checks and an
/// upper bound on the acceptable wall time (0 = no bound).
struct Criterion {
    std::string name;
    double time_limit_s{0};
    std::function<std::vector<CheckResult>(const VerifyConfig&)> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs every criterion and assembles the deterministic report (wall times
/// are intentionally not part of the report).
Report verify_all(const VerifyConfig& config);

}  // namespace bmoext
