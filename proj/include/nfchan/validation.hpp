// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nfchan/correlation.hpp"

namespace nfchan {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

using SFactorFn = std::function<std::complex<double>(
    const ArrayGeometry&, const ScatteringRegion&, long long)>;

// Maximum absolute entry difference between the closed-form representative
// matrix and the brute-force triple-quadrature evaluation. The distance
// factor is injectable so a deliberately broken one can be shown to fail.
double oracle_max_abs_error(const ArrayGeometry& geometry, const ScatteringRegion& region,
                            double beta, int nodes_per_axis,
                            const SFactorFn& distance_factor = s_factor);

// Full on-demand check suite: oracle equivalence, trace/Hermitian/PSD
// invariants over randomized configs, and an estimator-ordering smoke run.
std::vector<CheckResult> run_validation(std::uint64_t seed);

}  // namespace nfchan
