// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "nfchan/io.hpp"
#include "nfchan/validation.hpp"

using namespace nfchan;

namespace {

constexpr double kPi = std::numbers::pi;

ScatteringRegion small_region() {
    return ScatteringRegion(-kPi / 6, kPi / 6, -kPi / 9, 0.0, 10.0, 20.0);
}

}  // namespace

TEST_CASE("correlation binary round-trip") {
    const ArrayGeometry g(3, 4, 0.05, 0.1);
    const CorrelationMatrix r = representative_correlation(g, small_region(), 2.5);

    std::stringstream buffer;
    write_correlation_binary(buffer, r, 7u);
    std::uint32_t flags = 0;
    const CorrelationMatrix back = read_correlation_binary(buffer, &flags);

    CHECK(flags == 7u);
    CHECK(back.beta == r.beta);
    CHECK(back.entries.rows() == r.entries.rows());
    CHECK((back.entries - r.entries).cwiseAbs().maxCoeff() == 0.0);

    // Truncated payloads and bad magic are rejected.
    std::stringstream truncated(buffer.str().substr(0, 20));
    CHECK_THROWS_AS(read_correlation_binary(truncated), std::runtime_error);
    std::string mangled = buffer.str();
    mangled[0] = 'X';
    std::stringstream bad(mangled);
    CHECK_THROWS_AS(read_correlation_binary(bad), std::runtime_error);
}

TEST_CASE("csv writers emit their schema tags") {
    const ArrayGeometry g(3, 3, 0.05, 0.1);
    const CorrelationMatrix r = representative_correlation(g, small_region(), 1.0);

    std::ostringstream spectrum_csv;
    write_eigenspectrum_csv(spectrum_csv, eigendecompose(r), "nf");
    CHECK(spectrum_csv.str().rfind(std::string("# schema=") + kEigenspectrumSchema, 0) == 0);
    CHECK(spectrum_csv.str().find("index,eigenvalue,eigenvalue_db,cumulative_fraction") !=
          std::string::npos);

    std::ostringstream corr_csv;
    write_correlation_csv(corr_csv, r);
    CHECK(corr_csv.str().rfind(std::string("# schema=") + kCorrelationCsvSchema, 0) == 0);

    ExperimentConfig cfg(g, small_region());
    cfg.trials = 20;
    cfg.max_blocks = 2;
    std::ostringstream nmse_csv;
    write_nmse_csv(nmse_csv, cfg, run_nmse_experiment(cfg));
    const std::string text = nmse_csv.str();
    CHECK(text.rfind(std::string("# schema=") + kNmseSchema, 0) == 0);
    CHECK(text.find(" seed=") != std::string::npos);
    for (const char* name :
         {"mmse", "ls", "rsls-nf", "rsls-ff", "dynamic-rsls-nf", "dynamic-rsls-ff"}) {
        CHECK(text.find(name) != std::string::npos);
    }
}

TEST_CASE("csv output is byte-identical across runs and thread counts") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    ExperimentConfig cfg(g, small_region());
    cfg.trials = 60;
    cfg.max_blocks = 3;
    cfg.seed = 5;

    const auto render = [&](int threads) {
        cfg.threads = threads;
        std::ostringstream out;
        write_nmse_csv(out, cfg, run_nmse_experiment(cfg));
        return out.str();
    };
    const std::string serial = render(1);
    CHECK(render(1) == serial);
    CHECK(render(4) == serial);
}

TEST_CASE("oracle check distinguishes a broken distance factor") {
    const ArrayGeometry g(3, 3, 0.05, 0.1);
    const ScatteringRegion region = small_region();

    CHECK(oracle_max_abs_error(g, region, 1.0, 48) < 1e-6);

    const SFactorFn flipped = [](const ArrayGeometry& geo, const ScatteringRegion& reg,
                                 long long k) { return -s_factor(geo, reg, k); };
    CHECK(oracle_max_abs_error(g, region, 1.0, 48, flipped) > 1e-6);
}

TEST_CASE("validation suite passes on a healthy build") {
    const std::vector<CheckResult> results = run_validation(3);
    CHECK(results.size() == 3);
    for (const CheckResult& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.passed);
    }
}
