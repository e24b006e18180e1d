// SPDX-License-Identifier: Apache-2.0
#include "nfchan/validation.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "nfchan/sim.hpp"
#include "nfchan/subspace.hpp"

namespace nfchan {

namespace {

std::string format_double(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

ScatteringRegion coverage_region(double d1, double d2) {
    const double pi = std::numbers::pi;
    return ScatteringRegion(-pi / 6, pi / 6, -pi / 9, 0.0, d1, d2);
}

// Trace, Hermitian and PSD invariants of one matrix.
bool matrix_invariants_hold(const CorrelationMatrix& r, std::string& detail) {
    const Eigen::Index m = r.entries.rows();
    const double trace = r.entries.real().trace();
    const double trace_err = std::abs(trace - m * r.beta) / (m * r.beta);
    if (trace_err > 1e-8) {
        detail = "trace relative error " + format_double("%.3e", trace_err);
        return false;
    }
    const double herm = (r.entries - r.entries.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) {
        detail = "Hermitian deviation " + format_double("%.3e", herm);
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r.entries,
                                                           Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -1e-9 * trace / static_cast<double>(m)) {
        detail = "minimum eigenvalue " + format_double("%.3e", min_eig);
        return false;
    }
    return true;
}

}  // namespace

double oracle_max_abs_error(const ArrayGeometry& geometry, const ScatteringRegion& region,
                            double beta, int nodes_per_axis, const SFactorFn& distance_factor) {
    const CorrelationMatrix oracle = oracle_correlation(geometry, region, beta, nodes_per_axis);
    const double uniform_distance_factor = 1.0 / region.d1 - 1.0 / region.d2;
    const int m_total = geometry.size();
    double max_err = 0.0;
    for (int n = 1; n <= m_total; ++n) {
        const AntennaIndex an = antenna_index(geometry, n);
        for (int m = n; m <= m_total; ++m) {
            const AntennaIndex am = antenna_index(geometry, m);
            const int di = an.i - am.i;
            const int dj = an.j - am.j;
            const long long k =
                static_cast<long long>(an.i) * an.i + static_cast<long long>(an.j) * an.j -
                static_cast<long long>(am.i) * am.i - static_cast<long long>(am.j) * am.j;
            // Closed-form entry split into its angular part and the
            // (injectable) distance factor.
            const std::complex<double> angular =
                detail::representative_entry(geometry, region, beta, di, dj, k, true) /
                uniform_distance_factor;
            const std::complex<double> closed = angular * distance_factor(geometry, region, k);
            max_err = std::max(max_err, std::abs(closed - oracle.entries(n - 1, m - 1)));
        }
    }
    return max_err;
}

std::vector<CheckResult> run_validation(std::uint64_t seed) {
    std::vector<CheckResult> results;

    {
        const ArrayGeometry geometry(4, 4, 0.05, 0.1);
        const ScatteringRegion region = coverage_region(10.0, 20.0);
        const double err = oracle_max_abs_error(geometry, region, 1.0, 64);
        results.push_back({"closed-form vs quadrature oracle (4x4)", err <= 1e-6,
                           "max abs entry error " + format_double("%.3e", err)});
    }

    {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> u_dim(1, 4);
        std::uniform_real_distribution<double> u_angle(-1.4, 1.4);
        std::uniform_real_distribution<double> u_beta(0.5, 3.0);
        std::uniform_real_distribution<double> u_d(5.0, 30.0);
        bool ok = true;
        std::string detail = "5 randomized configs, 3 constructors each";
        for (int round = 0; round < 5 && ok; ++round) {
            const ArrayGeometry geometry(u_dim(rng), u_dim(rng), 0.05, 0.1);
            double a1 = u_angle(rng), a2 = u_angle(rng);
            if (a1 > a2) std::swap(a1, a2);
            if (a2 - a1 < 0.05) a2 = a1 + 0.05;
            double e1 = u_angle(rng), e2 = u_angle(rng);
            if (e1 > e2) std::swap(e1, e2);
            if (e2 - e1 < 0.05) e2 = e1 + 0.05;
            double d1 = u_d(rng), d2 = u_d(rng);
            if (d1 > d2) std::swap(d1, d2);
            if (d2 - d1 < 1.0) d2 = d1 + 1.0;
            const ScatteringRegion region(a1, a2, e1, e2, d1, d2);
            const double beta = u_beta(rng);

            ExperimentConfig cfg(geometry, region);
            cfg.beta = beta;
            cfg.cluster_count = 6;
            const ClusterSet clusters = sample_clusters(cfg, rng);
            const CorrelationMatrix candidates[] = {
                cluster_correlation(geometry, clusters),
                representative_correlation(geometry, region, beta),
                far_field_representative_correlation(geometry, region, beta)};
            for (const CorrelationMatrix& r : candidates) {
                if (!matrix_invariants_hold(r, detail)) {
                    ok = false;
                    break;
                }
            }
        }
        results.push_back({"trace / Hermitian / PSD invariants", ok, detail});
    }

    {
        const ArrayGeometry geometry(8, 8, 0.05, 0.1);
        ExperimentConfig cfg(geometry, coverage_region(10.0, 20.0));
        cfg.trials = 300;
        cfg.max_blocks = 5;
        cfg.snr_db = 0.0;
        cfg.seed = seed;
        const NmseCurve curve = run_nmse_experiment(cfg);
        const int last = cfg.max_blocks - 1;
        const double mmse = curve.at("mmse").nmse[last];
        const double dyn = curve.at("dynamic-rsls-nf").nmse[last];
        const double rsls = curve.at("rsls-nf").nmse[last];
        const double ls = curve.at("ls").nmse[last];
        const bool ok = mmse < dyn && dyn < rsls && rsls < ls;
        results.push_back({"estimator ordering smoke (8x8)", ok,
                           "mmse " + format_double("%.3f", mmse) + " < dyn " +
                               format_double("%.3f", dyn) + " < rsls " +
                               format_double("%.3f", rsls) + " < ls " +
                               format_double("%.3f", ls)});
    }

    return results;
}

}  // namespace nfchan
