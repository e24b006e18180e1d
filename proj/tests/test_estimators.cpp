// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nfchan/estimators.hpp"
#include "nfchan/sim.hpp"

using namespace nfchan;

namespace {

constexpr double kPi = std::numbers::pi;

ScatteringRegion coverage_region(double d1, double d2) {
    return ScatteringRegion(-kPi / 6, kPi / 6, -kPi / 9, 0.0, d1, d2);
}

Eigen::VectorXcd random_vector(int n, std::mt19937_64& rng) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = complex_normal(rng);
    }
    return v;
}

}  // namespace

TEST_CASE("mmse estimator limit cases") {
    std::mt19937_64 rng(10);
    const int m = 8;
    const Eigen::VectorXcd y = random_vector(m, rng);

    const CorrelationMatrix zero{Eigen::MatrixXcd::Zero(m, m), 1.0};
    CHECK(mmse_estimate(PilotObservation(y, 1.0), zero).norm() == 0.0);

    // R = beta I at high SNR approaches the LS estimate y / sqrt(rho).
    const double rho = 1e8;
    const CorrelationMatrix scaled_identity{2.0 * Eigen::MatrixXcd::Identity(m, m), 2.0};
    const Eigen::VectorXcd est = mmse_estimate(PilotObservation(y, rho), scaled_identity);
    CHECK((est - y / std::sqrt(rho)).norm() < 1e-7 * y.norm());
}

TEST_CASE("mmse monte carlo NMSE matches the analytic value") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    ExperimentConfig cfg(g, coverage_region(10.0, 20.0));
    cfg.cluster_count = 5;
    std::mt19937_64 rng = trial_rng(11, 0);
    const ClusterSet clusters = sample_clusters(cfg, rng);
    const CorrelationMatrix r = cluster_correlation(g, clusters);

    const double rho = 2.0;
    const double analytic = mmse_analytic_nmse(r, rho);
    const MmseFilter filter(r, rho);

    const int trials = 4000;
    std::vector<double> ratios(trials);
    double err_sum = 0.0;
    double pow_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXcd h = sample_channel(clusters, g, rng, cfg.flavor);
        const Eigen::VectorXcd y = std::sqrt(rho) * h + random_vector(g.size(), rng);
        const double e = (h - filter.estimate(y)).squaredNorm();
        err_sum += e;
        pow_sum += h.squaredNorm();
        ratios[t] = e;
    }
    const double mc = err_sum / pow_sum;
    double var = 0.0;
    const double mean_e = err_sum / trials;
    for (double e : ratios) {
        var += (e - mean_e) * (e - mean_e);
    }
    const double se = std::sqrt(var / (trials - 1.0) / trials) / (pow_sum / trials);
    CHECK(std::abs(mc - analytic) < 3.0 * se);
}

TEST_CASE("ls estimator") {
    std::mt19937_64 rng(12);
    const Eigen::VectorXcd y = random_vector(6, rng);
    CHECK(ls_estimate(PilotObservation(Eigen::VectorXcd::Zero(6), 2.0)).norm() == 0.0);
    CHECK((ls_estimate(PilotObservation(y, 1.0)) - y).norm() == 0.0);
    CHECK((ls_estimate(PilotObservation(y, 4.0)) - y / 2.0).norm() < 1e-15);
    CHECK_THROWS_AS(PilotObservation(y, 0.0), std::invalid_argument);
}

TEST_CASE("rsls estimator projects and rescales") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    const int m = g.size();
    std::mt19937_64 rng(13);
    const Eigen::VectorXcd y = random_vector(m, rng);
    const double rho = 2.0;

    // Full-rank subspace makes RS-LS identical to LS.
    const Subspace full{Eigen::MatrixXcd::Identity(m, m), m, 1.0};
    CHECK((rsls_estimate(PilotObservation(y, rho), full) -
           ls_estimate(PilotObservation(y, rho)))
              .norm() < 1e-14);

    const Subspace nf = build_subspace(representative_correlation(g, coverage_region(10, 20), 1.0));
    // A vector orthogonal to the basis maps to zero.
    Eigen::VectorXcd orthogonal = y - nf.basis * (nf.basis.adjoint() * y);
    CHECK(rsls_estimate(PilotObservation(orthogonal, rho), nf).norm() < 1e-12 * y.norm());

    // Projection composed with scaling is idempotent.
    const Eigen::VectorXcd once = rsls_estimate(PilotObservation(y, rho), nf);
    const Eigen::VectorXcd twice =
        rsls_estimate(PilotObservation(std::sqrt(rho) * once, rho), nf);
    CHECK((once - twice).norm() < 1e-12 * once.norm());

    CHECK_THROWS_AS(rsls_estimate(PilotObservation(random_vector(3, rng), rho), nf),
                    std::invalid_argument);
}

TEST_CASE("tracker accumulates running mean powers") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    const Subspace nf = build_subspace(representative_correlation(g, coverage_region(10, 20), 1.0));
    std::mt19937_64 rng(14);
    const PilotObservation obs(random_vector(g.size(), rng), 1.0);

    DimensionPowerTracker tracker(nf.rank);
    CHECK(tracker.blocks() == 0);
    tracker = tracker_update(tracker, obs, nf);
    CHECK(tracker.blocks() == 1);
    const Eigen::VectorXd expected = (nf.basis.adjoint() * obs.y).cwiseAbs2();
    CHECK((tracker.mean_power() - expected).cwiseAbs().maxCoeff() < 1e-14);

    // A second identical observation leaves the mean unchanged.
    tracker = tracker_update(tracker, obs, nf);
    CHECK((tracker.mean_power() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tracked powers converge to rho u^H R u + 1") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    ExperimentConfig cfg(g, coverage_region(10.0, 20.0));
    cfg.cluster_count = 5;
    std::mt19937_64 rng = trial_rng(15, 0);
    const ClusterSet clusters = sample_clusters(cfg, rng);
    const CorrelationMatrix r = cluster_correlation(g, clusters);
    const Subspace nf =
        build_subspace(representative_correlation(g, cfg.region, 1.0));
    const double rho = 2.0;

    const int blocks = 10000;
    DimensionPowerTracker tracker(nf.rank);
    for (int l = 0; l < blocks; ++l) {
        const Eigen::VectorXcd h = sample_channel(clusters, g, rng, cfg.flavor);
        const Eigen::VectorXcd y = std::sqrt(rho) * h + random_vector(g.size(), rng);
        tracker = tracker_update(tracker, PilotObservation(y, rho), nf);
    }
    const Eigen::VectorXd expected =
        (rho * (nf.basis.adjoint() * r.entries * nf.basis).diagonal().real().array() + 1.0)
            .matrix();
    for (int i = 0; i < nf.rank; ++i) {
        // |u^H y|^2 is exponential with mean lambda_i, so se = lambda_i/sqrt(L).
        const double se = expected(i) / std::sqrt(static_cast<double>(blocks));
        CHECK(std::abs(tracker.mean_power()(i) - expected(i)) < 4.0 * se);
    }
}

TEST_CASE("dynamic rsls scaling behavior") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    const Subspace nf = build_subspace(representative_correlation(g, coverage_region(10, 20), 1.0));
    std::mt19937_64 rng(16);
    const PilotObservation obs(random_vector(g.size(), rng), 1.0);

    DimensionPowerTracker empty(nf.rank);
    CHECK_THROWS_AS(dynamic_rsls_estimate(obs, nf, empty), std::logic_error);

    // Tracked powers at or below the noise floor suppress everything.
    const PilotObservation tiny(1e-6 * obs.y, 1.0);
    DimensionPowerTracker low = tracker_update(DimensionPowerTracker(nf.rank), tiny, nf);
    CHECK(dynamic_rsls_estimate(obs, nf, low).norm() == 0.0);

    // Huge tracked powers converge to plain RS-LS, and the output norm never
    // exceeds the RS-LS norm.
    const PilotObservation loud(1e6 * obs.y, 1.0);
    DimensionPowerTracker high = tracker_update(DimensionPowerTracker(nf.rank), loud, nf);
    const Eigen::VectorXcd dynamic = dynamic_rsls_estimate(obs, nf, high);
    const Eigen::VectorXcd plain = rsls_estimate(obs, nf);
    CHECK((dynamic - plain).norm() < 1e-8 * plain.norm());
    CHECK(dynamic.norm() <= plain.norm() * (1.0 + 1e-12));
}

TEST_CASE("estimators are linear in the observation") {
    const ArrayGeometry g(4, 4, 0.05, 0.1);
    ExperimentConfig cfg(g, coverage_region(10.0, 20.0));
    cfg.cluster_count = 4;
    std::mt19937_64 rng = trial_rng(17, 0);
    const ClusterSet clusters = sample_clusters(cfg, rng);
    const CorrelationMatrix r = cluster_correlation(g, clusters);
    const Subspace nf = build_subspace(representative_correlation(g, cfg.region, 1.0));
    const double rho = 2.0;

    const Eigen::VectorXcd y1 = random_vector(g.size(), rng);
    const Eigen::VectorXcd y2 = random_vector(g.size(), rng);
    const std::complex<double> alpha(0.7, -1.2);
    const Eigen::VectorXcd combo = alpha * y1 + y2;

    DimensionPowerTracker tracker =
        tracker_update(DimensionPowerTracker(nf.rank),
                       PilotObservation(random_vector(g.size(), rng), rho), nf);

    const auto check_linear = [&](auto&& estimator) {
        const Eigen::VectorXcd lhs = estimator(combo);
        const Eigen::VectorXcd rhs = alpha * estimator(y1) + estimator(y2);
        CHECK((lhs - rhs).norm() < 1e-10 * (rhs.norm() + 1.0));
    };
    check_linear([&](const Eigen::VectorXcd& y) {
        return mmse_estimate(PilotObservation(y, rho), r);
    });
    check_linear([&](const Eigen::VectorXcd& y) { return ls_estimate(PilotObservation(y, rho)); });
    check_linear([&](const Eigen::VectorXcd& y) {
        return rsls_estimate(PilotObservation(y, rho), nf);
    });
    check_linear([&](const Eigen::VectorXcd& y) {
        return dynamic_rsls_estimate(PilotObservation(y, rho), nf, tracker);
    });
}
