// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "nfchan/sim.hpp"

using namespace nfchan;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig small_config() {
    ExperimentConfig cfg(ArrayGeometry(4, 4, 0.05, 0.1),
                         ScatteringRegion(-kPi / 6, kPi / 6, -kPi / 9, 0.0, 10.0, 20.0));
    cfg.cluster_count = 6;
    cfg.trials = 100;
    cfg.max_blocks = 4;
    cfg.seed = 21;
    return cfg;
}

bool same_clusters(const ClusterSet& a, const ClusterSet& b) {
    if (a.clusters.size() != b.clusters.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        if (a.clusters[i].point.azimuth != b.clusters[i].point.azimuth ||
            a.clusters[i].point.elevation != b.clusters[i].point.elevation ||
            a.clusters[i].point.distance != b.clusters[i].point.distance ||
            a.clusters[i].power != b.clusters[i].power) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("cluster sampling respects the region and normalization") {
    ExperimentConfig cfg = small_config();

    cfg.cluster_count = 1;
    std::mt19937_64 rng = trial_rng(cfg.seed, 0);
    const ClusterSet single = sample_clusters(cfg, rng);
    CHECK(single.clusters.size() == 1);
    CHECK(single.clusters[0].power == 1.0);

    cfg.cluster_count = 10;
    for (int round = 0; round < 1000; ++round) {
        const ClusterSet set = sample_clusters(cfg, rng);
        double sum = 0.0;
        for (const Cluster& c : set.clusters) {
            CHECK(cfg.region.contains(c.point));
            sum += c.power;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cluster sampling is bit-deterministic per stream") {
    const ExperimentConfig cfg = small_config();
    std::mt19937_64 a = trial_rng(cfg.seed, 7);
    std::mt19937_64 b = trial_rng(cfg.seed, 7);
    CHECK(same_clusters(sample_clusters(cfg, a), sample_clusters(cfg, b)));

    std::mt19937_64 c = trial_rng(cfg.seed, 8);
    CHECK_FALSE(same_clusters(sample_clusters(cfg, a), sample_clusters(cfg, c)));
}

TEST_CASE("sampled channels have the prescribed statistics") {
    const ExperimentConfig cfg = small_config();
    std::mt19937_64 rng = trial_rng(cfg.seed, 1);
    const ClusterSet clusters = sample_clusters(cfg, rng);
    const ArrayGeometry& g = cfg.geometry;
    const int m = g.size();

    // Single cluster: h is collinear with the response vector.
    const ClusterSet one({Cluster{clusters.clusters[0].point, 1.0}}, 1.0);
    const Eigen::VectorXcd h1 = sample_channel(one, g, rng, cfg.flavor);
    const Eigen::VectorXcd b = response(g, one.clusters[0].point, cfg.flavor);
    const std::complex<double> scale = h1(0) / b(0);
    CHECK((h1 - scale * b).norm() < 1e-12 * h1.norm());

    // Mean energy M beta and sample covariance matching cluster_correlation.
    const CorrelationMatrix r = cluster_correlation(g, clusters, cfg.flavor);
    const int draws = 20000;
    double energy = 0.0;
    double energy_sq = 0.0;
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(m, m);
    for (int t = 0; t < draws; ++t) {
        const Eigen::VectorXcd h = sample_channel(clusters, g, rng, cfg.flavor);
        const double e = h.squaredNorm();
        energy += e;
        energy_sq += e * e;
        cov.noalias() += h * h.adjoint();
    }
    energy /= draws;
    cov /= static_cast<double>(draws);
    const double energy_se =
        std::sqrt((energy_sq / draws - energy * energy) / (draws - 1.0));
    CHECK(std::abs(energy - m * clusters.beta) < 3.0 * energy_se);

    // Entrywise agreement within 3 standard errors; entry variances are
    // bounded by the diagonal product, so use that as a conservative scale.
    for (int n = 0; n < m; ++n) {
        for (int c = 0; c < m; ++c) {
            const double se = std::sqrt(r.entries(n, n).real() * r.entries(c, c).real() /
                                        static_cast<double>(draws));
            CHECK(std::abs(cov(n, c) - r.entries(n, c)) < 4.0 * se);
        }
    }
}

TEST_CASE("nmse experiment is deterministic and thread-invariant") {
    ExperimentConfig cfg = small_config();
    cfg.threads = 1;
    const NmseCurve serial = run_nmse_experiment(cfg);
    const NmseCurve repeat = run_nmse_experiment(cfg);
    cfg.threads = 3;
    const NmseCurve threaded = run_nmse_experiment(cfg);

    REQUIRE(serial.estimators.size() == threaded.estimators.size());
    for (std::size_t e = 0; e < serial.estimators.size(); ++e) {
        for (int l = 0; l < cfg.max_blocks; ++l) {
            CHECK(serial.estimators[e].nmse[l] == repeat.estimators[e].nmse[l]);
            CHECK(serial.estimators[e].nmse[l] == threaded.estimators[e].nmse[l]);
            CHECK(serial.estimators[e].standard_error[l] ==
                  threaded.estimators[e].standard_error[l]);
        }
    }
}

TEST_CASE("ls NMSE at 0 dB is 0 dB") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 10000;
    cfg.max_blocks = 1;
    cfg.snr_db = 0.0;
    const NmseCurve curve = run_nmse_experiment(cfg);
    const double nmse_db = 10.0 * std::log10(curve.at("ls").nmse[0]);
    CHECK(std::abs(nmse_db) < 0.1);
}

TEST_CASE("standard errors shrink roughly as one over sqrt trials") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 400;
    const double se_small = run_nmse_experiment(cfg).at("ls").nmse[0] > 0
                                ? run_nmse_experiment(cfg).at("ls").standard_error[0]
                                : 0.0;
    cfg.trials = 1600;
    const double se_large = run_nmse_experiment(cfg).at("ls").standard_error[0];
    const double ratio = se_small / se_large;
    CHECK(ratio > 1.3);
    CHECK(ratio < 3.0);
}

TEST_CASE("subspace cache round-trips through disk") {
    const ExperimentConfig cfg = small_config();
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "nfchan_cache_test";
    std::filesystem::remove_all(dir);

    const Subspace fresh = cached_subspace(cfg.geometry, cfg.region, cfg.beta,
                                           cfg.rank_fraction, false, dir.string());
    CHECK(std::filesystem::exists(dir));
    const Subspace loaded = cached_subspace(cfg.geometry, cfg.region, cfg.beta,
                                            cfg.rank_fraction, false, dir.string());
    CHECK(loaded.rank == fresh.rank);
    CHECK((loaded.basis - fresh.basis).cwiseAbs().maxCoeff() == 0.0);

    // The far-field variant must key differently and add a second file.
    cached_subspace(cfg.geometry, cfg.region, cfg.beta, cfg.rank_fraction, true, dir.string());
    int files = 0;
    for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) {
        ++files;
    }
    CHECK(files == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment configuration validation") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(run_nmse_experiment(cfg), std::invalid_argument);
    cfg.trials = 10;
    cfg.cluster_count = 0;
    std::mt19937_64 rng = trial_rng(1, 0);
    CHECK_THROWS_AS(sample_clusters(cfg, rng), std::invalid_argument);
}
