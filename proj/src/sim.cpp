// SPDX-License-Identifier: Apache-2.0
#include "nfchan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace nfchan {

namespace {

constexpr const char* kEstimatorNames[] = {"mmse",    "ls",
                                           "rsls-nf", "rsls-ff",
                                           "dynamic-rsls-nf", "dynamic-rsls-ff"};
constexpr int kNumEstimators = 6;
constexpr int kFirstDynamicIndex = 4;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int resolve_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("NFCHAN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Squared-error / channel-power sample pair for one (trial, block) cell.
struct ErrorSample {
    double error = 0.0;
    double power = 0.0;
};

// Ratio-of-sums NMSE with a delta-method standard error over the per-trial
// samples.
void reduce_samples(const std::vector<ErrorSample>& samples, double& nmse, double& se) {
    const std::size_t n = samples.size();
    double mean_e = 0.0;
    double mean_p = 0.0;
    for (const ErrorSample& s : samples) {
        mean_e += s.error;
        mean_p += s.power;
    }
    mean_e /= static_cast<double>(n);
    mean_p /= static_cast<double>(n);
    nmse = mean_e / mean_p;
    if (n < 2) {
        se = 0.0;
        return;
    }
    double var_e = 0.0;
    double var_p = 0.0;
    double cov = 0.0;
    for (const ErrorSample& s : samples) {
        const double de = s.error - mean_e;
        const double dp = s.power - mean_p;
        var_e += de * de;
        var_p += dp * dp;
        cov += de * dp;
    }
    const double denom = static_cast<double>(n - 1);
    var_e /= denom;
    var_p /= denom;
    cov /= denom;
    const double var_ratio =
        (var_e - 2.0 * nmse * cov + nmse * nmse * var_p) /
        (static_cast<double>(n) * mean_p * mean_p);
    se = std::sqrt(std::max(var_ratio, 0.0));
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <typename T>
std::uint64_t hash_value(const T& v, std::uint64_t h) {
    return fnv1a(&v, sizeof(v), h);
}

std::uint64_t subspace_key(const ArrayGeometry& g, const ScatteringRegion& r, double beta,
                           double fraction, bool far_field) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const int mh = g.antennas_per_row();
    const int mv = g.antennas_per_column();
    h = hash_value(mh, h);
    h = hash_value(mv, h);
    h = hash_value(g.spacing(), h);
    h = hash_value(g.wavelength(), h);
    h = hash_value(r.phi1, h);
    h = hash_value(r.phi2, h);
    h = hash_value(r.theta1, h);
    h = hash_value(r.theta2, h);
    h = hash_value(r.d1, h);
    h = hash_value(r.d2, h);
    h = hash_value(beta, h);
    h = hash_value(fraction, h);
    h = hash_value(far_field, h);
    return h;
}

bool load_subspace(const std::filesystem::path& file, int m, double fraction, Subspace& out) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        return false;
    }
    char magic[4];
    std::uint32_t version = 0;
    std::uint32_t rows = 0;
    std::uint32_t rank = 0;
    double stored_fraction = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
    in.read(reinterpret_cast<char*>(&stored_fraction), sizeof(stored_fraction));
    if (!in || std::string_view(magic, 4) != "NFSS" || version != 1 ||
        rows != static_cast<std::uint32_t>(m) || stored_fraction != fraction) {
        return false;
    }
    Eigen::MatrixXcd basis(rows, rank);
    in.read(reinterpret_cast<char*>(basis.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) * rows * rank));
    if (!in) {
        return false;
    }
    out = Subspace{std::move(basis), static_cast<int>(rank), fraction};
    return true;
}

void store_subspace(const std::filesystem::path& file, const Subspace& s) {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    const std::uint32_t version = 1;
    const std::uint32_t rows = static_cast<std::uint32_t>(s.basis.rows());
    const std::uint32_t rank = static_cast<std::uint32_t>(s.rank);
    out.write("NFSS", 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    out.write(reinterpret_cast<const char*>(&s.retained_fraction), sizeof(double));
    out.write(reinterpret_cast<const char*>(s.basis.data()),
              static_cast<std::streamsize>(sizeof(std::complex<double>) * rows * rank));
}

}  // namespace

ExperimentConfig::ExperimentConfig(ArrayGeometry geometry_in, ScatteringRegion region_in)
    : geometry(geometry_in), region(region_in) {}

double ExperimentConfig::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

const EstimatorCurve& NmseCurve::at(const std::string& name) const {
    for (const EstimatorCurve& c : estimators) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no estimator curve named " + name);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

std::complex<double> complex_normal(std::mt19937_64& rng) {
    static constexpr double kScale = 0.7071067811865476;  // 1/sqrt(2)
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {kScale * re, kScale * im};
}

ClusterSet sample_clusters(const ExperimentConfig& config, std::mt19937_64& rng) {
    if (config.cluster_count < 1) {
        throw std::invalid_argument("cluster count must be >= 1");
    }
    const ScatteringRegion& reg = config.region;
    std::uniform_real_distribution<double> u_phi(reg.phi1, reg.phi2);
    std::uniform_real_distribution<double> u_theta(reg.theta1, reg.theta2);
    std::uniform_real_distribution<double> u_d(reg.d1, reg.d2);
    std::uniform_real_distribution<double> u_power(0.0, 1.0);

    std::vector<Cluster> clusters;
    clusters.reserve(config.cluster_count);
    double power_sum = 0.0;
    for (int k = 0; k < config.cluster_count; ++k) {
        const double phi = u_phi(rng);
        const double theta = u_theta(rng);
        const double d = u_d(rng);
        double p = u_power(rng);
        if (p == 0.0) {
            p = 1.0;  // uniform on (0, 1]
        }
        clusters.push_back(Cluster{SourcePoint(phi, theta, d), p});
        power_sum += p;
    }
    for (Cluster& c : clusters) {
        c.power /= power_sum;
    }
    return ClusterSet(std::move(clusters), config.beta);
}

Eigen::VectorXcd sample_channel(const ClusterSet& clusters, const ArrayGeometry& geometry,
                                std::mt19937_64& rng, ResponseFlavor flavor) {
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(geometry.size());
    for (const Cluster& c : clusters.clusters) {
        const std::complex<double> gain =
            std::sqrt(clusters.beta * c.power) * complex_normal(rng);
        h += gain * response(geometry, c.point, flavor);
    }
    return h;
}

Subspace cached_subspace(const ArrayGeometry& geometry, const ScatteringRegion& region,
                         double beta, double fraction, bool far_field,
                         const std::string& cache_dir) {
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        char name[64];
        std::snprintf(name, sizeof(name), "subspace_%016llx.bin",
                      static_cast<unsigned long long>(
                          subspace_key(geometry, region, beta, fraction, far_field)));
        file = std::filesystem::path(cache_dir) / name;
        Subspace loaded{Eigen::MatrixXcd(), 0, fraction};
        if (load_subspace(file, geometry.size(), fraction, loaded)) {
            return loaded;
        }
    }
    const CorrelationMatrix r =
        far_field ? far_field_representative_correlation(geometry, region, beta)
                  : representative_correlation(geometry, region, beta);
    Subspace s = build_subspace(r, fraction);
    if (!cache_dir.empty()) {
        store_subspace(file, s);
    }
    return s;
}

NmseCurve run_nmse_experiment(const ExperimentConfig& config, const std::string& cache_dir) {
    const Subspace nf = cached_subspace(config.geometry, config.region, config.beta,
                                        config.rank_fraction, false, cache_dir);
    const Subspace ff = cached_subspace(config.geometry, config.region, config.beta,
                                        config.rank_fraction, true, cache_dir);
    return run_nmse_experiment(config, nf, ff);
}

NmseCurve run_nmse_experiment(const ExperimentConfig& config, const Subspace& nf_subspace,
                              const Subspace& ff_subspace) {
    if (config.trials < 1 || config.max_blocks < 1) {
        throw std::invalid_argument("trials and max_blocks must be >= 1");
    }
    const int trials = config.trials;
    const int blocks = config.max_blocks;
    const double rho = config.snr_linear();
    const int m_total = config.geometry.size();

    // samples[est][block * trials + trial]
    std::vector<std::vector<ErrorSample>> samples(
        kNumEstimators, std::vector<ErrorSample>(static_cast<std::size_t>(blocks) * trials));

    const auto run_trial = [&](int trial) {
        std::mt19937_64 rng = trial_rng(config.seed, static_cast<std::uint64_t>(trial));
        const ClusterSet clusters = sample_clusters(config, rng);

        const int k_count = static_cast<int>(clusters.clusters.size());
        Eigen::MatrixXcd b(m_total, k_count);
        Eigen::VectorXd cluster_power(k_count);
        for (int k = 0; k < k_count; ++k) {
            b.col(k) = response(config.geometry, clusters.clusters[k].point, config.flavor);
            cluster_power(k) = clusters.beta * clusters.clusters[k].power;
        }
        Eigen::MatrixXcd r_entries = b * cluster_power.asDiagonal() * b.adjoint();
        r_entries = (r_entries + r_entries.adjoint().eval()) / 2.0;
        const CorrelationMatrix r{std::move(r_entries), clusters.beta};
        const MmseFilter mmse(r, rho);

        DimensionPowerTracker nf_tracker(nf_subspace.rank);
        DimensionPowerTracker ff_tracker(ff_subspace.rank);
        for (int block = 0; block < blocks; ++block) {
            Eigen::VectorXcd gains(k_count);
            for (int k = 0; k < k_count; ++k) {
                gains(k) = std::sqrt(cluster_power(k)) * complex_normal(rng);
            }
            const Eigen::VectorXcd h = b * gains;
            Eigen::VectorXcd noise(m_total);
            for (int i = 0; i < m_total; ++i) {
                noise(i) = complex_normal(rng);
            }
            const PilotObservation obs(std::sqrt(rho) * h + noise, rho);

            const double h_power = h.squaredNorm();
            const auto record = [&](int est, const Eigen::VectorXcd& estimate) {
                ErrorSample& slot = samples[est][static_cast<std::size_t>(block) * trials + trial];
                slot.error = (h - estimate).squaredNorm();
                slot.power = h_power;
            };
            record(0, mmse.estimate(obs.y));
            record(1, ls_estimate(obs));
            record(2, rsls_estimate(obs, nf_subspace));
            record(3, rsls_estimate(obs, ff_subspace));
            record(4, nf_tracker.blocks() >= 1
                          ? dynamic_rsls_estimate(obs, nf_subspace, nf_tracker)
                          : rsls_estimate(obs, nf_subspace));
            record(5, ff_tracker.blocks() >= 1
                          ? dynamic_rsls_estimate(obs, ff_subspace, ff_tracker)
                          : rsls_estimate(obs, ff_subspace));
            nf_tracker = tracker_update(nf_tracker, obs, nf_subspace);
            ff_tracker = tracker_update(ff_tracker, obs, ff_subspace);
        }
    };

    const int threads = std::min(resolve_threads(config.threads), trials);
    if (threads <= 1) {
        for (int t = 0; t < trials; ++t) {
            run_trial(t);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (int t = w; t < trials; t += threads) {
                    run_trial(t);
                }
            });
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }

    NmseCurve curve;
    for (int est = 0; est < kNumEstimators; ++est) {
        EstimatorCurve ec;
        ec.name = kEstimatorNames[est];
        ec.nmse.resize(blocks);
        ec.standard_error.resize(blocks);
        if (est >= kFirstDynamicIndex) {
            for (int block = 0; block < blocks; ++block) {
                std::vector<ErrorSample> block_samples(
                    samples[est].begin() + static_cast<std::ptrdiff_t>(block) * trials,
                    samples[est].begin() + static_cast<std::ptrdiff_t>(block + 1) * trials);
                reduce_samples(block_samples, ec.nmse[block], ec.standard_error[block]);
            }
        } else {
            // Block-independent estimators: pool all blocks of a trial into one
            // sample and report a flat curve.
            std::vector<ErrorSample> per_trial(trials);
            for (int block = 0; block < blocks; ++block) {
                for (int t = 0; t < trials; ++t) {
                    per_trial[t].error += samples[est][static_cast<std::size_t>(block) * trials + t].error;
                    per_trial[t].power += samples[est][static_cast<std::size_t>(block) * trials + t].power;
                }
            }
            double nmse = 0.0;
            double se = 0.0;
            reduce_samples(per_trial, nmse, se);
            std::fill(ec.nmse.begin(), ec.nmse.end(), nmse);
            std::fill(ec.standard_error.begin(), ec.standard_error.end(), se);
        }
        curve.estimators.push_back(std::move(ec));
    }
    return curve;
}

}  // namespace nfchan
