// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nfchan/correlation.hpp"
#include "nfchan/estimators.hpp"
#include "nfchan/subspace.hpp"

namespace nfchan {

// Full description of one Monte Carlo experiment. The seed determines every
// random draw; trials derive independent streams from (seed, trial index) so
// results do not depend on execution order or worker count.
struct ExperimentConfig {
    ArrayGeometry geometry;
    ScatteringRegion region;
    int cluster_count = 10;
    double snr_db = 0.0;
    double beta = 1.0;
    int trials = 2000;
    int max_blocks = 10;
    std::uint64_t seed = 1;
    ResponseFlavor flavor = ResponseFlavor::fresnel;
    double rank_fraction = kDefaultRankFraction;
    int threads = 0;  // 0: NFCHAN_THREADS env var, else hardware concurrency

    ExperimentConfig(ArrayGeometry geometry_in, ScatteringRegion region_in);

    double snr_linear() const;
};

struct EstimatorCurve {
    std::string name;
    std::vector<double> nmse;          // one value per coherence block
    std::vector<double> standard_error;
};

struct NmseCurve {
    std::vector<EstimatorCurve> estimators;

    const EstimatorCurve& at(const std::string& name) const;
};

// Deterministic per-trial RNG stream.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream);

// One draw of CN(0, 1) (unit variance split across real and imaginary parts).
std::complex<double> complex_normal(std::mt19937_64& rng);

// Draws cluster_count scatterers uniformly over the coverage box with
// uniform-then-normalized power weights.
ClusterSet sample_clusters(const ExperimentConfig& config, std::mt19937_64& rng);

// One channel realization h = sum_k g_k b_k with per-cluster gains
// g_k ~ CN(0, beta p_k); conditioned on the clusters, h ~ CN(0, R).
Eigen::VectorXcd sample_channel(const ClusterSet& clusters, const ArrayGeometry& geometry,
                                std::mt19937_64& rng, ResponseFlavor flavor);

// Runs the full estimator comparison. The near-field and far-field subspaces
// are built from the representative correlation matrices of the config's
// region (or loaded from cache_dir when previously computed there).
NmseCurve run_nmse_experiment(const ExperimentConfig& config,
                              const std::string& cache_dir = "");

// Variant with externally supplied subspaces (cluster-independent).
NmseCurve run_nmse_experiment(const ExperimentConfig& config, const Subspace& nf_subspace,
                              const Subspace& ff_subspace);

// Computes (or loads from cache_dir, storing on miss) the truncated
// eigenbasis of the representative correlation matrix. An empty cache_dir
// disables caching.
Subspace cached_subspace(const ArrayGeometry& geometry, const ScatteringRegion& region,
                         double beta, double fraction, bool far_field,
                         const std::string& cache_dir);

}  // namespace nfchan
