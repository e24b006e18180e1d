// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "nfchan/correlation.hpp"
#include "nfchan/subspace.hpp"

namespace nfchan {

// One received pilot: y = sqrt(rho) h + n with n ~ CN(0, I). snr is the
// linear-scale pilot SNR rho.
struct PilotObservation {
    Eigen::VectorXcd y;
    double snr;

    PilotObservation(Eigen::VectorXcd y_in, double snr_in);
};

// Running mean of per-dimension pilot powers |u_i^H y|^2 across coherence
// blocks. Updated functionally; a value with blocks() == 0 has seen nothing.
class DimensionPowerTracker {
public:
    explicit DimensionPowerTracker(int rank)
        : mean_power_(Eigen::VectorXd::Zero(rank)), blocks_(0) {}

    const Eigen::VectorXd& mean_power() const { return mean_power_; }
    long blocks() const { return blocks_; }

private:
    Eigen::VectorXd mean_power_;
    long blocks_;

    friend DimensionPowerTracker tracker_update(const DimensionPowerTracker&,
                                                const PilotObservation&, const Subspace&);
};

// sqrt(rho) R (rho R + I)^{-1} y via an LDLT solve.
Eigen::VectorXcd mmse_estimate(const PilotObservation& obs, const CorrelationMatrix& r);

// Reusable MMSE filter: factors (rho R + I) once and serves many pilots.
class MmseFilter {
public:
    MmseFilter(const CorrelationMatrix& r, double snr);
    Eigen::VectorXcd estimate(const Eigen::VectorXcd& y) const;

private:
    Eigen::MatrixXcd r_;
    double snr_;
    Eigen::LDLT<Eigen::MatrixXcd> factor_;
};

// Closed-form normalized MSE of the MMSE estimator,
// tr(R - rho R (rho R + I)^{-1} R) / tr(R).
double mmse_analytic_nmse(const CorrelationMatrix& r, double snr);

Eigen::VectorXcd ls_estimate(const PilotObservation& obs);

// LS inside the reduced subspace, mapped back: U U^H y / sqrt(rho).
Eigen::VectorXcd rsls_estimate(const PilotObservation& obs, const Subspace& subspace);

// Returns a tracker with the observation's per-dimension powers folded into
// the running means.
DimensionPowerTracker tracker_update(const DimensionPowerTracker& tracker,
                                     const PilotObservation& obs, const Subspace& subspace);

// RS-LS with per-dimension scaling (lambda_i - 1)/lambda_i learned from the
// tracker, clamped to [0, 1). Requires at least one tracked block.
Eigen::VectorXcd dynamic_rsls_estimate(const PilotObservation& obs, const Subspace& subspace,
                                       const DimensionPowerTracker& tracker);

}  // namespace nfchan
