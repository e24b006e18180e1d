// SPDX-License-Identifier: Apache-2.0
#include "nfchan/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace nfchan {

namespace {

void check_dimension(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + " dimension mismatch");
    }
}

}  // namespace

PilotObservation::PilotObservation(Eigen::VectorXcd y_in, double snr_in)
    : y(std::move(y_in)), snr(snr_in) {
    if (!(snr > 0.0)) {
        throw std::invalid_argument("pilot SNR must be positive");
    }
}

MmseFilter::MmseFilter(const CorrelationMatrix& r, double snr) : r_(r.entries), snr_(snr) {
    if (r_.rows() != r_.cols()) {
        throw std::invalid_argument("correlation matrix must be square");
    }
    Eigen::MatrixXcd a = snr_ * r_;
    a.diagonal().array() += 1.0;
    factor_.compute(a);
    if (factor_.info() != Eigen::Success) {
        throw std::runtime_error("failed to factor (rho R + I)");
    }
}

Eigen::VectorXcd MmseFilter::estimate(const Eigen::VectorXcd& y) const {
    check_dimension(y.size(), r_.rows(), "observation");
    return std::sqrt(snr_) * (r_ * factor_.solve(y));
}

Eigen::VectorXcd mmse_estimate(const PilotObservation& obs, const CorrelationMatrix& r) {
    return MmseFilter(r, obs.snr).estimate(obs.y);
}

double mmse_analytic_nmse(const CorrelationMatrix& r, double snr) {
    Eigen::MatrixXcd a = snr * r.entries;
    a.diagonal().array() += 1.0;
    const Eigen::MatrixXcd error =
        r.entries - snr * r.entries * a.ldlt().solve(r.entries);
    return error.real().trace() / r.entries.real().trace();
}

Eigen::VectorXcd ls_estimate(const PilotObservation& obs) {
    return obs.y / std::sqrt(obs.snr);
}

Eigen::VectorXcd rsls_estimate(const PilotObservation& obs, const Subspace& subspace) {
    check_dimension(obs.y.size(), subspace.basis.rows(), "observation");
    return subspace.basis * (subspace.basis.adjoint() * obs.y) / std::sqrt(obs.snr);
}

DimensionPowerTracker tracker_update(const DimensionPowerTracker& tracker,
                                     const PilotObservation& obs, const Subspace& subspace) {
    check_dimension(obs.y.size(), subspace.basis.rows(), "observation");
    check_dimension(tracker.mean_power().size(), subspace.basis.cols(), "tracker");
    const Eigen::VectorXd power =
        (subspace.basis.adjoint() * obs.y).cwiseAbs2();
    DimensionPowerTracker next = tracker;
    next.blocks_ += 1;
    next.mean_power_ += (power - next.mean_power_) / static_cast<double>(next.blocks_);
    return next;
}

Eigen::VectorXcd dynamic_rsls_estimate(const PilotObservation& obs, const Subspace& subspace,
                                       const DimensionPowerTracker& tracker) {
    if (tracker.blocks() < 1) {
        throw std::logic_error(
            "dimension power tracker has no observed blocks; use rsls_estimate for the first block");
    }
    check_dimension(obs.y.size(), subspace.basis.rows(), "observation");
    check_dimension(tracker.mean_power().size(), subspace.basis.cols(), "tracker");
    Eigen::VectorXcd coeff = subspace.basis.adjoint() * obs.y;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
        const double lambda = tracker.mean_power()(i);
        // Sample power below the unit noise floor means the dimension carries
        // no detectable signal; the raw (lambda-1)/lambda would go negative.
        const double gain = lambda > 1.0 ? (lambda - 1.0) / lambda : 0.0;
        coeff(i) *= gain;
    }
    return subspace.basis * coeff / std::sqrt(obs.snr);
}

}  // namespace nfchan
