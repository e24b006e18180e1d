// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "nfchan/correlation.hpp"

namespace nfchan {

// Full Hermitian eigendecomposition with eigenvalues sorted descending and
// columns of `eigenvectors` paired with them.
struct EigenSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

// Semi-unitary basis of the dominant eigenspace.
struct Subspace {
    Eigen::MatrixXcd basis;
    int rank;
    double retained_fraction;
};

struct Projection {
    Eigen::VectorXcd coefficients;
    double residual_norm;  // ||v - U U^H v|| / ||v||
};

// Default eigenvalue-sum fraction for effective-rank truncation.
inline constexpr double kDefaultRankFraction = 1.0 - 1e-6;

// Decomposes a correlation matrix. Throws std::invalid_argument when the
// input deviates from Hermitian beyond tolerance, std::runtime_error when the
// solver fails or the spectrum has a significantly negative eigenvalue.
EigenSpectrum eigendecompose(const CorrelationMatrix& matrix);

// Smallest r such that the top-r eigenvalue sum reaches fraction * total.
int effective_rank(const EigenSpectrum& spectrum, double fraction = kDefaultRankFraction);

Subspace build_subspace(const CorrelationMatrix& matrix,
                        double fraction = kDefaultRankFraction);

Subspace build_subspace(const EigenSpectrum& spectrum, double fraction = kDefaultRankFraction);

Projection project(const Subspace& subspace, const Eigen::VectorXcd& vector);

}  // namespace nfchan
