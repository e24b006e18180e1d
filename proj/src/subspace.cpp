// SPDX-License-Identifier: Apache-2.0
#include "nfchan/subspace.hpp"

#include <stdexcept>

namespace nfchan {

EigenSpectrum eigendecompose(const CorrelationMatrix& matrix) {
    const Eigen::MatrixXcd& r = matrix.entries;
    if (r.rows() != r.cols()) {
        throw std::invalid_argument("correlation matrix must be square");
    }
    const double scale = r.cwiseAbs().maxCoeff();
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1.0)) {
        throw std::invalid_argument("correlation matrix is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition failed");
    }
    // Eigen sorts ascending; flip to descending.
    const Eigen::Index m = r.rows();
    EigenSpectrum spectrum;
    spectrum.eigenvalues = solver.eigenvalues().reverse();
    spectrum.eigenvectors = solver.eigenvectors().rowwise().reverse();

    const double total = spectrum.eigenvalues.sum();
    const double floor = -1e-9 * total / static_cast<double>(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double& v = spectrum.eigenvalues(i);
        if (v < 0.0) {
            if (v < floor) {
                throw std::runtime_error(
                    "correlation matrix has a significantly negative eigenvalue");
            }
            v = 0.0;
        }
    }
    return spectrum;
}

int effective_rank(const EigenSpectrum& spectrum, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("rank fraction must lie in (0, 1]");
    }
    const double target = fraction * spectrum.eigenvalues.sum();
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        cumulative += spectrum.eigenvalues(i);
        if (cumulative >= target) {
            return static_cast<int>(i) + 1;
        }
    }
    return static_cast<int>(spectrum.eigenvalues.size());
}

Subspace build_subspace(const EigenSpectrum& spectrum, double fraction) {
    const int rank = effective_rank(spectrum, fraction);
    return Subspace{spectrum.eigenvectors.leftCols(rank), rank, fraction};
}

Subspace build_subspace(const CorrelationMatrix& matrix, double fraction) {
    return build_subspace(eigendecompose(matrix), fraction);
}

Projection project(const Subspace& subspace, const Eigen::VectorXcd& vector) {
    if (vector.size() != subspace.basis.rows()) {
        throw std::invalid_argument("vector dimension does not match subspace");
    }
    Projection p;
    p.coefficients = subspace.basis.adjoint() * vector;
    const double norm = vector.norm();
    if (norm == 0.0) {
        p.residual_norm = 0.0;
    } else {
        p.residual_norm = (vector - subspace.basis * p.coefficients).norm() / norm;
    }
    return p;
}

}  // namespace nfchan
