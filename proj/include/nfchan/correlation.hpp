// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "nfchan/geometry.hpp"
#include "nfchan/response.hpp"

namespace nfchan {

// Axis-aligned coverage box [phi1,phi2] x [theta1,theta2] x [d1,d2] enclosing
// all scatterer locations. Angles in radians, distances in meters.
struct ScatteringRegion {
    double phi1;
    double phi2;
    double theta1;
    double theta2;
    double d1;
    double d2;

    ScatteringRegion(double phi1_rad, double phi2_rad, double theta1_rad, double theta2_rad,
                     double d1_m, double d2_m);

    // Normalization constant of the separable scattering density
    // c * cos(phi) cos(theta) / d^2 used for the representative matrix.
    double normalization() const;

    bool contains(const SourcePoint& p) const;
};

struct Cluster {
    SourcePoint point;
    double power;
};

// Discrete (Dirac-type) scattering description: cluster locations with
// normalized power weights summing to one, plus the average channel gain.
struct ClusterSet {
    std::vector<Cluster> clusters;
    double beta;

    ClusterSet(std::vector<Cluster> clusters_in, double beta_in);
};

// M x M Hermitian PSD spatial correlation matrix with trace M * beta.
struct CorrelationMatrix {
    Eigen::MatrixXcd entries;
    double beta;
};

// Exact correlation matrix of a discrete cluster set:
// beta * sum_k p_k b_k b_k^H.
CorrelationMatrix cluster_correlation(const ArrayGeometry& geometry, const ClusterSet& clusters,
                                      ResponseFlavor flavor = ResponseFlavor::fresnel);

// Distance-integral factor of the closed-form representative matrix for
// k = i_n^2 + j_n^2 - i_m^2 - j_m^2. Equals 1/d1 - 1/d2 at k = 0.
std::complex<double> s_factor(const ArrayGeometry& geometry, const ScatteringRegion& region,
                              long long k);

// Representative correlation matrix from the single-integral reduction of the
// coverage-region triple integral (Fresnel responses).
CorrelationMatrix representative_correlation(const ArrayGeometry& geometry,
                                             const ScatteringRegion& region, double beta);

// Same angular integrals with the distance phase dropped (planar-wavefront
// assumption); distances enter only through the density normalization.
CorrelationMatrix far_field_representative_correlation(const ArrayGeometry& geometry,
                                                       const ScatteringRegion& region,
                                                       double beta);

// Brute-force tensor-product Gauss-Legendre evaluation of the triple
// integral; validation reference for the closed form. Intended for small M.
CorrelationMatrix oracle_correlation(const ArrayGeometry& geometry,
                                     const ScatteringRegion& region, double beta,
                                     int nodes_per_axis);

namespace detail {

// Single entry of the representative matrix as a function of the index
// differences di = i_n - i_m, dj = j_n - j_m and k = i_n^2+j_n^2-i_m^2-j_m^2.
// No caching; used by the matrix constructors and by memoization tests.
std::complex<double> representative_entry(const ArrayGeometry& geometry,
                                          const ScatteringRegion& region, double beta, int di,
                                          int dj, long long k, bool far_field);

}  // namespace detail

}  // namespace nfchan
