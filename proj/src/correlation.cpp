// SPDX-License-Identifier: Apache-2.0
#include "nfchan/correlation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "nfchan/quadrature.hpp"

namespace nfchan {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kNodesPerPanel = 16;

int theta_panel_count(const ArrayGeometry& geometry, int di, int dj) {
    // Integrand oscillation frequency grows with the phase gradient, so the
    // panel count scales with |di| + |dj| in units of 2*spacing/wavelength.
    const double cycles =
        2.0 * geometry.spacing() / geometry.wavelength() * (std::abs(di) + std::abs(dj));
    return 1 + static_cast<int>(std::ceil(cycles));
}

// Remaining 1-D integral of the di != 0 branch.
std::complex<double> theta_integral(const ArrayGeometry& geometry, const ScatteringRegion& region,
                                    int di, int dj, const QuadratureRule& rule) {
    const double kappa = 2.0 * std::numbers::pi * geometry.spacing() / geometry.wavelength();
    const double sin_phi1 = std::sin(region.phi1);
    const double sin_phi2 = std::sin(region.phi2);
    const auto integrand = [&](double theta) {
        const double c = std::cos(theta);
        return std::exp(kImag * (kappa * dj * std::sin(theta))) *
               (std::exp(kImag * (kappa * di * c * sin_phi2)) -
                std::exp(kImag * (kappa * di * c * sin_phi1)));
    };
    return integrate_panels<std::complex<double>>(integrand, region.theta1, region.theta2, rule,
                                                  theta_panel_count(geometry, di, dj));
}

std::complex<double> entry_impl(const ArrayGeometry& geometry, const ScatteringRegion& region,
                                double beta, int di, int dj,
                                std::complex<double> distance_factor,
                                std::complex<double> integral_di_dj) {
    const double kappa = 2.0 * std::numbers::pi * geometry.spacing() / geometry.wavelength();
    const double c = region.normalization();
    if (di != 0) {
        return c * beta * distance_factor * (-kImag / (kappa * di)) * integral_di_dj;
    }
    if (dj != 0) {
        const std::complex<double> theta_part =
            std::exp(kImag * (kappa * dj * std::sin(region.theta2))) -
            std::exp(kImag * (kappa * dj * std::sin(region.theta1)));
        return c * beta * distance_factor * (std::sin(region.phi2) - std::sin(region.phi1)) *
               (-kImag / (kappa * dj)) * theta_part;
    }
    // di == dj == 0 happens only on the diagonal of a proper grid, where every
    // phase factor drops and the density normalization leaves exactly beta.
    return std::complex<double>{beta, 0.0};
}

std::complex<double> distance_factor(const ArrayGeometry& geometry, const ScatteringRegion& region,
                                     long long k, bool far_field) {
    if (far_field || k == 0) {
        return {1.0 / region.d1 - 1.0 / region.d2, 0.0};
    }
    return s_factor(geometry, region, k);
}

CorrelationMatrix build_representative(const ArrayGeometry& geometry,
                                       const ScatteringRegion& region, double beta,
                                       bool far_field) {
    const int m_total = geometry.size();
    const QuadratureRule rule = gauss_legendre(kNodesPerPanel);

    // The theta integral depends only on (di, dj); the distance factor is
    // closed form. Caching the integrals collapses the M^2 cost to the number
    // of distinct index-difference pairs.
    std::unordered_map<long long, std::complex<double>> integrals;
    const long long stride = 2LL * geometry.antennas_per_column() + 1;
    const auto integral_for = [&](int di, int dj) {
        const long long key = di * stride + dj;
        auto it = integrals.find(key);
        if (it == integrals.end()) {
            it = integrals.emplace(key, theta_integral(geometry, region, di, dj, rule)).first;
        }
        return it->second;
    };

    Eigen::MatrixXcd r(m_total, m_total);
    for (int n = 1; n <= m_total; ++n) {
        const AntennaIndex an = antenna_index(geometry, n);
        for (int m = n; m <= m_total; ++m) {
            const AntennaIndex am = antenna_index(geometry, m);
            const int di = an.i - am.i;
            const int dj = an.j - am.j;
            const long long k =
                static_cast<long long>(an.i) * an.i + static_cast<long long>(an.j) * an.j -
                static_cast<long long>(am.i) * am.i - static_cast<long long>(am.j) * am.j;
            const std::complex<double> integral =
                di != 0 ? integral_for(di, dj) : std::complex<double>{};
            const std::complex<double> value = entry_impl(
                geometry, region, beta, di, dj, distance_factor(geometry, region, k, far_field),
                integral);
            r(n - 1, m - 1) = value;
            r(m - 1, n - 1) = std::conj(value);
        }
    }
    return CorrelationMatrix{std::move(r), beta};
}

}  // namespace

ScatteringRegion::ScatteringRegion(double phi1_rad, double phi2_rad, double theta1_rad,
                                   double theta2_rad, double d1_m, double d2_m)
    : phi1(phi1_rad), phi2(phi2_rad), theta1(theta1_rad), theta2(theta2_rad), d1(d1_m), d2(d2_m) {
    if (!(phi1 >= -kHalfPi && phi1 < phi2 && phi2 <= kHalfPi)) {
        throw std::invalid_argument("azimuth bounds must satisfy -pi/2 <= phi1 < phi2 <= pi/2");
    }
    if (!(theta1 >= -kHalfPi && theta1 < theta2 && theta2 <= kHalfPi)) {
        throw std::invalid_argument("elevation bounds must satisfy -pi/2 <= theta1 < theta2 <= pi/2");
    }
    if (!(d1 > 0.0 && d1 < d2)) {
        throw std::invalid_argument("distance bounds must satisfy 0 < d1 < d2");
    }
}

double ScatteringRegion::normalization() const {
    return d1 * d2 / (d2 - d1) /
           ((std::sin(theta2) - std::sin(theta1)) * (std::sin(phi2) - std::sin(phi1)));
}

bool ScatteringRegion::contains(const SourcePoint& p) const {
    return p.azimuth >= phi1 && p.azimuth <= phi2 && p.elevation >= theta1 &&
           p.elevation <= theta2 && p.distance >= d1 && p.distance <= d2;
}

ClusterSet::ClusterSet(std::vector<Cluster> clusters_in, double beta_in)
    : clusters(std::move(clusters_in)), beta(beta_in) {
    if (clusters.empty()) {
        throw std::invalid_argument("cluster set must not be empty");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("average gain beta must be positive");
    }
    double sum = 0.0;
    for (const Cluster& c : clusters) {
        if (!(c.power >= 0.0)) {
            throw std::invalid_argument("cluster powers must be non-negative");
        }
        sum += c.power;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("cluster powers must sum to 1");
    }
}

CorrelationMatrix cluster_correlation(const ArrayGeometry& geometry, const ClusterSet& clusters,
                                      ResponseFlavor flavor) {
    const int m_total = geometry.size();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(m_total, m_total);
    for (const Cluster& c : clusters.clusters) {
        const ResponseVector b = response(geometry, c.point, flavor);
        r.noalias() += (clusters.beta * c.power) * b * b.adjoint();
    }
    // Outer-product sums drift off Hermitian at the last ulp; re-symmetrize.
    r = (r + r.adjoint().eval()) / 2.0;
    return CorrelationMatrix{std::move(r), clusters.beta};
}

std::complex<double> s_factor(const ArrayGeometry& geometry, const ScatteringRegion& region,
                              long long k) {
    if (k == 0) {
        return {1.0 / region.d1 - 1.0 / region.d2, 0.0};
    }
    const double a = std::numbers::pi * geometry.spacing() * geometry.spacing() * k /
                     geometry.wavelength();
    return (-kImag / a) *
           (std::exp(-kImag * (a / region.d2)) - std::exp(-kImag * (a / region.d1)));
}

CorrelationMatrix representative_correlation(const ArrayGeometry& geometry,
                                             const ScatteringRegion& region, double beta) {
    return build_representative(geometry, region, beta, false);
}

CorrelationMatrix far_field_representative_correlation(const ArrayGeometry& geometry,
                                                       const ScatteringRegion& region,
                                                       double beta) {
    return build_representative(geometry, region, beta, true);
}

CorrelationMatrix oracle_correlation(const ArrayGeometry& geometry, const ScatteringRegion& region,
                                     double beta, int nodes_per_axis) {
    if (nodes_per_axis < 2) {
        throw std::invalid_argument("oracle quadrature needs at least 2 nodes per axis");
    }
    const int m_total = geometry.size();
    const QuadratureRule rule = gauss_legendre(nodes_per_axis);
    const double c = region.normalization();

    const auto scaled = [&](double lo, double hi, int q) {
        return 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
    };
    const double jac = 0.125 * (region.phi2 - region.phi1) * (region.theta2 - region.theta1) *
                       (region.d2 - region.d1);

    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(m_total, m_total);
    for (int qp = 0; qp < nodes_per_axis; ++qp) {
        const double phi = scaled(region.phi1, region.phi2, qp);
        for (int qt = 0; qt < nodes_per_axis; ++qt) {
            const double theta = scaled(region.theta1, region.theta2, qt);
            for (int qd = 0; qd < nodes_per_axis; ++qd) {
                const double d = scaled(region.d1, region.d2, qd);
                const double density = c * std::cos(phi) * std::cos(theta) / (d * d);
                const double weight = jac * rule.weights[qp] * rule.weights[qt] *
                                      rule.weights[qd] * beta * density;
                const ResponseVector b =
                    fresnel_response(geometry, SourcePoint(phi, theta, d));
                r.noalias() += weight * b * b.adjoint();
            }
        }
    }
    r = (r + r.adjoint().eval()) / 2.0;
    return CorrelationMatrix{std::move(r), beta};
}

namespace detail {

std::complex<double> representative_entry(const ArrayGeometry& geometry,
                                          const ScatteringRegion& region, double beta, int di,
                                          int dj, long long k, bool far_field) {
    const QuadratureRule rule = gauss_legendre(kNodesPerPanel);
    const std::complex<double> integral =
        di != 0 ? theta_integral(geometry, region, di, dj, rule) : std::complex<double>{};
    return entry_impl(geometry, region, beta, di, dj,
                      distance_factor(geometry, region, k, far_field), integral);
}

}  // namespace detail

}  // namespace nfchan
