// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace nfchan {

// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Computes the n-point Gauss-Legendre rule by Newton iteration on the
// Legendre polynomial roots. n must be >= 1.
QuadratureRule gauss_legendre(int n);

// Integrates f over [a, b] with an n-point Gauss-Legendre rule split into
// `panels` equal sub-intervals. F is callable double -> T for any T with
// + and scalar *.
template <typename T, typename F>
T integrate_panels(F&& f, double a, double b, const QuadratureRule& rule, int panels) {
    const double h = (b - a) / panels;
    T sum{};
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            sum += (0.5 * h * rule.weights[q]) * f(mid + 0.5 * h * rule.nodes[q]);
        }
    }
    return sum;
}

}  // namespace nfchan
