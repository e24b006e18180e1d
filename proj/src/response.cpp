// SPDX-License-Identifier: Apache-2.0
#include "nfchan/response.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfchan {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr std::complex<double> kImag{0.0, 1.0};
}  // namespace

SourcePoint::SourcePoint(double azimuth_rad, double elevation_rad, double distance_m)
    : azimuth(azimuth_rad), elevation(elevation_rad), distance(distance_m) {
    if (!(azimuth >= -kHalfPi && azimuth <= kHalfPi)) {
        throw std::invalid_argument("azimuth must lie in [-pi/2, pi/2]");
    }
    if (!(elevation >= -kHalfPi && elevation <= kHalfPi)) {
        throw std::invalid_argument("elevation must lie in [-pi/2, pi/2]");
    }
    if (!(distance > 0.0)) {
        throw std::invalid_argument("source distance must be positive");
    }
}

double element_distance(const ArrayGeometry& geometry, const SourcePoint& point, int m) {
    const AntennaIndex idx = antenna_index(geometry, m);
    const double delta = geometry.spacing();
    // Raw coordinate subtraction; the factored quadratic form cancels badly
    // when delta << r.
    const double x = point.distance * std::cos(point.elevation) * std::cos(point.azimuth);
    const double y = point.distance * std::cos(point.elevation) * std::sin(point.azimuth) -
                     idx.i * delta;
    const double z = point.distance * std::sin(point.elevation) - idx.j * delta;
    return std::sqrt(x * x + y * y + z * z);
}

ResponseVector exact_response(const ArrayGeometry& geometry, const SourcePoint& point) {
    const int m_total = geometry.size();
    const double wave_number = 2.0 * std::numbers::pi / geometry.wavelength();
    ResponseVector b(m_total);
    for (int m = 1; m <= m_total; ++m) {
        const double rm = element_distance(geometry, point, m);
        b(m - 1) = std::exp(-kImag * (wave_number * (rm - point.distance)));
    }
    return b;
}

ResponseVector fresnel_response(const ArrayGeometry& geometry, const SourcePoint& point) {
    const int m_total = geometry.size();
    const double delta = geometry.spacing();
    const double wave_number = 2.0 * std::numbers::pi / geometry.wavelength();
    const double plane_h = std::cos(point.elevation) * std::sin(point.azimuth);
    const double plane_v = std::sin(point.elevation);
    ResponseVector b(m_total);
    for (int m = 1; m <= m_total; ++m) {
        const AntennaIndex idx = antenna_index(geometry, m);
        const double plane_term = delta * (idx.i * plane_h + idx.j * plane_v);
        const double curvature_term =
            delta * delta * (static_cast<double>(idx.i) * idx.i + static_cast<double>(idx.j) * idx.j) /
            (2.0 * point.distance);
        b(m - 1) = std::exp(kImag * (wave_number * (plane_term - curvature_term)));
    }
    return b;
}

ResponseVector response(const ArrayGeometry& geometry, const SourcePoint& point,
                        ResponseFlavor flavor) {
    return flavor == ResponseFlavor::exact ? exact_response(geometry, point)
                                           : fresnel_response(geometry, point);
}

ResponseVector far_field_response(const ArrayGeometry& geometry, double azimuth_rad,
                                  double elevation_rad) {
    if (!(azimuth_rad >= -kHalfPi && azimuth_rad <= kHalfPi) ||
        !(elevation_rad >= -kHalfPi && elevation_rad <= kHalfPi)) {
        throw std::invalid_argument("angles must lie in [-pi/2, pi/2]");
    }
    const int m_total = geometry.size();
    const double delta = geometry.spacing();
    const double wave_number = 2.0 * std::numbers::pi / geometry.wavelength();
    const double plane_h = std::cos(elevation_rad) * std::sin(azimuth_rad);
    const double plane_v = std::sin(elevation_rad);
    ResponseVector b(m_total);
    for (int m = 1; m <= m_total; ++m) {
        const AntennaIndex idx = antenna_index(geometry, m);
        b(m - 1) = std::exp(kImag * (wave_number * delta * (idx.i * plane_h + idx.j * plane_v)));
    }
    return b;
}

}  // namespace nfchan
