// SPDX-License-Identifier: Apache-2.0
#include "nfchan/geometry.hpp"

#include <stdexcept>
#include <string>

namespace nfchan {

ArrayGeometry::ArrayGeometry(int antennas_per_row, int antennas_per_column,
                             double spacing_m, double wavelength_m)
    : m_h_(antennas_per_row),
      m_v_(antennas_per_column),
      spacing_(spacing_m),
      wavelength_(wavelength_m) {
    if (m_h_ < 1 || m_v_ < 1) {
        throw std::invalid_argument("array must have at least one antenna per row and column");
    }
    if (!(spacing_ > 0.0)) {
        throw std::invalid_argument("antenna spacing must be positive");
    }
    if (!(wavelength_ > 0.0)) {
        throw std::invalid_argument("wavelength must be positive");
    }
}

double ArrayGeometry::fraunhofer_distance() const {
    const double d = aperture();
    return 2.0 * d * d / wavelength_;
}

double ArrayGeometry::fresnel_distance() const {
    const double d = aperture();
    return 0.62 * std::sqrt(d * d * d / wavelength_);
}

AntennaIndex antenna_index(const ArrayGeometry& geometry, int m) {
    if (m < 1 || m > geometry.size()) {
        throw std::out_of_range("antenna index " + std::to_string(m) +
                                " outside [1, " + std::to_string(geometry.size()) + "]");
    }
    const int i = (m - 1) % geometry.antennas_per_row();
    const int j = (m - 1) / geometry.antennas_per_row();
    return AntennaIndex{m, i, j};
}

std::array<double, 3> antenna_position(const ArrayGeometry& geometry, int m) {
    const AntennaIndex idx = antenna_index(geometry, m);
    return {0.0, idx.i * geometry.spacing(), idx.j * geometry.spacing()};
}

}  // namespace nfchan
