// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

namespace nfchan {

// Uniform planar array lying in the yz-plane with its corner element at the
// origin. Antennas are indexed row by row with a 1-based flat index; all
// lengths are in meters.
class ArrayGeometry {
public:
    ArrayGeometry(int antennas_per_row, int antennas_per_column,
                  double spacing_m, double wavelength_m);

    int antennas_per_row() const { return m_h_; }
    int antennas_per_column() const { return m_v_; }
    int size() const { return m_h_ * m_v_; }
    double spacing() const { return spacing_; }
    double wavelength() const { return wavelength_; }

    // Aperture length: diagonal of the array.
    double aperture() const {
        return spacing_ * std::sqrt(static_cast<double>(m_h_) * m_h_ +
                                    static_cast<double>(m_v_) * m_v_);
    }

    // Far-field boundary 2 D^2 / lambda.
    double fraunhofer_distance() const;

    // Lower boundary of the radiative near field, 0.62 sqrt(D^3 / lambda).
    double fresnel_distance() const;

private:
    int m_h_;
    int m_v_;
    double spacing_;
    double wavelength_;
};

// Horizontal/vertical grid indices of a flat antenna index. The flat index m
// is 1-based; i and j are 0-based grid coordinates.
struct AntennaIndex {
    int m;
    int i;
    int j;
};

// Splits the 1-based flat index into grid coordinates. Throws
// std::out_of_range when m is outside [1, M].
AntennaIndex antenna_index(const ArrayGeometry& geometry, int m);

// Position of antenna m relative to the origin, [0, i*spacing, j*spacing].
std::array<double, 3> antenna_position(const ArrayGeometry& geometry, int m);

}  // namespace nfchan
