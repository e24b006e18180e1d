// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "nfchan/geometry.hpp"

namespace nfchan {

// A point source described in spherical coordinates relative to the array
// corner: azimuth and elevation in radians, distance in meters. Both angles
// are restricted to [-pi/2, pi/2] (sources in front of the array).
struct SourcePoint {
    double azimuth;
    double elevation;
    double distance;

    SourcePoint(double azimuth_rad, double elevation_rad, double distance_m);
};

using ResponseVector = Eigen::VectorXcd;

enum class ResponseFlavor { exact, fresnel };

// Exact Euclidean distance from antenna m (1-based) to the source.
double element_distance(const ArrayGeometry& geometry, const SourcePoint& point, int m);

// Near-field response with exact per-element distances; entry m is
// exp(-i (2 pi / lambda) (r_m - r)). The first entry is always 1.
ResponseVector exact_response(const ArrayGeometry& geometry, const SourcePoint& point);

// Near-field response under the Fresnel (quadratic phase) approximation.
ResponseVector fresnel_response(const ArrayGeometry& geometry, const SourcePoint& point);

ResponseVector response(const ArrayGeometry& geometry, const SourcePoint& point,
                        ResponseFlavor flavor);

// Planar-wavefront limit; depends on angles only.
ResponseVector far_field_response(const ArrayGeometry& geometry, double azimuth_rad,
                                  double elevation_rad);

}  // namespace nfchan
