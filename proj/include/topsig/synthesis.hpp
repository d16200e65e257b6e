#pragma once

#include <vector>

#include "topsig/field_maps.hpp"

namespace topsig {

struct TorusSpec {
    double major_radius = 2.0;
    double minor_radius = 0.7;
    int u_steps = 30; // around the central axis
    int v_steps = 20; // around the tube
    /// Alternate the quad diagonal in a checkerboard instead of always (u,v)->(u+1,v+1).
    bool alternate_diagonals = false;
};

/// Regular parametric grid with wraparound; each quad split into two
/// triangles with outward winding. Coordinates shifted to a zero minimum on every axis.
MeshData make_torus(const TorusSpec& spec);

/// Icosahedron refined `subdivisions` times (each level quadruples T), projected
/// to the unit sphere and scaled per axis. Outward winding.
MeshData make_spheroid(int subdivisions, const Vec3& radii = Vec3::Ones());

struct ColorAssignment {
    NodeVectorField colors;
    /// Axes whose coordinate range is empty; their channel is set to 0.
    std::vector<int> degenerate_axes;
};

/// R, G, B = (coordinate - min) / (max - min) per axis, so values are in [0, 1].
ColorAssignment assign_coordinate_colors(const PointCloud& points);

} // namespace topsig
