#pragma once

#include <vector>

#include "topsig/complex.hpp"

namespace topsig {

/// One 3-vector per vertex (e.g. RGB colors).
using NodeVectorField = std::vector<Vec3>;
/// One 3-vector per triangle, evaluated at the barycenter.
using TriangleTangentField = std::vector<Vec3>;

/// Trapezoidal line integral of the field along each canonically oriented edge:
/// s_m = 0.5 * (p_hi - p_lo) . (v_lo + v_hi).
Eigen::VectorXd project_to_edges(const NodeVectorField& field, const SimplicialComplex2& complex);

/// Whitney 1-form interpolation of an edge signal evaluated at each barycenter:
/// v = (1/3) * sum over sides of s_m (grad phi_hi - grad phi_lo). Result is in-plane.
TriangleTangentField whitney_reconstruct_barycenter(const Eigen::VectorXd& edge_signal,
                                                    const SimplicialComplex2& complex);

struct LiftOptions {
    /// Opt in to a minimum-norm solve where the incident projectors are rank deficient.
    bool pseudoinverse_fallback = false;
    /// Relative smallest-singular-value threshold of sum(T_sigma).
    double rank_tolerance = 1e-10;
};

/// Least-squares vertex vectors consistent with every incident tangential
/// observation: v_i = (sum T_s)^-1 sum T_s v_i(s). Throws NumericalError
/// naming the vertex when sum T_s is singular and no fallback was requested.
NodeVectorField lift_to_vertices(const TriangleTangentField& tri_field, const SimplicialComplex2& complex,
                                 const LiftOptions& options = {});

/// project_to_edges -> whitney_reconstruct_barycenter -> lift_to_vertices.
NodeVectorField color_roundtrip(const NodeVectorField& field, const SimplicialComplex2& complex,
                                const LiftOptions& options = {});

} // namespace topsig
