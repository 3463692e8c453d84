#pragma once

// Periodic curve meshes standing in for an elliptic curve, plus the
// Weierstrass discriminant diagnostic.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "spencer/error.hpp"

namespace spencer {

struct CurveParams {
    double a = -2.0;  // Weierstrass y^2 = x^3 + a x + b
    double b = 1.0;
    double R = 1.0;   // radius of the modified circular parameterization
    int N = 200;

    void validate() const {
        if (N < 3) fail(ErrorKind::input, "curve.N must be >= 3");
        if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorKind::input, "curve.R must be positive");
        if (!std::isfinite(a) || !std::isfinite(b)) fail(ErrorKind::input, "curve.a/b must be finite");
    }
};

/// Closed polygonal curve. Edge e joins node e to node (e+1) mod N.
struct MeshCircle {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<double> t_values;
    std::vector<double> arc_weights;   // dual-cell length per node: ½(ℓ_{i-1} + ℓ_i)
    std::vector<double> edge_lengths;  // ℓ_e = |node_{e+1} - node_e|
    bool periodic = true;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes.size()); }
    [[nodiscard]] int next(int i) const noexcept { return (i + 1) % size(); }
    [[nodiscard]] int prev(int i) const noexcept { return (i + size() - 1) % size(); }

    [[nodiscard]] double total_length() const {
        double s = 0.0;
        for (double h : arc_weights) s += h;
        return s;
    }
};

/// Point of x = R cos t + 0.1 cos 3t, y = R sin t + 0.1 sin 3t.
[[nodiscard]] inline Eigen::Vector2d curve_point(double R, double t) {
    return {R * std::cos(t) + 0.1 * std::cos(3.0 * t), R * std::sin(t) + 0.1 * std::sin(3.0 * t)};
}

[[nodiscard]] inline MeshCircle parameterize(const CurveParams& params) {
    params.validate();
    const int n = params.N;
    MeshCircle mesh;
    mesh.nodes.reserve(static_cast<std::size_t>(n));
    mesh.t_values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        mesh.t_values.push_back(t);
        mesh.nodes.push_back(curve_point(params.R, t));
    }
    mesh.edge_lengths.resize(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        mesh.edge_lengths[e] = (mesh.nodes[mesh.next(e)] - mesh.nodes[e]).norm();
        if (!(mesh.edge_lengths[e] > 0.0)) fail(ErrorKind::assembly, "degenerate mesh edge");
    }
    mesh.arc_weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        mesh.arc_weights[i] = 0.5 * (mesh.edge_lengths[mesh.prev(i)] + mesh.edge_lengths[i]);
    }
    return mesh;
}

/// -16(4a^3 + 27b^2); nonzero means the cubic is nonsingular.
[[nodiscard]] constexpr double discriminant(double a, double b) noexcept {
    return -16.0 * (4.0 * a * a * a + 27.0 * b * b);
}

}  // namespace spencer
