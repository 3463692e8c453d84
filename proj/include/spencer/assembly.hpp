#pragma once

// Discretized Spencer complex on a periodic curve mesh.
//
// Total grading: the degree-k space is ⊕_{p+q=k} Ω^p ⊗ Sym^q with p ∈ {0,1},
// ordered as [(1,k-1), (0,k)]. Nodal 0-forms, edge 1-forms, lumped masses.
//
//   D(ω ⊗ s) = dω ⊗ s + (-1)^p ω ⊗ δ^λ(s)
//
// with d the periodic forward difference divided by edge length.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spencer/error.hpp"
#include "spencer/geometry.hpp"
#include "spencer/lie_core.hpp"
#include "spencer/operator_matrix.hpp"

namespace spencer {

enum class MetricKind { constraint_strength, curvature_geometric };
enum class LaplacianMode { faithful, simplified };

[[nodiscard]] constexpr const char* to_string(MetricKind k) noexcept {
    return k == MetricKind::constraint_strength ? "constraint" : "curvature";
}
[[nodiscard]] constexpr const char* to_string(LaplacianMode m) noexcept {
    return m == LaplacianMode::faithful ? "faithful" : "simplified";
}

/// Pointwise ‖Ω‖² of the principal connection's curvature.
struct ConnectionData {
    std::vector<double> curvature_norm_sq;

    static ConnectionData flat(int n) {
        return ConnectionData{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    }
};

struct MetricWeights {
    MetricKind kind = MetricKind::constraint_strength;
    std::vector<double> values;  // one per node, all >= 1
};

/// Everything the assembly needs besides λ and the metric.
struct SpencerSetup {
    LieAlgebra algebra = LieAlgebra::su2_epsilon();
    MeshCircle mesh;
    int q_max = kDefaultQMax;
};

/// Value returned by operations that compute a result along two routes.
struct CrossChecked {
    OperatorMatrix op;
    double deviation = 0.0;  // max |route A - route B|
};

inline constexpr double kDifferenceTolerance = 1e-13;
inline constexpr double kPerturbationTolerance = 1e-10;

[[nodiscard]] inline MetricWeights metric_weights(MetricKind kind, const DualFunctional& lambda,
                                                  const ConnectionData& conn, const MeshCircle& mesh) {
    const auto n = static_cast<std::size_t>(mesh.size());
    MetricWeights w{kind, std::vector<double>(n)};
    if (kind == MetricKind::constraint_strength) {
        const double value = 1.0 + lambda.norm_sq();
        std::fill(w.values.begin(), w.values.end(), value);
        return w;
    }
    if (conn.curvature_norm_sq.size() != n) {
        fail(ErrorKind::input, "connection data must have one curvature value per node");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double c = conn.curvature_norm_sq[i];
        if (!(c >= 0.0) || !std::isfinite(c)) {
            fail(ErrorKind::input, "curvature_norm_sq[" + std::to_string(i) + "] must be a nonnegative number");
        }
        w.values[i] = 1.0 + c;
    }
    return w;
}

/// Degree-k space of the faithful complex.
[[nodiscard]] inline GradedSpace total_space(const SpencerSetup& setup, int k) {
    std::vector<Bidegree> blocks;
    if (k >= 1 && k - 1 <= setup.q_max) blocks.push_back({1, k - 1});
    if (k >= 0 && k <= setup.q_max) blocks.push_back({0, k});
    return GradedSpace(std::move(blocks), setup.mesh.size(), setup.algebra.dim());
}

/// Degree-k space of the simplified scheme: nodal fields with a Sym^k fiber.
[[nodiscard]] inline GradedSpace simplified_space(const SpencerSetup& setup, int k) {
    return GradedSpace({{0, k}}, setup.mesh.size(), setup.algebra.dim());
}

namespace detail {

inline double slot_measure(const MeshCircle& mesh, const MetricWeights& w, int form, int slot) {
    if (form == 0) return w.values[slot] * mesh.arc_weights[slot];
    const double edge_weight = 0.5 * (w.values[slot] + w.values[mesh.next(slot)]);
    return edge_weight * mesh.edge_lengths[slot];
}

inline void require_supported_degree(const SpencerSetup& setup, int k) {
    if (k < 0 || k > 1) {
        fail(ErrorKind::capacity, "degree " + std::to_string(k) + " outside supported range {0,1}");
    }
    if (setup.q_max < k + 1) {
        fail(ErrorKind::capacity, "q_max " + std::to_string(setup.q_max) + " too small for degree " +
                                      std::to_string(k));
    }
}

}  // namespace detail

/// Lumped mass of one block, w·h per slot replicated across the fiber.
[[nodiscard]] inline OperatorMatrix assemble_mass(const MeshCircle& mesh, const MetricWeights& weights,
                                                  Bidegree b, int lie_dim = 3) {
    if (weights.values.size() != static_cast<std::size_t>(mesh.size())) {
        fail(ErrorKind::input, "metric weights length must equal node count");
    }
    GradedSpace space({b}, mesh.size(), lie_dim);
    OperatorMatrix m(space, space);
    const Eigen::Index fiber = space.fiber(b);
    for (int s = 0; s < mesh.size(); ++s) {
        const double value = detail::slot_measure(mesh, weights, b.form, s);
        if (!(value > 0.0)) fail(ErrorKind::assembly, "nonpositive mass entry at slot " + std::to_string(s));
        for (Eigen::Index j = 0; j < fiber; ++j) m.entries(s * fiber + j, s * fiber + j) = value;
    }
    return m;
}

/// Block-diagonal mass of a whole graded space.
[[nodiscard]] inline OperatorMatrix space_mass(const MeshCircle& mesh, const MetricWeights& weights,
                                               const GradedSpace& space) {
    OperatorMatrix m(space, space);
    for (const auto& b : space.blocks()) {
        const Eigen::Index off = space.offset(b);
        const Eigen::Index size = space.block_size(b);
        m.entries.block(off, off, size, size) = assemble_mass(mesh, weights, b, space.lie_dim()).entries;
    }
    return m;
}

/// d-part of D^k: (0,q) → (1,q), forward difference over edge length.
[[nodiscard]] inline OperatorMatrix exterior_part(const SpencerSetup& setup, int k) {
    const GradedSpace dom = total_space(setup, k);
    const GradedSpace cod = total_space(setup, k + 1);
    OperatorMatrix out(dom, cod);
    const MeshCircle& mesh = setup.mesh;
    for (const auto& b : dom.blocks()) {
        const Bidegree target{b.form + 1, b.sym};
        if (b.form != 0 || !cod.contains(target)) continue;
        const Eigen::Index fiber = dom.fiber(b);
        const Eigen::Index row0 = cod.offset(target);
        const Eigen::Index col0 = dom.offset(b);
        for (int e = 0; e < mesh.size(); ++e) {
            const double inv = 1.0 / mesh.edge_lengths[e];
            for (Eigen::Index j = 0; j < fiber; ++j) {
                out.entries(row0 + e * fiber + j, col0 + mesh.next(e) * fiber + j) += inv;
                out.entries(row0 + e * fiber + j, col0 + e * fiber + j) -= inv;
            }
        }
    }
    return out;
}

/// δ-part of D^k scaled by `scale`: (p,q) → (p,q+1) with factor scale·(-1)^p.
[[nodiscard]] inline OperatorMatrix extension_part(const SpencerSetup& setup, const DualFunctional& lambda,
                                                   int k, double scale = 1.0) {
    const GradedSpace dom = total_space(setup, k);
    const GradedSpace cod = total_space(setup, k + 1);
    OperatorMatrix out(dom, cod);
    for (const auto& b : dom.blocks()) {
        const Bidegree target{b.form, b.sym + 1};
        if (!cod.contains(target)) continue;
        const Eigen::MatrixXd ext = extension_matrix(setup.algebra, lambda, b.sym, setup.q_max);
        const double factor = (b.form % 2 == 0) ? scale : -scale;
        const Eigen::Index fin = dom.fiber(b);
        const Eigen::Index fout = cod.fiber(target);
        const Eigen::Index row0 = cod.offset(target);
        const Eigen::Index col0 = dom.offset(b);
        for (int s = 0; s < setup.mesh.size(); ++s) {
            out.entries.block(row0 + s * fout, col0 + s * fin, fout, fin) = factor * ext;
        }
    }
    return out;
}

/// D^k : S^k → S^{k+1}. `coupling_scale` multiplies the δ-part (1 in normal use).
[[nodiscard]] inline OperatorMatrix assemble_differential(const SpencerSetup& setup, const DualFunctional& lambda,
                                                          int k, double coupling_scale = 1.0) {
    detail::require_supported_degree(setup, k);
    OperatorMatrix d = exterior_part(setup, k);
    d.entries += extension_part(setup, lambda, k, coupling_scale).entries;
    return d;
}

namespace detail {

inline bool is_diagonal(const Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != 0.0) return false;
    return true;
}

}  // namespace detail

/// D* = M_dom⁻¹ Dᵀ M_cod, the adjoint in the weighted inner products.
[[nodiscard]] inline OperatorMatrix adjoint(const OperatorMatrix& d, const OperatorMatrix& m_dom,
                                            const OperatorMatrix& m_cod) {
    if (m_dom.rows() != d.cols() || m_cod.rows() != d.rows() || m_dom.rows() != m_dom.cols() ||
        m_cod.rows() != m_cod.cols()) {
        fail(ErrorKind::input, "adjoint: mass matrices are not conformable with the operator");
    }
    const Eigen::MatrixXd rhs = d.entries.transpose() * m_cod.entries;
    Eigen::MatrixXd result;
    if (detail::is_diagonal(m_dom.entries)) {
        const Eigen::VectorXd diag = m_dom.entries.diagonal();
        if ((diag.array() <= 0.0).any()) fail(ErrorKind::numeric, "adjoint: singular domain mass");
        result = diag.cwiseInverse().asDiagonal() * rhs;
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(m_dom.entries);
        if (llt.info() != Eigen::Success) fail(ErrorKind::numeric, "adjoint: domain mass is not SPD");
        result = llt.solve(rhs);
    }
    return OperatorMatrix(d.codomain, d.domain, std::move(result));
}

/// Options used by tests to perturb the coupling; defaults are the real operator.
struct LaplacianOptions {
    double coupling_scale = 1.0;
};

/// Mass matrix of the space Δ^k acts on.
[[nodiscard]] inline OperatorMatrix laplacian_mass(const SpencerSetup& setup, int k, LaplacianMode mode,
                                                   const MetricWeights& weights) {
    const GradedSpace space = (mode == LaplacianMode::faithful) ? total_space(setup, k) : simplified_space(setup, k);
    return space_mass(setup.mesh, weights, space);
}

/// Weighted periodic graph Laplacian L = M₀⁻¹ Gᵀ M₁ G on nodal scalars.
[[nodiscard]] inline Eigen::MatrixXd graph_laplacian(const MeshCircle& mesh, const MetricWeights& weights) {
    const int n = mesh.size();
    Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < n; ++e) {
        const double edge_mass = detail::slot_measure(mesh, weights, 1, e);
        const double inv = 1.0 / mesh.edge_lengths[e];
        const double c = edge_mass * inv * inv;
        const int i = e;
        const int j = mesh.next(e);
        stiffness(i, i) += c;
        stiffness(j, j) += c;
        stiffness(i, j) -= c;
        stiffness(j, i) -= c;
    }
    Eigen::VectorXd node_mass(n);
    for (int i = 0; i < n; ++i) node_mass[i] = detail::slot_measure(mesh, weights, 0, i);
    return node_mass.cwiseInverse().asDiagonal() * stiffness;
}

namespace detail {

inline OperatorMatrix faithful_laplacian(const SpencerSetup& setup, int k, const DualFunctional& lambda,
                                         const MetricWeights& weights, double coupling_scale) {
    detail::require_supported_degree(setup, k);
    const OperatorMatrix m_k = space_mass(setup.mesh, weights, total_space(setup, k));
    const OperatorMatrix m_next = space_mass(setup.mesh, weights, total_space(setup, k + 1));
    const OperatorMatrix d_k = assemble_differential(setup, lambda, k, coupling_scale);
    OperatorMatrix lap(d_k.domain, d_k.domain);
    lap.entries = adjoint(d_k, m_k, m_next).entries * d_k.entries;
    if (k >= 1) {
        const OperatorMatrix m_prev = space_mass(setup.mesh, weights, total_space(setup, k - 1));
        const OperatorMatrix d_prev = assemble_differential(setup, lambda, k - 1, coupling_scale);
        lap.entries += d_prev.entries * adjoint(d_prev, m_prev, m_k).entries;
    }
    return lap;
}

inline OperatorMatrix simplified_laplacian(const SpencerSetup& setup, int k, const DualFunctional& lambda,
                                           const MetricWeights& weights, double coupling_scale) {
    if (k < 0 || k > 1) {
        fail(ErrorKind::capacity, "degree " + std::to_string(k) + " outside supported range {0,1}");
    }
    const GradedSpace space = simplified_space(setup, k);
    const Eigen::Index fiber = space.fiber({0, k});
    const Eigen::MatrixXd lap = graph_laplacian(setup.mesh, weights);
    const int n = setup.mesh.size();
    OperatorMatrix out(space, space);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = lap(i, j);
            if (v == 0.0) continue;
            for (Eigen::Index f = 0; f < fiber; ++f) out.entries(i * fiber + f, j * fiber + f) = v;
        }
    const double shift = coupling_scale * lambda.norm_sq();
    out.entries.diagonal().array() += shift;
    return out;
}

}  // namespace detail

/// Δ^k. Faithful: D^{k-1}D^{k-1*} + D^{k*}D^k (first term absent at k = 0).
/// Simplified: L ⊗ I + ‖λ‖² I on nodal fields with a Sym^k fiber.
/// Either way the result is self-adjoint in the metric of laplacian_mass().
[[nodiscard]] inline OperatorMatrix laplacian(const SpencerSetup& setup, int k, LaplacianMode mode,
                                              const DualFunctional& lambda, const MetricWeights& weights,
                                              LaplacianOptions options = {}) {
    return mode == LaplacianMode::faithful
               ? detail::faithful_laplacian(setup, k, lambda, weights, options.coupling_scale)
               : detail::simplified_laplacian(setup, k, lambda, weights, options.coupling_scale);
}

/// R^k = D^k(-λ) - D^k(λ), checked against -2(-1)^p ω ⊗ δ^λ(s).
[[nodiscard]] inline CrossChecked difference_operator(const SpencerSetup& setup, int k, const DualFunctional& lambda) {
    detail::require_supported_degree(setup, k);
    const Eigen::MatrixXd by_difference =
        assemble_differential(setup, lambda.mirror(), k).entries - assemble_differential(setup, lambda, k).entries;
    OperatorMatrix closed_form = extension_part(setup, lambda, k, -2.0);
    const double dev = max_abs_difference(by_difference, closed_form.entries);
    if (dev > kDifferenceTolerance) {
        fail(ErrorKind::consistency, "difference operator routes disagree by " + std::to_string(dev));
    }
    return CrossChecked{std::move(closed_form), dev};
}

/// K^k = Δ^k(-λ) - Δ^k(λ) (faithful mode), checked against the expansion
///   D^{k-1}R^{k-1*} + R^{k-1}D^{k-1*} + R^{k-1}R^{k-1*}
/// + D^{k*}R^k + R^{k*}D^k + R^{k*}R^k
/// where R^j = D^j(-λ) - D^j(λ) and adjoints use the (mirror-invariant) metric.
[[nodiscard]] inline CrossChecked perturbation_operator(const SpencerSetup& setup, int k, const DualFunctional& lambda,
                                                        const MetricWeights& weights) {
    detail::require_supported_degree(setup, k);
    const Eigen::MatrixXd direct = laplacian(setup, k, LaplacianMode::faithful, lambda.mirror(), weights).entries -
                                   laplacian(setup, k, LaplacianMode::faithful, lambda, weights).entries;

    const OperatorMatrix m_k = space_mass(setup.mesh, weights, total_space(setup, k));
    const OperatorMatrix m_next = space_mass(setup.mesh, weights, total_space(setup, k + 1));
    const OperatorMatrix d_k = assemble_differential(setup, lambda, k);
    const OperatorMatrix r_k = difference_operator(setup, k, lambda).op;
    const OperatorMatrix d_k_adj = adjoint(d_k, m_k, m_next);
    const OperatorMatrix r_k_adj = adjoint(r_k, m_k, m_next);

    OperatorMatrix expansion(d_k.domain, d_k.domain);
    expansion.entries = d_k_adj.entries * r_k.entries + r_k_adj.entries * d_k.entries + r_k_adj.entries * r_k.entries;
    if (k >= 1) {
        const OperatorMatrix m_prev = space_mass(setup.mesh, weights, total_space(setup, k - 1));
        const OperatorMatrix d_prev = assemble_differential(setup, lambda, k - 1);
        const OperatorMatrix r_prev = difference_operator(setup, k - 1, lambda).op;
        const OperatorMatrix d_prev_adj = adjoint(d_prev, m_prev, m_k);
        const OperatorMatrix r_prev_adj = adjoint(r_prev, m_prev, m_k);
        expansion.entries += d_prev.entries * r_prev_adj.entries + r_prev.entries * d_prev_adj.entries +
                             r_prev.entries * r_prev_adj.entries;
    }
    const double dev = max_abs_difference(direct, expansion.entries);
    if (dev > kPerturbationTolerance) {
        fail(ErrorKind::consistency, "perturbation expansion disagrees with Laplacian difference by " +
                                         std::to_string(dev));
    }
    return CrossChecked{std::move(expansion), dev};
}

/// Largest singular value of D^1 ∘ D^0 in coefficient (Euclidean) norms.
[[nodiscard]] inline double cochain_defect(const SpencerSetup& setup, const DualFunctional& lambda) {
    const Eigen::MatrixXd composite =
        assemble_differential(setup, lambda, 1).entries * assemble_differential(setup, lambda, 0).entries;
    const Eigen::MatrixXd gram = composite.transpose() * composite;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "cochain_defect: eigensolver failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// min over nonzero discrete Fourier modes u_m of ‖d u_m‖ / ‖u_m‖ for the
/// d-block of D^0. Positive means the discrete symbol is injective.
[[nodiscard]] inline double symbol_injectivity_margin(const SpencerSetup& setup) {
    const OperatorMatrix d = exterior_part(setup, 0);
    const GradedSpace& cod = d.codomain;
    const Eigen::Index row0 = cod.offset({1, 0});
    const int n = setup.mesh.size();
    const Eigen::MatrixXd block = d.entries.block(row0, 0, n, n);
    double margin = std::numeric_limits<double>::infinity();
    for (int m = 1; m < n; ++m) {
        Eigen::VectorXcd mode(n);
        for (int j = 0; j < n; ++j) {
            mode[j] = std::polar(1.0, 2.0 * std::numbers::pi * m * j / n);
        }
        const Eigen::VectorXcd image = block.cast<std::complex<double>>() * mode;
        margin = std::min(margin, image.norm() / mode.norm());
    }
    return margin;
}

/// max |⟨λ, [e_a, e_b]⟩|; nonzero is the checkable part of general position.
[[nodiscard]] inline double bracket_pairing_strength(const LieAlgebra& alg, const DualFunctional& lambda) {
    double r = 0.0;
    for (int a = 0; a < alg.dim(); ++a)
        for (int b = 0; b < alg.dim(); ++b) {
            const double v = pair(lambda, bracket(alg, LieVector::basis(alg.dim(), a), LieVector::basis(alg.dim(), b)));
            r = std::max(r, std::abs(v));
        }
    return r;
}

}  // namespace spencer
