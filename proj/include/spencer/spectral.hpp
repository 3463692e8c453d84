#pragma once

// Generalized eigensolving, harmonic dimensions and mirror verification.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "spencer/assembly.hpp"
#include "spencer/error.hpp"
#include "spencer/geometry.hpp"
#include "spencer/lie_core.hpp"

namespace spencer {

inline constexpr double kDefaultHarmonicTol = 1e-8;
inline constexpr double kResidualTol = 1e-8;

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;  // ascending
    double residual_max = 0.0;    // max_i ‖A v_i - μ_i M v_i‖ / (‖A‖_F ‖v_i‖)
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
};

/// All eigenvalues of the symmetric-definite pencil (A, M).
[[nodiscard]] inline SpectrumResult generalized_eigs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m,
                                                     double symmetry_tol = 1e-10) {
    if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows()) {
        fail(ErrorKind::input, "generalized_eigs: A and M must be square and of equal size");
    }
    SpectrumResult result;
    result.rows = a.rows();
    result.cols = a.cols();
    if (a.rows() == 0) return result;

    const double a_scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * a_scale) {
        fail(ErrorKind::input, "generalized_eigs: A is not symmetric within tolerance");
    }
    const double m_scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * m_scale) {
        fail(ErrorKind::input, "generalized_eigs: M is not symmetric within tolerance");
    }
    const Eigen::MatrixXd a_sym = 0.5 * (a + a.transpose());
    const Eigen::MatrixXd m_sym = 0.5 * (m + m.transpose());
    if (Eigen::LLT<Eigen::MatrixXd>(m_sym).info() != Eigen::Success) {
        fail(ErrorKind::input, "generalized_eigs: M is not positive definite");
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a_sym, m_sym,
                                                                 Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "generalized_eigs: solver did not converge");

    result.eigenvalues = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    const Eigen::MatrixXd residual = a_sym * v - (m_sym * v) * result.eigenvalues.asDiagonal();
    const double a_norm = std::max(a_sym.norm(), std::numeric_limits<double>::min());
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
        result.residual_max = std::max(result.residual_max, residual.col(i).norm() / (a_norm * v.col(i).norm()));
    }
    if (!(result.residual_max <= kResidualTol)) {
        fail(ErrorKind::numeric, "generalized_eigs: residual " + std::to_string(result.residual_max) +
                                     " exceeds tolerance");
    }
    return result;
}

/// Number of eigenvalues with |μ| < tol·max(1, μ_max).
[[nodiscard]] inline int harmonic_dim(const SpectrumResult& spec, double tol = kDefaultHarmonicTol) {
    if (spec.eigenvalues.size() == 0) return 0;
    const double threshold = tol * std::max(1.0, spec.eigenvalues.maxCoeff());
    int count = 0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (std::abs(spec.eigenvalues[i]) < threshold) ++count;
    }
    return count;
}

/// Test hook: deliberately break the λ ↔ -λ symmetry on the mirror side.
enum class FaultInjection {
    none,
    drop_mirror_coupling,  // mirror side assembled without the Spencer coupling
};

struct MirrorConfig {
    std::string id;
    CurveParams curve;
    DualFunctional lambda = make_dual({0.0, 0.0, 0.0});
    LaplacianMode mode = LaplacianMode::simplified;
    MetricKind metric = MetricKind::constraint_strength;
    int q_max = kDefaultQMax;
    double tol = kDefaultHarmonicTol;
    std::optional<ConnectionData> connection;  // flat when absent
    FaultInjection fault = FaultInjection::none;
};

struct DegreeComparison {
    int degree = 0;
    int dim_plus = 0;
    int dim_minus = 0;
    double eig_min_plus = 0.0;
    double eig_min_minus = 0.0;
    double residual_max = 0.0;
    Eigen::VectorXd spectrum_plus;
    Eigen::VectorXd spectrum_minus;
};

struct MirrorReport {
    std::string config_id;
    LaplacianMode mode = LaplacianMode::simplified;
    MetricKind metric = MetricKind::constraint_strength;
    Eigen::VectorXd lambda;
    double lambda_norm = 0.0;
    std::vector<DegreeComparison> degrees;
    double cochain_defect = 0.0;
    double bracket_pairing = 0.0;  // max |⟨λ,[e_a,e_b]⟩|
    bool passed = false;

    [[nodiscard]] double eig_min() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& d : degrees) m = std::min({m, d.eig_min_plus, d.eig_min_minus});
        return m;
    }
};

namespace detail {

inline SpencerSetup setup_for(const MirrorConfig& config) {
    if (config.q_max < 2) fail(ErrorKind::capacity, "q_max must be >= 2 for degrees 0 and 1");
    if (!(config.tol > 0.0)) fail(ErrorKind::input, "tol must be positive");
    SpencerSetup setup;
    setup.mesh = parameterize(config.curve);
    setup.q_max = config.q_max;
    detail::require_dim(setup.algebra.dim(), config.lambda.dim(), "lambda");
    return setup;
}

inline ConnectionData connection_for(const MirrorConfig& config, const MeshCircle& mesh) {
    return config.connection ? *config.connection : ConnectionData::flat(mesh.size());
}

inline SpectrumResult laplacian_spectrum(const SpencerSetup& setup, int k, LaplacianMode mode,
                                         const DualFunctional& lambda, const MetricWeights& weights,
                                         LaplacianOptions options = {}) {
    const OperatorMatrix lap = laplacian(setup, k, mode, lambda, weights, options);
    const OperatorMatrix mass = laplacian_mass(setup, k, mode, weights);
    return generalized_eigs(mass.entries * lap.entries, mass.entries);
}

}  // namespace detail

/// Solves degrees 0 and 1 at λ and -λ and compares harmonic dimensions.
[[nodiscard]] inline MirrorReport verify_mirror(const MirrorConfig& config) {
    try {
        const SpencerSetup setup = detail::setup_for(config);
        const ConnectionData conn = detail::connection_for(config, setup.mesh);
        const DualFunctional minus = config.lambda.mirror();
        const MetricWeights w_plus = metric_weights(config.metric, config.lambda, conn, setup.mesh);
        const MetricWeights w_minus = metric_weights(config.metric, minus, conn, setup.mesh);
        LaplacianOptions mirror_options;
        if (config.fault == FaultInjection::drop_mirror_coupling) mirror_options.coupling_scale = 0.0;

        MirrorReport report;
        report.config_id = config.id;
        report.mode = config.mode;
        report.metric = config.metric;
        report.lambda = config.lambda.coeffs;
        report.lambda_norm = std::sqrt(config.lambda.norm_sq());
        report.passed = true;
        for (int k = 0; k <= 1; ++k) {
            const SpectrumResult plus = detail::laplacian_spectrum(setup, k, config.mode, config.lambda, w_plus);
            const SpectrumResult mirror =
                detail::laplacian_spectrum(setup, k, config.mode, minus, w_minus, mirror_options);
            DegreeComparison cmp;
            cmp.degree = k;
            cmp.dim_plus = harmonic_dim(plus, config.tol);
            cmp.dim_minus = harmonic_dim(mirror, config.tol);
            cmp.eig_min_plus = plus.eigenvalues.minCoeff();
            cmp.eig_min_minus = mirror.eigenvalues.minCoeff();
            cmp.residual_max = std::max(plus.residual_max, mirror.residual_max);
            cmp.spectrum_plus = plus.eigenvalues;
            cmp.spectrum_minus = mirror.eigenvalues;
            report.passed = report.passed && cmp.dim_plus == cmp.dim_minus;
            report.degrees.push_back(std::move(cmp));
        }
        report.cochain_defect = cochain_defect(setup, config.lambda);
        report.bracket_pairing = bracket_pairing_strength(setup.algebra, config.lambda);
        return report;
    } catch (const Error& e) {
        throw Error(e.kind(), "config '" + config.id + "': " + e.what());
    }
}

/// Signed permutation on the degree-k faithful space combining the pullback
/// along t ↦ -t (edges reverse orientation) with the grading sign (-1)^q.
[[nodiscard]] inline Eigen::MatrixXd reflection_conjugator(const SpencerSetup& setup, int k) {
    const GradedSpace space = total_space(setup, k);
    const int n = setup.mesh.size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(space.size(), space.size());
    for (const auto& b : space.blocks()) {
        const Eigen::Index off = space.offset(b);
        const Eigen::Index fiber = space.fiber(b);
        const double sign = ((b.sym % 2 == 0) ? 1.0 : -1.0) * (b.form == 1 ? -1.0 : 1.0);
        for (int s = 0; s < n; ++s) {
            const int image = (b.form == 0) ? (n - s) % n : (2 * n - s - 1) % n;
            for (Eigen::Index j = 0; j < fiber; ++j) t(off + image * fiber + j, off + s * fiber + j) = sign;
        }
    }
    return t;
}

struct ReflectionCheck {
    std::vector<int> dims_conjugated;  // harmonic dims of T Δ(λ) Tᵀ, per degree
    std::vector<int> dims_minus;       // harmonic dims of Δ(-λ), per degree
    double operator_residual = 0.0;    // max_k ‖T D^k(λ) Tᵀ - D^k(-λ)‖_max / ‖D^k‖_max
    bool passed = false;
};

/// Faithful mode only: conjugates the λ system by the reflection and checks
/// that it reproduces the -λ system and its harmonic dimensions.
[[nodiscard]] inline ReflectionCheck reflection_oracle(const MirrorConfig& config) {
    if (config.mode != LaplacianMode::faithful) {
        fail(ErrorKind::input, "reflection oracle applies to faithful mode only");
    }
    const SpencerSetup setup = detail::setup_for(config);
    const ConnectionData conn = detail::connection_for(config, setup.mesh);
    const DualFunctional minus = config.lambda.mirror();
    const MetricWeights w_plus = metric_weights(config.metric, config.lambda, conn, setup.mesh);
    const MetricWeights w_minus = metric_weights(config.metric, minus, conn, setup.mesh);

    ReflectionCheck check;
    for (int k = 0; k <= 1; ++k) {
        const Eigen::MatrixXd t_k = reflection_conjugator(setup, k);
        const Eigen::MatrixXd t_next = reflection_conjugator(setup, k + 1);
        const Eigen::MatrixXd d_plus = assemble_differential(setup, config.lambda, k).entries;
        const Eigen::MatrixXd d_minus = assemble_differential(setup, minus, k).entries;
        const Eigen::MatrixXd conj = t_next * d_plus * t_k.transpose();
        check.operator_residual =
            std::max(check.operator_residual, max_abs_difference(conj, d_minus) / d_minus.cwiseAbs().maxCoeff());

        const Eigen::MatrixXd lap = laplacian(setup, k, LaplacianMode::faithful, config.lambda, w_plus).entries;
        const Eigen::MatrixXd mass = laplacian_mass(setup, k, LaplacianMode::faithful, w_plus).entries;
        const Eigen::MatrixXd mass_conj = t_k * mass * t_k.transpose();
        const Eigen::MatrixXd lap_conj = t_k * lap * t_k.transpose();
        check.dims_conjugated.push_back(harmonic_dim(generalized_eigs(mass_conj * lap_conj, mass_conj), config.tol));
        check.dims_minus.push_back(
            harmonic_dim(detail::laplacian_spectrum(setup, k, LaplacianMode::faithful, minus, w_minus), config.tol));
    }
    check.passed = check.dims_conjugated == check.dims_minus && check.operator_residual < 1e-10;
    return check;
}

[[nodiscard]] inline int numeric_rank(const Eigen::MatrixXd& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tol * s[0]) ++r;
    return r;
}

struct HodgeRankCheck {
    int degree = 0;
    int harmonic_dim = 0;        // from the Laplacian spectrum
    int nullity_stacked = 0;     // dim S^k - rank [D^k ; D^{k-1*}]
    int nullity_from_ranks = 0;  // dim S^k - rank D^k - rank D^{k-1}
    int rank_d = 0;
    int rank_d_prev = 0;
};

/// Compares kernel dimensions of faithful Δ^k with SVD ranks of the
/// differentials. nullity_from_ranks equals the others only where D∘D = 0.
[[nodiscard]] inline std::vector<HodgeRankCheck> hodge_rank_check(const SpencerSetup& setup,
                                                                   const DualFunctional& lambda,
                                                                   const MetricWeights& weights,
                                                                   double tol = kDefaultHarmonicTol) {
    std::vector<HodgeRankCheck> out;
    for (int k = 0; k <= 1; ++k) {
        HodgeRankCheck c;
        c.degree = k;
        const OperatorMatrix d = assemble_differential(setup, lambda, k);
        const Eigen::Index dim = d.cols();
        c.rank_d = numeric_rank(d.entries, tol);
        c.harmonic_dim = harmonic_dim(detail::laplacian_spectrum(setup, k, LaplacianMode::faithful, lambda, weights), tol);
        if (k == 0) {
            c.nullity_stacked = static_cast<int>(dim) - c.rank_d;
        } else {
            const OperatorMatrix d_prev = assemble_differential(setup, lambda, k - 1);
            const OperatorMatrix m_prev = space_mass(setup.mesh, weights, total_space(setup, k - 1));
            const OperatorMatrix m_k = space_mass(setup.mesh, weights, total_space(setup, k));
            const Eigen::MatrixXd d_prev_adj = adjoint(d_prev, m_prev, m_k).entries;
            Eigen::MatrixXd stacked(d.rows() + d_prev_adj.rows(), dim);
            stacked << d.entries, d_prev_adj;
            c.nullity_stacked = static_cast<int>(dim) - numeric_rank(stacked, tol);
            c.rank_d_prev = numeric_rank(d_prev.entries, tol);
        }
        c.nullity_from_ranks = static_cast<int>(dim) - c.rank_d - c.rank_d_prev;
        out.push_back(c);
    }
    return out;
}

struct SweepRow {
    MirrorConfig config;
    std::optional<MirrorReport> report;
    std::string error;
    std::optional<ErrorKind> error_kind;

    [[nodiscard]] bool passed() const { return report && report->passed; }
};

struct ModeSummary {
    LaplacianMode mode = LaplacianMode::simplified;
    int configs = 0;
    int comparisons = 0;
    int matches = 0;
    bool monotone = true;  // eig_min strictly increasing in ‖λ‖ (ties in ‖λ‖ must tie)
    std::optional<double> min_eig_delta;  // eig_min(max ‖λ‖) - eig_min(min ‖λ‖)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<ModeSummary> summaries;

    [[nodiscard]] bool passed() const {
        return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.passed(); });
    }
};

/// Monotonicity of eig_min against ‖λ‖ on (norm, eig_min) pairs.
[[nodiscard]] inline bool strictly_monotone(std::vector<std::pair<double, double>> points) {
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto [n0, e0] = points[i - 1];
        const auto [n1, e1] = points[i];
        const double scale = std::max({1.0, std::abs(e0), std::abs(e1)});
        if (n1 - n0 <= 1e-12 * std::max(1.0, n1)) {
            if (std::abs(e1 - e0) > 1e-9 * scale) return false;
        } else if (!(e1 > e0)) {
            return false;
        }
    }
    return true;
}

[[nodiscard]] inline SweepResult sweep(const std::vector<MirrorConfig>& configs) {
    SweepResult result;
    for (const auto& config : configs) {
        SweepRow row{config, std::nullopt, {}, std::nullopt};
        try {
            row.report = verify_mirror(config);
        } catch (const Error& e) {
            row.error = e.what();
            row.error_kind = e.kind();
        }
        result.rows.push_back(std::move(row));
    }
    for (LaplacianMode mode : {LaplacianMode::simplified, LaplacianMode::faithful}) {
        ModeSummary s;
        s.mode = mode;
        std::vector<std::pair<double, double>> points;
        for (const auto& row : result.rows) {
            if (row.config.mode != mode) continue;
            ++s.configs;
            if (!row.report) continue;
            for (const auto& d : row.report->degrees) {
                ++s.comparisons;
                if (d.dim_plus == d.dim_minus) ++s.matches;
            }
            points.emplace_back(row.report->lambda_norm, row.report->eig_min());
        }
        if (s.configs == 0) continue;
        s.monotone = strictly_monotone(points);
        if (points.size() >= 2) {
            const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
            s.min_eig_delta = hi->second - lo->second;
        }
        result.summaries.push_back(s);
    }
    return result;
}

/// The seven constant λ vectors of the reference experiment.
[[nodiscard]] inline std::vector<std::pair<std::string, DualFunctional>> reference_lambdas() {
    return {
        {"e1", make_dual({1.0, 0.0, 0.0})},        {"e2", make_dual({0.0, 1.0, 0.0})},
        {"e3", make_dual({0.0, 0.0, 1.0})},        {"e1+e2", make_dual({1.0, 1.0, 0.0})},
        {"half_diag", make_dual({0.5, 0.5, 0.5})}, {"strong_2e1", make_dual({2.0, 0.0, 0.0})},
        {"weak_diag", make_dual({0.1, 0.1, 0.1})},
    };
}

/// Reference sweep: a = -2, b = 1, R = 1, N = 200, constraint metric.
[[nodiscard]] inline std::vector<MirrorConfig> reference_sweep(LaplacianMode mode, int n_nodes = 200) {
    std::vector<MirrorConfig> configs;
    for (const auto& [name, lambda] : reference_lambdas()) {
        MirrorConfig c;
        c.id = std::string(to_string(mode)) + ":" + name;
        c.curve = CurveParams{-2.0, 1.0, 1.0, n_nodes};
        c.lambda = lambda;
        c.mode = mode;
        configs.push_back(std::move(c));
    }
    return configs;
}

}  // namespace spencer
