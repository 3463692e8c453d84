#pragma once

// Chern roots, Chern and Todd classes, symmetric-power characters and the
// Calabi-Yau Riemann-Roch decomposition.

#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spencer/error.hpp"
#include "spencer/graded_ring.hpp"

namespace spencer {

/// Formal roots x_1..x_r as degree-1 classes. With sum_zero the last root is
/// -(x_1 + ... + x_{r-1}) and only r-1 free generators exist.
struct ChernRoots {
    RingPtr ring;
    std::vector<CohomologyClass> roots;
    bool constraint_sum_zero = false;

    [[nodiscard]] int rank() const noexcept { return static_cast<int>(roots.size()); }
};

[[nodiscard]] inline ChernRoots make_roots(int n, int rank, bool sum_zero) {
    if (rank < 0) fail(ErrorKind::input, "rank must be nonnegative");
    const int free = (sum_zero && rank > 0) ? rank - 1 : rank;
    std::vector<Generator> gens;
    for (int i = 0; i < free; ++i) gens.push_back({"x" + std::to_string(i + 1), 1});
    ChernRoots out{make_ring(n, std::move(gens)), {}, sum_zero};
    CohomologyClass sum(out.ring);
    for (int i = 0; i < free; ++i) {
        out.roots.push_back(CohomologyClass::generator(out.ring, "x" + std::to_string(i + 1)));
        sum += out.roots.back();
    }
    if (free < rank) out.roots.push_back(-sum);
    return out;
}

/// Roots built from arbitrary classes in a common ring.
[[nodiscard]] inline ChernRoots roots_from(std::vector<CohomologyClass> roots) {
    if (roots.empty()) fail(ErrorKind::input, "roots_from needs at least one class");
    RingPtr ring = roots.front().ring();
    for (const auto& r : roots) r.require_same_ring(roots.front());
    return ChernRoots{ring, std::move(roots), false};
}

/// Taylor coefficients of exp up to x^order.
[[nodiscard]] inline std::vector<Rational> exp_coefficients(int order) {
    std::vector<Rational> c(static_cast<std::size_t>(order + 1));
    Rational fact = 1;
    for (int m = 0; m <= order; ++m) {
        if (m > 0) fact *= m;
        c[m] = Rational(1) / fact;
    }
    return c;
}

/// Taylor coefficients of x / (1 - e^{-x}) up to x^order.
[[nodiscard]] inline std::vector<Rational> todd_series(int order) {
    // g(x) = (1 - e^{-x}) / x = Σ (-1)^m x^m / (m+1)!, then invert.
    std::vector<Rational> g(static_cast<std::size_t>(order + 1));
    Rational fact = 1;
    for (int m = 0; m <= order; ++m) {
        fact *= (m + 1);
        g[m] = Rational((m % 2 == 0) ? 1 : -1) / fact;
    }
    std::vector<Rational> inv(static_cast<std::size_t>(order + 1));
    inv[0] = Rational(1) / g[0];
    for (int m = 1; m <= order; ++m) {
        Rational s = 0;
        for (int j = 1; j <= m; ++j) s += g[j] * inv[m - j];
        inv[m] = -s / g[0];
    }
    return inv;
}

[[nodiscard]] inline int effective_order(const RingPtr& ring, int order) {
    if (order < 0) fail(ErrorKind::input, "order must be nonnegative");
    return std::min(order, ring->n());
}

/// Π_i x_i / (1 - e^{-x_i}) truncated at degree min(order, n).
[[nodiscard]] inline CohomologyClass todd_from_roots(const ChernRoots& roots, int order) {
    const int ord = effective_order(roots.ring, order);
    const std::vector<Rational> series = todd_series(ord);
    CohomologyClass out = CohomologyClass::constant(roots.ring, Rational(1));
    for (const auto& x : roots.roots) out = (out * apply_series(series, x)).truncated(ord);
    return out;
}

/// Σ_i e^{x_i} truncated at degree min(order, n).
[[nodiscard]] inline CohomologyClass chern_character(const ChernRoots& roots, int order) {
    const int ord = effective_order(roots.ring, order);
    const std::vector<Rational> series = exp_coefficients(ord);
    CohomologyClass out(roots.ring);
    for (const auto& x : roots.roots) out += apply_series(series, x);
    return out.truncated(ord);
}

/// Coefficient of t^k in Π_i 1 / (1 - t e^{x_i}), truncated at min(order, n).
[[nodiscard]] inline CohomologyClass ch_sym(const ChernRoots& roots, int k, int order) {
    if (k < 0) fail(ErrorKind::input, "symmetric power must be nonnegative");
    const int ord = effective_order(roots.ring, order);
    const std::vector<Rational> exp_c = exp_coefficients(ord);
    // series[j] = coefficient of t^j of the running product
    std::vector<CohomologyClass> series(static_cast<std::size_t>(k + 1), CohomologyClass(roots.ring));
    series[0] = CohomologyClass::constant(roots.ring, Rational(1));
    for (const auto& x : roots.roots) {
        const CohomologyClass e = apply_series(exp_c, x);
        std::vector<CohomologyClass> geometric;  // (t e^x)^j coefficients
        geometric.push_back(CohomologyClass::constant(roots.ring, Rational(1)));
        for (int j = 1; j <= k; ++j) geometric.push_back((geometric.back() * e).truncated(ord));
        std::vector<CohomologyClass> next(static_cast<std::size_t>(k + 1), CohomologyClass(roots.ring));
        for (int a = 0; a <= k; ++a)
            for (int b = 0; a + b <= k; ++b) next[a + b] += (series[a] * geometric[b]).truncated(ord);
        series = std::move(next);
    }
    return series[k];
}

/// Elementary symmetric polynomial e_j of the roots.
[[nodiscard]] inline CohomologyClass elementary_symmetric(const ChernRoots& roots, int j) {
    // Π (1 + x_i) graded by degree.
    std::vector<CohomologyClass> e(static_cast<std::size_t>(j + 1), CohomologyClass(roots.ring));
    e[0] = CohomologyClass::constant(roots.ring, Rational(1));
    for (const auto& x : roots.roots)
        for (int m = j; m >= 1; --m) e[m] += e[m - 1] * x;
    return e[j];
}

/// Calabi-Yau ring: generators c2, c3, c4 truncated above degree n.
[[nodiscard]] inline RingPtr cy_ring(int n) { return make_ring(n, {{"c2", 2}, {"c3", 3}, {"c4", 4}}); }

/// Coefficients of td = 1 + a c2 + b c3 + s c2^2 + d c4 when c1 = 0.
struct ToddCoefficients {
    Rational c2;
    Rational c3;
    Rational c2_sq;
    Rational c4;

    /// Expansion of Π x_i/(1 - e^{-x_i}) with c1 = 0.
    [[nodiscard]] static ToddCoefficients from_roots() {
        return {Rational(1, 12), Rational(0), Rational(3, 720), Rational(-1, 720)};
    }
    /// Coefficients as printed in the source expansion.
    [[nodiscard]] static ToddCoefficients published() {
        return {Rational(1, 12), Rational(1, 24), Rational(-1, 720), Rational(1, 720)};
    }

    friend bool operator==(const ToddCoefficients&, const ToddCoefficients&) = default;
};

[[nodiscard]] inline CohomologyClass todd_cy(const RingPtr& ring, const ToddCoefficients& t = ToddCoefficients::from_roots()) {
    const auto c2 = CohomologyClass::generator(ring, "c2");
    const auto c3 = CohomologyClass::generator(ring, "c3");
    const auto c4 = CohomologyClass::generator(ring, "c4");
    return CohomologyClass::constant(ring, Rational(1)) + t.c2 * c2 + t.c3 * c3 + t.c2_sq * (c2 * c2) + t.c4 * c4;
}

/// todd_cy(n) in a fresh CY ring.
[[nodiscard]] inline CohomologyClass todd_cy(int n, const ToddCoefficients& t = ToddCoefficients::from_roots()) {
    if (n < 1) fail(ErrorKind::input, "todd_cy needs n >= 1");
    return todd_cy(cy_ring(n), t);
}

/// Maps a CY-ring class into the root ring via c_j ↦ e_j(roots).
[[nodiscard]] inline CohomologyClass cy_to_roots(const CohomologyClass& cls, const ChernRoots& roots) {
    return substitute(cls, {elementary_symmetric(roots, 2), elementary_symmetric(roots, 3), elementary_symmetric(roots, 4)},
                      roots.ring);
}

struct CurvatureChern {
    std::complex<double> c1;
    std::complex<double> c2;
};

/// Chern-Weil densities of a constant curvature matrix F.
[[nodiscard]] inline CurvatureChern chern_from_curvature(const Eigen::MatrixXcd& f) {
    if (f.rows() != f.cols()) fail(ErrorKind::input, "curvature matrix must be square");
    const std::complex<double> two_pi_i(0.0, 2.0 * std::numbers::pi);
    const std::complex<double> tr = f.trace();
    const std::complex<double> tr_sq = (f * f).trace();
    return {tr / two_pi_i, (0.5 * tr * tr - 0.5 * tr_sq) / (two_pi_i * two_pi_i)};
}

/// Degree-n intersection data of a Calabi-Yau manifold.
struct CYManifoldData {
    std::string name;
    int n = 2;
    IntersectionNumbers intersections;

    [[nodiscard]] RingPtr ring() const { return cy_ring(n); }
};

enum class LambdaTag { plus, minus };

[[nodiscard]] constexpr const char* to_string(LambdaTag t) noexcept { return t == LambdaTag::plus ? "+" : "-"; }

struct SRRReport {
    Rational A0;
    Rational A2;
    Rational A3;
    Rational A4;
    Rational chi;
    LambdaTag lambda_tag = LambdaTag::plus;
};

namespace detail {

inline void require_bundle(const CYManifoldData& m, const std::vector<CohomologyClass>& ch) {
    if (m.n < 1) fail(ErrorKind::input, "manifold dimension must be >= 1");
    if (ch.size() != static_cast<std::size_t>(m.n + 1)) {
        fail(ErrorKind::input, "expected " + std::to_string(m.n + 1) + " bundle characters (k = 0..n), got " +
                                   std::to_string(ch.size()));
    }
    const RingPtr ring = m.ring();
    for (const auto& c : ch)
        if (!(*c.ring() == *ring)) fail(ErrorKind::input, "bundle character not in the manifold's ring");
}

inline Rational alternating_integral(const CYManifoldData& m, const std::vector<CohomologyClass>& ch,
                                     const CohomologyClass& factor) {
    Rational total = 0;
    for (std::size_t k = 0; k < ch.size(); ++k) {
        const Rational v = integrate(ch[k] * factor, m.intersections);
        total += (k % 2 == 0) ? v : Rational(-v);
    }
    return total;
}

}  // namespace detail

/// A0..A4 of Σ_k (-1)^k ∫ ch_k ∧ td, split by Todd term.
[[nodiscard]] inline SRRReport srr_decomposition(const CYManifoldData& m, const std::vector<CohomologyClass>& ch,
                                                 LambdaTag tag,
                                                 const ToddCoefficients& t = ToddCoefficients::from_roots()) {
    detail::require_bundle(m, ch);
    const RingPtr ring = ch.front().ring();
    const auto one = CohomologyClass::constant(ring, Rational(1));
    const auto c2 = CohomologyClass::generator(ring, "c2");
    const auto c3 = CohomologyClass::generator(ring, "c3");
    const auto c4 = CohomologyClass::generator(ring, "c4");
    SRRReport r;
    r.lambda_tag = tag;
    r.A0 = detail::alternating_integral(m, ch, one);
    r.A2 = t.c2 * detail::alternating_integral(m, ch, c2);
    r.A3 = t.c3 * detail::alternating_integral(m, ch, c3);
    r.A4 = detail::alternating_integral(m, ch, t.c2_sq * (c2 * c2) + t.c4 * c4);
    r.chi = r.A0 + r.A2 + r.A3 + r.A4;
    return r;
}

/// Σ_k (-1)^k ∫ ch_k ∧ td(M) with the full CY Todd class.
[[nodiscard]] inline Rational euler_srr(const CYManifoldData& m, const std::vector<CohomologyClass>& ch,
                                        const ToddCoefficients& t = ToddCoefficients::from_roots()) {
    detail::require_bundle(m, ch);
    return detail::alternating_integral(m, ch, todd_cy(ch.front().ring(), t));
}

/// K3: n = 2, ∫c2 = 24.
[[nodiscard]] inline CYManifoldData k3_surface() { return {"K3", 2, {{"c2", Rational(24)}}}; }

/// ch(Ω^k ⊗ Sym^k G) on K3 with G flat of rank 3:
/// ch(Ω^0) = 1, ch(Ω^1) = 2 - c2, ch(Ω^2) = 1, rank Sym^k G = C(k+2, 2).
[[nodiscard]] inline std::vector<CohomologyClass> k3_flat_rank3_bundle() {
    const RingPtr ring = cy_ring(2);
    const auto one = CohomologyClass::constant(ring, Rational(1));
    const auto c2 = CohomologyClass::generator(ring, "c2");
    return {one, Rational(3) * (Rational(2) * one - c2), Rational(6) * one};
}

}  // namespace spencer
