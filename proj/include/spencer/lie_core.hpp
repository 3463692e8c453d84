#pragma once

// Lie algebra data, symmetric tensor powers and the Spencer extension
// operator on the symmetric algebra.
//
// Conventions:
//  - A symmetric k-tensor is stored by its coefficients in the monomial
//    basis e*_{j1} ⊙ ... ⊙ e*_{jk} (sorted multi-index j1 <= ... <= jk),
//    enumerated lexicographically.
//  - ⊙ is the normalized symmetrization, so a monomial evaluates on test
//    vectors as (1/k!) Σ_σ Π_i w_{σ(i)}[j_i]. Under this convention the
//    product of two monomials is the monomial of the merged multi-index.
//  - The fixed basis identifies e_a with e*_a.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spencer/error.hpp"

namespace spencer {

inline constexpr int kDefaultQMax = 3;

/// Sorted (non-decreasing) multi-index over basis letters 0..dim-1.
using MultiIndex = std::vector<int>;

struct LieVector {
    Eigen::VectorXd coeffs;

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(coeffs.size()); }

    static LieVector basis(int dim, int a) {
        LieVector v{Eigen::VectorXd::Zero(dim)};
        v.coeffs[a] = 1.0;
        return v;
    }
};

/// Element of the dual space, components in the dual basis.
struct DualFunctional {
    Eigen::VectorXd coeffs;

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(coeffs.size()); }

    [[nodiscard]] double norm_sq() const {
        double s = 0.0;
        for (Eigen::Index a = 0; a < coeffs.size(); ++a) s += coeffs[a] * coeffs[a];
        return s;
    }

    [[nodiscard]] DualFunctional mirror() const { return DualFunctional{-coeffs}; }

    [[nodiscard]] bool is_zero() const { return (coeffs.array() == 0.0).all(); }
};

inline DualFunctional make_dual(std::initializer_list<double> values) {
    DualFunctional l{Eigen::VectorXd(static_cast<Eigen::Index>(values.size()))};
    Eigen::Index i = 0;
    for (double v : values) l.coeffs[i++] = v;
    return l;
}

/// Real Lie algebra given by structure constants [e_a, e_b] = Σ_c f[a][b][c] e_c.
class LieAlgebra {
public:
    LieAlgebra(std::string name, int dim, std::vector<double> structure_constants)
        : name_(std::move(name)), dim_(dim), f_(std::move(structure_constants)) {
        if (dim_ <= 0) fail(ErrorKind::input, "Lie algebra dimension must be positive");
        if (f_.size() != static_cast<std::size_t>(dim_ * dim_ * dim_)) {
            fail(ErrorKind::input, "structure constant array must have dim^3 entries");
        }
    }

    /// so(3) ≅ su(2) in the real basis with f[a][b][c] = ε_abc.
    static LieAlgebra su2_epsilon() {
        std::vector<double> f(27, 0.0);
        auto set = [&](int a, int b, int c, double v) { f[(a * 3 + b) * 3 + c] = v; };
        set(0, 1, 2, 1.0);
        set(1, 2, 0, 1.0);
        set(2, 0, 1, 1.0);
        set(1, 0, 2, -1.0);
        set(2, 1, 0, -1.0);
        set(0, 2, 1, -1.0);
        return LieAlgebra("su2_epsilon", 3, std::move(f));
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }

    [[nodiscard]] double structure(int a, int b, int c) const {
        return f_[static_cast<std::size_t>((a * dim_ + b) * dim_ + c)];
    }

    /// Matrix of ad_{e_a}: column b holds the coordinates of [e_a, e_b].
    [[nodiscard]] Eigen::MatrixXd ad(int a) const {
        Eigen::MatrixXd m(dim_, dim_);
        for (int b = 0; b < dim_; ++b)
            for (int c = 0; c < dim_; ++c) m(c, b) = structure(a, b, c);
        return m;
    }

    [[nodiscard]] Eigen::MatrixXd killing_form() const {
        std::vector<Eigen::MatrixXd> ads;
        ads.reserve(static_cast<std::size_t>(dim_));
        for (int a = 0; a < dim_; ++a) ads.push_back(ad(a));
        Eigen::MatrixXd k(dim_, dim_);
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b) k(a, b) = (ads[a] * ads[b]).trace();
        return k;
    }

    [[nodiscard]] double antisymmetry_residual() const {
        double r = 0.0;
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b)
                for (int c = 0; c < dim_; ++c)
                    r = std::max(r, std::abs(structure(a, b, c) + structure(b, a, c)));
        return r;
    }

    /// max over (a,b,c,d) of |Σ_e f_ab^e f_ec^d + f_bc^e f_ea^d + f_ca^e f_eb^d|
    [[nodiscard]] double jacobi_residual() const {
        double r = 0.0;
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b)
                for (int c = 0; c < dim_; ++c)
                    for (int d = 0; d < dim_; ++d) {
                        double s = 0.0;
                        for (int e = 0; e < dim_; ++e) {
                            s += structure(a, b, e) * structure(e, c, d) +
                                 structure(b, c, e) * structure(e, a, d) +
                                 structure(c, a, e) * structure(e, b, d);
                        }
                        r = std::max(r, std::abs(s));
                    }
        return r;
    }

private:
    std::string name_;
    int dim_;
    std::vector<double> f_;
};

namespace detail {

inline void require_dim(int expected, int got, const char* what) {
    if (expected != got) {
        fail(ErrorKind::input, std::string(what) + ": dimension mismatch (expected " +
                                   std::to_string(expected) + ", got " +
                                   std::to_string(got) + ")");
    }
}

}  // namespace detail

inline LieVector bracket(const LieAlgebra& alg, const LieVector& x, const LieVector& y) {
    detail::require_dim(alg.dim(), x.dim(), "bracket");
    detail::require_dim(alg.dim(), y.dim(), "bracket");
    const int n = alg.dim();
    LieVector out{Eigen::VectorXd::Zero(n)};
    for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += alg.structure(a, b, c) * x.coeffs[a] * y.coeffs[b];
        out.coeffs[c] = s;
    }
    return out;
}

/// tr(ad_X ∘ ad_Y)
inline double killing_pairing(const LieAlgebra& alg, const LieVector& x, const LieVector& y) {
    detail::require_dim(alg.dim(), x.dim(), "killing_pairing");
    detail::require_dim(alg.dim(), y.dim(), "killing_pairing");
    Eigen::MatrixXd ad_x = Eigen::MatrixXd::Zero(alg.dim(), alg.dim());
    Eigen::MatrixXd ad_y = Eigen::MatrixXd::Zero(alg.dim(), alg.dim());
    for (int a = 0; a < alg.dim(); ++a) {
        ad_x += x.coeffs[a] * alg.ad(a);
        ad_y += y.coeffs[a] * alg.ad(a);
    }
    return (ad_x * ad_y).trace();
}

inline double pair(const DualFunctional& lambda, const LieVector& x) {
    detail::require_dim(lambda.dim(), x.dim(), "pair");
    double s = 0.0;
    for (Eigen::Index a = 0; a < x.coeffs.size(); ++a) s += lambda.coeffs[a] * x.coeffs[a];
    return s;
}

/// Number of sorted multi-indices of length k over dim letters: C(k+dim-1, k).
[[nodiscard]] constexpr std::size_t sym_space_dim(int k, int dim = 3) noexcept {
    if (k < 0 || dim <= 0) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::size_t>(dim - 1 + i) / static_cast<std::size_t>(i);
    }
    return r;
}

/// Lexicographic enumeration of the monomial basis of Sym^k over dim letters.
class SymBasis {
public:
    SymBasis(int degree, int dim) : degree_(degree), dim_(dim) {
        if (degree < 0) fail(ErrorKind::input, "symmetric degree must be nonnegative");
        MultiIndex current(static_cast<std::size_t>(degree), 0);
        enumerate(current, 0, 0);
        for (std::size_t i = 0; i < elements_.size(); ++i) lookup_.emplace(elements_[i], i);
    }

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] const MultiIndex& operator[](std::size_t i) const { return elements_[i]; }
    [[nodiscard]] const std::vector<MultiIndex>& elements() const noexcept { return elements_; }

    [[nodiscard]] std::size_t index_of(const MultiIndex& idx) const {
        auto it = lookup_.find(idx);
        if (it == lookup_.end()) fail(ErrorKind::input, "multi-index not in basis");
        return it->second;
    }

private:
    void enumerate(MultiIndex& current, std::size_t pos, int start) {
        if (pos == current.size()) {
            elements_.push_back(current);
            return;
        }
        for (int a = start; a < dim_; ++a) {
            current[pos] = a;
            enumerate(current, pos + 1, a);
        }
    }

    int degree_;
    int dim_;
    std::vector<MultiIndex> elements_;
    std::map<MultiIndex, std::size_t> lookup_;
};

/// k!/Π(multiplicity!): number of orderings of a multi-index.
[[nodiscard]] inline double multinomial_count(const MultiIndex& idx) {
    double r = 1.0;
    for (std::size_t i = 1; i <= idx.size(); ++i) r *= static_cast<double>(i);
    std::size_t run = 1;
    for (std::size_t i = 1; i <= idx.size(); ++i) {
        if (i < idx.size() && idx[i] == idx[i - 1]) {
            ++run;
        } else {
            for (std::size_t j = 2; j <= run; ++j) r /= static_cast<double>(j);
            run = 1;
        }
    }
    return r;
}

/// Human-readable label, 1-based: "e1*e1*e3"; degree 0 is "1".
[[nodiscard]] inline std::string multi_index_label(const MultiIndex& idx) {
    if (idx.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += '*';
        s += 'e';
        s += std::to_string(idx[i] + 1);
    }
    return s;
}

/// Symmetric covariant k-tensor on a dim-dimensional Lie algebra.
class SymTensor {
public:
    SymTensor(int degree, int dim)
        : degree_(degree), dim_(dim),
          coeffs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sym_space_dim(degree, dim)))) {
        if (degree < 0) fail(ErrorKind::input, "symmetric degree must be nonnegative");
    }

    SymTensor(int degree, int dim, Eigen::VectorXd coeffs) : SymTensor(degree, dim) {
        if (coeffs.size() != coeffs_.size()) {
            fail(ErrorKind::input, "coefficient vector does not match sym_space_dim");
        }
        coeffs_ = std::move(coeffs);
    }

    static SymTensor scalar(double c, int dim) {
        SymTensor t(0, dim);
        t.coeffs_[0] = c;
        return t;
    }

    /// Builds the tensor whose value on (e_{j1},...,e_{jk}) is values(J).
    template <typename Fn>
    static SymTensor from_values(int degree, int dim, Fn&& values) {
        SymTensor t(degree, dim);
        SymBasis basis(degree, dim);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            t.coeffs_[static_cast<Eigen::Index>(i)] = values(basis[i]) * multinomial_count(basis[i]);
        }
        return t;
    }

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] Eigen::VectorXd& coeffs() noexcept { return coeffs_; }

    [[nodiscard]] double coefficient(const MultiIndex& idx) const {
        return coeffs_[static_cast<Eigen::Index>(SymBasis(degree_, dim_).index_of(idx))];
    }

    /// T(w_1, ..., w_k)
    [[nodiscard]] double evaluate(std::span<const LieVector> tests) const {
        if (tests.size() != static_cast<std::size_t>(degree_)) {
            fail(ErrorKind::input, "evaluate: need exactly `degree` test vectors");
        }
        for (const auto& w : tests) detail::require_dim(dim_, w.dim(), "evaluate");
        if (degree_ == 0) return coeffs_[0];
        SymBasis basis(degree_, dim_);
        double factorial = 1.0;
        for (int i = 2; i <= degree_; ++i) factorial *= i;
        double total = 0.0;
        std::vector<int> perm(static_cast<std::size_t>(degree_));
        for (std::size_t m = 0; m < basis.size(); ++m) {
            const double c = coeffs_[static_cast<Eigen::Index>(m)];
            if (c == 0.0) continue;
            const MultiIndex& idx = basis[m];
            std::iota(perm.begin(), perm.end(), 0);
            double sum = 0.0;
            do {
                double prod = 1.0;
                for (int i = 0; i < degree_; ++i) prod *= tests[perm[i]].coeffs[idx[i]];
                sum += prod;
            } while (std::next_permutation(perm.begin(), perm.end()));
            total += c * sum / factorial;
        }
        return total;
    }

    [[nodiscard]] SymTensor operator-() const { return SymTensor(degree_, dim_, -coeffs_); }

    friend SymTensor operator+(const SymTensor& a, const SymTensor& b) {
        if (a.degree_ != b.degree_ || a.dim_ != b.dim_) fail(ErrorKind::input, "tensor sum: shape mismatch");
        return SymTensor(a.degree_, a.dim_, a.coeffs_ + b.coeffs_);
    }

    friend SymTensor operator*(double s, const SymTensor& t) {
        return SymTensor(t.degree_, t.dim_, s * t.coeffs_);
    }

private:
    int degree_;
    int dim_;
    Eigen::VectorXd coeffs_;
};

/// Rule on generators: δ(v)(w1,w2) = ½(⟨λ,[w1,[w2,v]]⟩ + ⟨λ,[w2,[w1,v]]⟩).
inline SymTensor delta_on_generator(const LieAlgebra& alg, const DualFunctional& lambda,
                                    const LieVector& v) {
    detail::require_dim(alg.dim(), lambda.dim(), "delta_on_generator");
    detail::require_dim(alg.dim(), v.dim(), "delta_on_generator");
    const int n = alg.dim();
    return SymTensor::from_values(2, n, [&](const MultiIndex& idx) {
        const LieVector w1 = LieVector::basis(n, idx[0]);
        const LieVector w2 = LieVector::basis(n, idx[1]);
        const double first = pair(lambda, bracket(alg, w1, bracket(alg, w2, v)));
        const double second = pair(lambda, bracket(alg, w2, bracket(alg, w1, v)));
        return 0.5 * (first + second);
    });
}

/// Degree-0 case: c ↦ (X ↦ c⟨λ, X⟩).
inline SymTensor delta_on_scalar(const DualFunctional& lambda, double c) {
    SymTensor t(1, lambda.dim());
    for (Eigen::Index a = 0; a < lambda.coeffs.size(); ++a) t.coeffs()[a] = c * lambda.coeffs[a];
    return t;
}

/// Spencer extension δ^λ : Sym^k → Sym^{k+1}.
///
/// Each sorted monomial is differentiated factor by factor from the left,
/// the p-th factor (0-based) carrying the sign (-1)^p, and the result is
/// extended linearly. Every term carries exactly one factor of λ, so
/// δ^{-λ} = -δ^λ holds bit-for-bit.
inline SymTensor spencer_extension(const LieAlgebra& alg, const DualFunctional& lambda,
                                   const SymTensor& s, int q_max = kDefaultQMax) {
    detail::require_dim(alg.dim(), lambda.dim(), "spencer_extension");
    detail::require_dim(alg.dim(), s.dim(), "spencer_extension");
    if (s.degree() + 1 > q_max) {
        fail(ErrorKind::capacity, "spencer_extension: output degree " + std::to_string(s.degree() + 1) +
                                      " exceeds q_max " + std::to_string(q_max));
    }
    if (s.degree() == 0) return delta_on_scalar(lambda, s.coeffs()[0]);

    const int n = alg.dim();
    const int k = s.degree();
    std::vector<SymTensor> generator_images;
    generator_images.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        generator_images.push_back(delta_on_generator(alg, lambda, LieVector::basis(n, a)));
    }

    const SymBasis in_basis(k, n);
    const SymBasis out_basis(k + 1, n);
    const SymBasis quad_basis(2, n);
    SymTensor out(k + 1, n);
    MultiIndex target;
    for (std::size_t j = 0; j < in_basis.size(); ++j) {
        const double c = s.coeffs()[static_cast<Eigen::Index>(j)];
        if (c == 0.0) continue;
        const MultiIndex& idx = in_basis[j];
        for (int p = 0; p < k; ++p) {
            const double sign = (p % 2 == 0) ? 1.0 : -1.0;
            const SymTensor& image = generator_images[static_cast<std::size_t>(idx[p])];
            for (std::size_t m = 0; m < quad_basis.size(); ++m) {
                const double g = image.coeffs()[static_cast<Eigen::Index>(m)];
                if (g == 0.0) continue;
                target.clear();
                for (int i = 0; i < k; ++i)
                    if (i != p) target.push_back(idx[i]);
                target.push_back(quad_basis[m][0]);
                target.push_back(quad_basis[m][1]);
                std::sort(target.begin(), target.end());
                out.coeffs()[static_cast<Eigen::Index>(out_basis.index_of(target))] += sign * (c * g);
            }
        }
    }
    return out;
}

/// Matrix of δ^λ restricted to Sym^k, in monomial coordinates
/// (rows: Sym^{k+1} basis, columns: Sym^k basis).
inline Eigen::MatrixXd extension_matrix(const LieAlgebra& alg, const DualFunctional& lambda, int k,
                                        int q_max = kDefaultQMax) {
    const int n = alg.dim();
    const SymBasis in_basis(k, n);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(sym_space_dim(k + 1, n)),
                      static_cast<Eigen::Index>(in_basis.size()));
    for (std::size_t j = 0; j < in_basis.size(); ++j) {
        SymTensor unit(k, n);
        unit.coeffs()[static_cast<Eigen::Index>(j)] = 1.0;
        m.col(static_cast<Eigen::Index>(j)) = spencer_extension(alg, lambda, unit, q_max).coeffs();
    }
    return m;
}

}  // namespace spencer
