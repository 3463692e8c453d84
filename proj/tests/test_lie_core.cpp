#include <array>
#include <vector>

#include <catch_amalgamated.hpp>

#include "oracles/nested_bracket.hpp"
#include "oracles/random.hpp"
#include "spencer/lie_core.hpp"

using namespace spencer;
using Catch::Matchers::WithinAbs;

namespace {

const LieAlgebra kAlg = LieAlgebra::su2_epsilon();

LieVector e(int a) { return LieVector::basis(3, a); }

}  // namespace

TEST_CASE("bracket of basis vectors follows the epsilon table", "[lie_core]") {
    const LieVector b = bracket(kAlg, e(0), e(1));
    CHECK(b.coeffs.isApprox(e(2).coeffs));
    CHECK(bracket(kAlg, e(1), e(2)).coeffs.isApprox(e(0).coeffs));
    CHECK(bracket(kAlg, e(2), e(0)).coeffs.isApprox(e(1).coeffs));
}

TEST_CASE("bracket is antisymmetric and vanishes on the diagonal", "[lie_core]") {
    oracle::Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const LieVector x = rng.lie();
        const LieVector y = rng.lie();
        CHECK(bracket(kAlg, x, x).coeffs.cwiseAbs().maxCoeff() == 0.0);
        CHECK((bracket(kAlg, x, y).coeffs + bracket(kAlg, y, x).coeffs).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("Jacobi identity and antisymmetry of the structure constants", "[lie_core]") {
    CHECK(kAlg.antisymmetry_residual() == 0.0);
    CHECK(kAlg.jacobi_residual() < 1e-14);
    // direct evaluation over basis triples
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const LieVector j = bracket(kAlg, e(a), bracket(kAlg, e(b), e(c)));
                const LieVector k = bracket(kAlg, e(b), bracket(kAlg, e(c), e(a)));
                const LieVector l = bracket(kAlg, e(c), bracket(kAlg, e(a), e(b)));
                CHECK((j.coeffs + k.coeffs + l.coeffs).cwiseAbs().maxCoeff() < 1e-14);
            }
}

TEST_CASE("bracket rejects dimension mismatch", "[lie_core]") {
    const LieVector bad{Eigen::VectorXd::Zero(2)};
    CHECK_THROWS_AS(bracket(kAlg, bad, e(0)), Error);
    try {
        (void)bracket(kAlg, bad, e(0));
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::input);
    }
}

TEST_CASE("Killing form is -2 times the identity", "[lie_core]") {
    // oracle: ad matrices built from the Levi-Civita symbol
    Eigen::Matrix3d ad[3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) ad[a](c, b) = oracle::levi_civita(a, b, c);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double expected = (ad[a] * ad[b]).trace();
            CHECK_THAT(killing_pairing(kAlg, e(a), e(b)), WithinAbs(expected, 1e-14));
            CHECK_THAT(kAlg.killing_form()(a, b), WithinAbs(expected, 1e-14));
        }
    CHECK_THAT(killing_pairing(kAlg, e(0), e(0)), WithinAbs(-2.0, 1e-14));
    CHECK(killing_pairing(kAlg, e(0), e(1)) == 0.0);
    CHECK(std::abs(kAlg.killing_form().determinant()) > 0.0);
    CHECK((kAlg.killing_form() - kAlg.killing_form().transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Killing form is ad-invariant", "[lie_core]") {
    oracle::Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const LieVector x = rng.lie(), y = rng.lie(), z = rng.lie();
        const double lhs = killing_pairing(kAlg, bracket(kAlg, z, x), y) + killing_pairing(kAlg, x, bracket(kAlg, z, y));
        CHECK(std::abs(lhs) < 1e-14);
    }
}

TEST_CASE("dual pairing is componentwise", "[lie_core]") {
    CHECK(pair(make_dual({0, 0, 1}), e(2)) == 1.0);
    CHECK(pair(make_dual({1, 2, 3}), LieVector{Eigen::Vector3d(1, 1, 1)}) == 6.0);
    oracle::Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const DualFunctional l = rng.dual();
        const LieVector x = rng.lie();
        CHECK(pair(l.mirror(), x) == -pair(l, x));
    }
    CHECK_THROWS_AS(pair(make_dual({1, 2}), e(0)), Error);
}

TEST_CASE("symmetric power dimensions", "[lie_core]") {
    CHECK(sym_space_dim(0) == 1);
    CHECK(sym_space_dim(1) == 3);
    CHECK(sym_space_dim(2) == 6);
    for (int k = 0; k <= 5; ++k) {
        // count sorted multi-indices directly
        std::size_t count = 0;
        std::vector<int> idx(static_cast<std::size_t>(k), 0);
        auto rec = [&](auto&& self, int pos, int start) -> void {
            if (pos == k) {
                ++count;
                return;
            }
            for (int a = start; a < 3; ++a) self(self, pos + 1, a);
        };
        rec(rec, 0, 0);
        CHECK(SymBasis(k, 3).size() == count);
        CHECK(sym_space_dim(k) == count);
    }
}

TEST_CASE("symmetric tensor evaluation is permutation invariant", "[lie_core]") {
    oracle::Rng rng(14);
    for (int k = 1; k <= 3; ++k) {
        const SymTensor t = rng.tensor(k);
        std::vector<LieVector> w;
        for (int i = 0; i < k; ++i) w.push_back(rng.lie());
        const double base = t.evaluate(w);
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
            std::vector<LieVector> p;
            for (int i : perm) p.push_back(w[static_cast<std::size_t>(i)]);
            CHECK_THAT(t.evaluate(p), WithinAbs(base, 1e-13));
        }
    }
}

TEST_CASE("delta on generators matches the nested bracket value", "[lie_core]") {
    const SymTensor t = delta_on_generator(kAlg, make_dual({0, 0, 1}), e(2));
    const std::array<LieVector, 2> w{e(0), e(0)};
    CHECK_THAT(t.evaluate(w), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(oracle::generator_value({0, 0, 1}, 2, 0, 0), WithinAbs(-1.0, 1e-15));

    const SymTensor zero = delta_on_generator(kAlg, make_dual({0.3, -1, 2}), LieVector{Eigen::Vector3d::Zero()});
    CHECK(zero.coeffs().cwiseAbs().maxCoeff() == 0.0);

    oracle::Rng rng(15);
    for (int i = 0; i < 20; ++i) {
        const DualFunctional l = rng.dual();
        const LieVector v = rng.lie();
        const SymTensor plus = delta_on_generator(kAlg, l, v);
        const SymTensor minus = delta_on_generator(kAlg, l.mirror(), v);
        CHECK((plus.coeffs() + minus.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("delta on scalars is c lambda", "[lie_core]") {
    const DualFunctional l = make_dual({0.5, -2, 3});
    CHECK(delta_on_scalar(l, 1.0).coeffs() == l.coeffs);
    CHECK(delta_on_scalar(l, 0.0).coeffs().cwiseAbs().maxCoeff() == 0.0);
    CHECK(delta_on_scalar(make_dual({1, 0, 0}), 2.0).coeffs() == Eigen::Vector3d(2, 0, 0));
}

TEST_CASE("Spencer extension basic cases", "[lie_core]") {
    const DualFunctional l = make_dual({0.2, -0.7, 1.1});
    CHECK(spencer_extension(kAlg, l, SymTensor::scalar(1.0, 3)).coeffs() == l.coeffs);

    SymTensor sq(2, 3);
    sq.coeffs()[static_cast<Eigen::Index>(SymBasis(2, 3).index_of({0, 0}))] = 1.0;
    CHECK(spencer_extension(kAlg, l, sq).coeffs().cwiseAbs().maxCoeff() == 0.0);

    const SymTensor cubic(3, 3);
    CHECK_THROWS_AS(spencer_extension(kAlg, l, cubic, 3), Error);
    try {
        (void)spencer_extension(kAlg, l, cubic, 3);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::capacity);
    }
}

TEST_CASE("Spencer extension is exactly antisymmetric under the mirror", "[lie_core]") {
    oracle::Rng rng(16);
    for (int i = 0; i < 200; ++i) {
        const int k = rng.integer(0, 3);
        const DualFunctional l = rng.dual();
        const SymTensor s = rng.tensor(k);
        const SymTensor plus = spencer_extension(kAlg, l, s, 4);
        const SymTensor minus = spencer_extension(kAlg, l.mirror(), s, 4);
        REQUIRE(plus.degree() == k + 1);
        REQUIRE(plus.coeffs().size() == static_cast<Eigen::Index>(sym_space_dim(k + 1)));
        CHECK((plus.coeffs() + minus.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Spencer extension is linear in lambda and in s", "[lie_core]") {
    oracle::Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        const int k = rng.integer(0, 3);
        const DualFunctional l1 = rng.dual(), l2 = rng.dual();
        const SymTensor s1 = rng.tensor(k), s2 = rng.tensor(k);
        const double a = rng.uniform(), b = rng.uniform();
        const DualFunctional lsum{a * l1.coeffs + b * l2.coeffs};
        const Eigen::VectorXd lhs = spencer_extension(kAlg, lsum, s1, 4).coeffs();
        const Eigen::VectorXd rhs =
            a * spencer_extension(kAlg, l1, s1, 4).coeffs() + b * spencer_extension(kAlg, l2, s1, 4).coeffs();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));

        const Eigen::VectorXd lhs_s = spencer_extension(kAlg, l1, a * s1 + b * s2, 4).coeffs();
        const Eigen::VectorXd rhs_s =
            a * spencer_extension(kAlg, l1, s1, 4).coeffs() + b * spencer_extension(kAlg, l1, s2, 4).coeffs();
        CHECK((lhs_s - rhs_s).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs_s.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("degree-one extension matrix equals the entrywise nested-bracket matrix", "[lie_core]") {
    oracle::Rng rng(18);
    std::vector<std::array<double, 3>> lambdas{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0.5}};
    for (int i = 0; i < 10; ++i) lambdas.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    for (const auto& l : lambdas) {
        const Eigen::MatrixXd lib = extension_matrix(kAlg, make_dual({l[0], l[1], l[2]}), 1);
        const Eigen::MatrixXd ref = oracle::degree_one_matrix(l);
        CHECK((lib - ref).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("second extension of the unit is nonzero for lambda = e3", "[lie_core]") {
    const DualFunctional l = make_dual({0, 0, 1});
    const SymTensor once = spencer_extension(kAlg, l, SymTensor::scalar(1.0, 3));
    const SymTensor twice = spencer_extension(kAlg, l, once);
    const std::array<LieVector, 2> w{e(0), e(0)};
    CHECK_THAT(twice.evaluate(w), WithinAbs(-1.0, 1e-15));
}
