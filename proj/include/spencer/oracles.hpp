#pragma once

// Brute-force references for the characteristic-class calculator.

#include <string>
#include <vector>

#include "spencer/char_class.hpp"
#include "spencer/graded_ring.hpp"

namespace spencer::reference {

/// exp(L) = Σ_m L^m / m! for a class L, truncated by the ring.
[[nodiscard]] inline CohomologyClass exp_direct(const CohomologyClass& l) {
    CohomologyClass out(l.ring());
    CohomologyClass term = CohomologyClass::constant(l.ring(), Rational(1));
    for (int m = 0; !term.is_zero(); ++m) {
        out += term;
        term = term * l * Rational(1, m + 1);
    }
    return out;
}

/// Σ over exponent tuples i_1 + ... + i_r = k of exp(Σ_j i_j x_j).
[[nodiscard]] inline CohomologyClass ch_sym_monomial_sum(const ChernRoots& roots, int k) {
    CohomologyClass out(roots.ring);
    std::vector<int> tuple(roots.roots.size(), 0);
    auto visit = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == tuple.size()) {
            tuple[pos] = remaining;
            CohomologyClass lin(roots.ring);
            for (std::size_t j = 0; j < tuple.size(); ++j) lin += Rational(tuple[j]) * roots.roots[j];
            out += exp_direct(lin);
            return;
        }
        for (int i = 0; i <= remaining; ++i) {
            tuple[pos] = i;
            self(self, pos + 1, remaining - i);
        }
    };
    if (tuple.empty()) return k == 0 ? CohomologyClass::constant(roots.ring, Rational(1)) : out;
    visit(visit, 0, k);
    return out;
}

struct IdentityCheck {
    std::string label;
    bool passed = false;
};

/// todd_cy(coefficients) against the root product under Σx_i = 0, n = rank.
[[nodiscard]] inline std::vector<IdentityCheck> todd_root_suite(const ToddCoefficients& coefficients,
                                                                std::vector<int> dims = {2, 3, 4}) {
    std::vector<IdentityCheck> out;
    for (int n : dims) {
        const ChernRoots roots = make_roots(n, n, true);
        const CohomologyClass lhs = cy_to_roots(todd_cy(n, coefficients), roots);
        const CohomologyClass rhs = todd_from_roots(roots, 4);
        out.push_back({"todd n=" + std::to_string(n), lhs == rhs});
    }
    return out;
}

/// ch_sym against the monomial sum for rank <= 3, k <= 4, through degree 4.
[[nodiscard]] inline std::vector<IdentityCheck> sym_character_suite(int max_rank = 3, int max_k = 4) {
    std::vector<IdentityCheck> out;
    for (int r = 1; r <= max_rank; ++r) {
        const ChernRoots roots = make_roots(4, r, false);
        for (int k = 0; k <= max_k; ++k) {
            out.push_back({"ch_sym rank=" + std::to_string(r) + " k=" + std::to_string(k),
                           ch_sym(roots, k, 4) == ch_sym_monomial_sum(roots, k)});
        }
    }
    return out;
}

}  // namespace spencer::reference
