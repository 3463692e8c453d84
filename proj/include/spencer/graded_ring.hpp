#pragma once

// Truncated graded polynomial ring over exact rationals.

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spencer/error.hpp"

namespace spencer {

using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Parses "p", "-p" or "p/q".
[[nodiscard]] inline Rational parse_rational(std::string_view text) {
    const std::string s(text);
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
        const boost::multiprecision::cpp_int num(s.substr(0, slash));
        const boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0) fail(ErrorKind::input, "zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorKind::input, "not a rational number: '" + s + "'");
    }
}

struct Generator {
    std::string name;
    int degree = 1;  // complex degree

    friend bool operator==(const Generator&, const Generator&) = default;
};

/// Generators with degrees, truncated above complex degree n.
class GradedRing {
public:
    GradedRing(int n, std::vector<Generator> generators) : n_(n), generators_(std::move(generators)) {
        if (n_ < 0) fail(ErrorKind::input, "ring dimension must be nonnegative");
        for (const auto& g : generators_)
            if (g.degree < 1) fail(ErrorKind::input, "generator '" + g.name + "' must have positive degree");
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] const std::vector<Generator>& generators() const noexcept { return generators_; }
    [[nodiscard]] std::size_t size() const noexcept { return generators_.size(); }

    [[nodiscard]] std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < generators_.size(); ++i)
            if (generators_[i].name == name) return i;
        fail(ErrorKind::input, "unknown generator '" + std::string(name) + "'");
    }

    friend bool operator==(const GradedRing& a, const GradedRing& b) {
        return a.n_ == b.n_ && a.generators_ == b.generators_;
    }

private:
    int n_;
    std::vector<Generator> generators_;
};

using RingPtr = std::shared_ptr<const GradedRing>;
using Exponents = std::vector<int>;

[[nodiscard]] inline RingPtr make_ring(int n, std::vector<Generator> generators) {
    return std::make_shared<const GradedRing>(n, std::move(generators));
}

/// Element of the truncated ring: Σ coeff · monomial.
class CohomologyClass {
public:
    explicit CohomologyClass(RingPtr ring) : ring_(std::move(ring)) {
        if (!ring_) fail(ErrorKind::input, "class needs a ring");
    }

    [[nodiscard]] static CohomologyClass constant(RingPtr ring, const Rational& c) {
        CohomologyClass out(std::move(ring));
        out.add_term(Exponents(out.ring_->size(), 0), c);
        return out;
    }

    [[nodiscard]] static CohomologyClass generator(RingPtr ring, std::string_view name) {
        CohomologyClass out(std::move(ring));
        Exponents e(out.ring_->size(), 0);
        e[out.ring_->index_of(name)] = 1;
        out.add_term(e, Rational(1));
        return out;
    }

    [[nodiscard]] const RingPtr& ring() const noexcept { return ring_; }
    [[nodiscard]] const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }

    [[nodiscard]] int degree_of(const Exponents& e) const {
        int d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * ring_->generators()[i].degree;
        return d;
    }

    /// Adds c·x^e, dropping it when above degree n.
    void add_term(const Exponents& e, const Rational& c) {
        if (e.size() != ring_->size()) fail(ErrorKind::input, "exponent vector length mismatch");
        if (c == 0 || degree_of(e) > ring_->n()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    [[nodiscard]] Rational coefficient(const Exponents& e) const {
        const auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Homogeneous part of complex degree d.
    [[nodiscard]] CohomologyClass component(int d) const {
        CohomologyClass out(ring_);
        for (const auto& [e, c] : terms_)
            if (degree_of(e) == d) out.terms_.emplace(e, c);
        return out;
    }

    /// Drops every term above degree d.
    [[nodiscard]] CohomologyClass truncated(int d) const {
        CohomologyClass out(ring_);
        for (const auto& [e, c] : terms_)
            if (degree_of(e) <= d) out.terms_.emplace(e, c);
        return out;
    }

    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

    [[nodiscard]] std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [e, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + spencer::to_string(c) + ")";
            const std::string m = monomial_name(e);
            if (m != "1") out += "*" + m;
        }
        return out;
    }

    [[nodiscard]] std::string monomial_name(const Exponents& e) const {
        std::string out;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += ring_->generators()[i].name;
            if (e[i] > 1) out += "^" + std::to_string(e[i]);
        }
        return out.empty() ? "1" : out;
    }

    CohomologyClass& operator+=(const CohomologyClass& o) {
        require_same_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    CohomologyClass& operator-=(const CohomologyClass& o) {
        require_same_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    CohomologyClass& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [e, c] : terms_) c *= s;
        }
        return *this;
    }

    friend CohomologyClass operator+(CohomologyClass a, const CohomologyClass& b) { return a += b; }
    friend CohomologyClass operator-(CohomologyClass a, const CohomologyClass& b) { return a -= b; }
    friend CohomologyClass operator-(CohomologyClass a) { return a *= Rational(-1); }
    friend CohomologyClass operator*(CohomologyClass a, const Rational& s) { return a *= s; }
    friend CohomologyClass operator*(const Rational& s, CohomologyClass a) { return a *= s; }

    friend CohomologyClass operator*(const CohomologyClass& a, const CohomologyClass& b) {
        a.require_same_ring(b);
        CohomologyClass out(a.ring_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    friend bool operator==(const CohomologyClass& a, const CohomologyClass& b) {
        return *a.ring_ == *b.ring_ && a.terms_ == b.terms_;
    }

    void require_same_ring(const CohomologyClass& o) const {
        if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) {
            fail(ErrorKind::input, "classes belong to different rings (n = " + std::to_string(ring_->n()) +
                                       " vs " + std::to_string(o.ring_->n()) + ")");
        }
    }

private:
    RingPtr ring_;
    std::map<Exponents, Rational> terms_;
};

[[nodiscard]] inline CohomologyClass power(const CohomologyClass& x, int k) {
    if (k < 0) fail(ErrorKind::input, "negative power");
    CohomologyClass out = CohomologyClass::constant(x.ring(), Rational(1));
    for (int i = 0; i < k; ++i) out = out * x;
    return out;
}

/// Σ_m coeffs[m] x^m, truncated by the ring.
[[nodiscard]] inline CohomologyClass apply_series(const std::vector<Rational>& coeffs, const CohomologyClass& x) {
    CohomologyClass out(x.ring());
    CohomologyClass p = CohomologyClass::constant(x.ring(), Rational(1));
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        if (p.is_zero()) break;
        out += coeffs[m] * p;
        p = p * x;
    }
    return out;
}

/// Ring homomorphism sending generator i to images[i].
[[nodiscard]] inline CohomologyClass substitute(const CohomologyClass& cls, const std::vector<CohomologyClass>& images,
                                                const RingPtr& target) {
    if (images.size() != cls.ring()->size()) fail(ErrorKind::input, "substitute: one image per generator required");
    CohomologyClass out(target);
    for (const auto& [e, c] : cls.terms()) {
        CohomologyClass term = CohomologyClass::constant(target, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) term = term * power(images[i], e[i]);
        out += term;
    }
    return out;
}

/// Intersection numbers keyed by degree-n monomial name ("c2^2", "c4", ...).
using IntersectionNumbers = std::map<std::string, Rational>;

/// Degree-n coefficient paired against intersection numbers.
[[nodiscard]] inline Rational integrate(const CohomologyClass& cls, const IntersectionNumbers& numbers) {
    Rational total = 0;
    const CohomologyClass top = cls.component(cls.ring()->n());
    for (const auto& [e, c] : top.terms()) {
        const std::string name = cls.monomial_name(e);
        const auto it = numbers.find(name);
        if (it == numbers.end()) fail(ErrorKind::input, "missing intersection number for monomial '" + name + "'");
        total += c * it->second;
    }
    return total;
}

}  // namespace spencer
