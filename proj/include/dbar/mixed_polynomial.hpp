#pragma once

#include <complex>
#include <map>
#include <utility>

#include "dbar/multiindex.hpp"

namespace dbar {

/// Finite linear combination of terms z^alpha zbar^beta with complex
/// coefficients. Zero coefficients are never stored.
class MixedPolynomial {
public:
    using Key = std::pair<MultiIndex, MultiIndex>; // (z exponent, zbar exponent)
    using Coeff = std::complex<double>;

    MixedPolynomial() = default;

    static MixedPolynomial monomial(const MultiIndex& alpha, const MultiIndex& beta,
                                    Coeff coeff = 1.0) {
        alpha.check_same_dim(beta);
        MixedPolynomial p;
        p.add_term(alpha, beta, coeff);
        return p;
    }

    /// Purely holomorphic term z^alpha.
    static MixedPolynomial holomorphic(const MultiIndex& alpha, Coeff coeff = 1.0) {
        return monomial(alpha, MultiIndex::zeros(alpha.dim()), coeff);
    }

    void add_term(const MultiIndex& alpha, const MultiIndex& beta, Coeff coeff) {
        auto [it, inserted] = terms_.try_emplace({alpha, beta}, coeff);
        if (!inserted) it->second += coeff;
        if (it->second == Coeff{0.0}) terms_.erase(it);
    }

    MixedPolynomial& operator+=(const MixedPolynomial& other) {
        for (const auto& [key, c] : other.terms_) add_term(key.first, key.second, c);
        return *this;
    }

    MixedPolynomial& operator-=(const MixedPolynomial& other) {
        for (const auto& [key, c] : other.terms_) add_term(key.first, key.second, -c);
        return *this;
    }

    MixedPolynomial& operator*=(Coeff s) {
        if (s == Coeff{0.0}) {
            terms_.clear();
            return *this;
        }
        for (auto& [key, c] : terms_) c *= s;
        return *this;
    }

    friend MixedPolynomial operator+(MixedPolynomial a, const MixedPolynomial& b) {
        a += b;
        return a;
    }
    friend MixedPolynomial operator-(MixedPolynomial a, const MixedPolynomial& b) {
        a -= b;
        return a;
    }
    friend MixedPolynomial operator*(Coeff s, MixedPolynomial p) {
        p *= s;
        return p;
    }

    /// Drops coefficients below rel_tol times the largest magnitude.
    void prune(double rel_tol = 1e-15) {
        double maxmag = 0.0;
        for (const auto& [key, c] : terms_) maxmag = std::max(maxmag, std::abs(c));
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < rel_tol * maxmag)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<Key, Coeff>& terms() const { return terms_; }

    friend bool operator==(const MixedPolynomial& a, const MixedPolynomial& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::map<Key, Coeff> terms_;
};

} // namespace dbar
