#pragma once

#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dbar/errors.hpp"

namespace dbar {

/// Integer n-tuple used both as a monomial exponent (all entries >= 0) and
/// as a block label in the extended index set Gamma (entries >= -1, at most
/// one entry equal to -1). Immutable after construction.
class MultiIndex {
public:
    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        if (entries_.empty())
            throw InvalidDimension("MultiIndex: dimension must be >= 1");
    }

    static MultiIndex zeros(int n) {
        if (n < 1) throw InvalidDimension("MultiIndex: dimension must be >= 1");
        return MultiIndex(std::vector<int>(static_cast<size_t>(n), 0));
    }

    /// e_p, zero-based direction p.
    static MultiIndex unit(int n, int p) {
        MultiIndex m = zeros(n);
        m.check_direction(p);
        m.entries_[static_cast<size_t>(p)] = 1;
        return m;
    }

    int dim() const { return static_cast<int>(entries_.size()); }

    int degree() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

    int operator[](int i) const { return entries_[static_cast<size_t>(i)]; }

    const std::vector<int>& entries() const { return entries_; }

    bool nonnegative() const {
        for (int e : entries_)
            if (e < 0) return false;
        return true;
    }

    bool any_negative() const { return !nonnegative(); }

    /// Gamma membership: entries >= -1 with at most one entry equal to -1.
    bool in_gamma() const {
        int negs = 0;
        for (int e : entries_) {
            if (e < -1) return false;
            if (e == -1) ++negs;
        }
        return negs <= 1;
    }

    /// Slot of the unique -1 entry, or -1 when all entries are nonnegative.
    int negative_slot() const {
        for (size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i] < 0) return static_cast<int>(i);
        return -1;
    }

    MultiIndex plus_unit(int p, int count = 1) const {
        check_direction(p);
        MultiIndex r(*this);
        r.entries_[static_cast<size_t>(p)] += count;
        return r;
    }

    MultiIndex minus_unit(int p) const { return plus_unit(p, -1); }

    MultiIndex plus(const MultiIndex& other) const {
        check_same_dim(other);
        MultiIndex r(*this);
        for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += other.entries_[i];
        return r;
    }

    void check_same_dim(const MultiIndex& other) const {
        if (other.dim() != dim())
            throw DimensionMismatch("MultiIndex: mixing dimensions " + std::to_string(dim()) +
                                    " and " + std::to_string(other.dim()));
    }

    /// "a1,a2,...,an"
    std::string str() const {
        std::ostringstream os;
        for (size_t i = 0; i < entries_.size(); ++i) {
            if (i) os << ',';
            os << entries_[i];
        }
        return os.str();
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        a.check_same_dim(b);
        return a.entries_ < b.entries_; // lexicographic
    }

private:
    void check_direction(int p) const {
        if (p < 0 || p >= dim())
            throw InvalidDimension("MultiIndex: direction out of range");
    }

    std::vector<int> entries_;
};

namespace detail {

inline void enumerate_grade_rec(int n, int k, std::vector<int>& prefix, bool neg_used,
                                std::vector<MultiIndex>& out) {
    const int slots_left = n - static_cast<int>(prefix.size());
    const int lo = neg_used ? 0 : -1;
    if (slots_left == 1) {
        if (k >= lo) {
            prefix.push_back(k);
            out.push_back(MultiIndex(prefix));
            prefix.pop_back();
        }
        return;
    }
    // Remaining slots can absorb a sum as low as -1 (if the -1 entry is still
    // available) and arbitrarily high, so v ranges over [lo, k + 1].
    for (int v = lo; v <= k + 1; ++v) {
        const bool will_use_neg = neg_used || v == -1;
        const int min_rest = will_use_neg ? 0 : -1;
        if (k - v < min_rest) continue;
        prefix.push_back(v);
        enumerate_grade_rec(n, k - v, prefix, will_use_neg, out);
        prefix.pop_back();
    }
}

} // namespace detail

/// All gamma in Gamma with |gamma| = k, in lexicographic order.
inline std::vector<MultiIndex> enumerate_grade(int n, int k) {
    if (n < 1) throw InvalidDimension("enumerate_grade: dimension must be >= 1");
    if (k < -1) throw InvalidGrade("enumerate_grade: grade must be >= -1");
    std::vector<MultiIndex> out;
    std::vector<int> prefix;
    prefix.reserve(static_cast<size_t>(n));
    detail::enumerate_grade_rec(n, k, prefix, false, out);
    return out;
}

/// All alpha in N^n with |alpha| = k, in lexicographic order.
inline std::vector<MultiIndex> enumerate_nonnegative_grade(int n, int k) {
    if (n < 1) throw InvalidDimension("enumerate_nonnegative_grade: dimension must be >= 1");
    if (k < 0) throw InvalidGrade("enumerate_nonnegative_grade: grade must be >= 0");
    std::vector<MultiIndex> out;
    std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& prefix, int rest) {
        const int slots_left = n - static_cast<int>(prefix.size());
        if (slots_left == 0) {
            if (rest == 0) out.push_back(MultiIndex(prefix));
            return;
        }
        if (slots_left == 1) {
            prefix.push_back(rest);
            rec(prefix, 0);
            prefix.pop_back();
            return;
        }
        for (int v = 0; v <= rest; ++v) {
            prefix.push_back(v);
            rec(prefix, rest - v);
            prefix.pop_back();
        }
    };
    std::vector<int> prefix;
    rec(prefix, k);
    return out;
}

/// dim E_gamma: 1 when exactly one entry equals -1, n otherwise.
inline int block_dimension(const MultiIndex& gamma) {
    if (!gamma.in_gamma())
        throw NotInGamma("block_dimension: index (" + gamma.str() + ") not in Gamma");
    return gamma.negative_slot() >= 0 ? 1 : gamma.dim();
}

/// Directions p with gamma + e_p >= 0 componentwise (zero-based).
inline std::vector<int> admissible_directions(const MultiIndex& gamma) {
    if (!gamma.in_gamma())
        throw NotInGamma("admissible_directions: index (" + gamma.str() + ") not in Gamma");
    const int q = gamma.negative_slot();
    if (q >= 0) return {q};
    std::vector<int> all(static_cast<size_t>(gamma.dim()));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

} // namespace dbar
