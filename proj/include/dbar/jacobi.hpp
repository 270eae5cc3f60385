#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dbar/errors.hpp"

namespace dbar {

struct EigenResult {
    std::vector<double> values;              // descending
    std::vector<std::vector<double>> vectors; // vectors[j] pairs with values[j]
};

/// Cyclic Jacobi eigensolver for small dense symmetric matrices (row-major).
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-14 * |trace| (with a tiny absolute floor for traceless input).
inline EigenResult jacobi_eigen(std::vector<double> a, int n, int max_sweeps = 64) {
    if (n < 1 || static_cast<int>(a.size()) != n * n)
        throw EigensolverFailure("jacobi_eigen: bad matrix shape");
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i * n + j)]; };

    std::vector<std::vector<double>> v(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;

    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += at(i, i);
    const double threshold = std::max(1e-14 * std::abs(trace), 1e-300);

    auto offdiag = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (offdiag() > threshold) {
        if (++sweep > max_sweeps)
            throw EigensolverFailure("jacobi_eigen: no convergence after " +
                                     std::to_string(max_sweeps) + " sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    auto& row = v[static_cast<size_t>(k)];
                    const double vkp = row[static_cast<size_t>(p)];
                    const double vkq = row[static_cast<size_t>(q)];
                    row[static_cast<size_t>(p)] = c * vkp - s * vkq;
                    row[static_cast<size_t>(q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenResult res;
    res.values.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) res.values[static_cast<size_t>(i)] = at(i, i);

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return res.values[static_cast<size_t>(i)] > res.values[static_cast<size_t>(j)];
    });

    EigenResult sorted;
    sorted.values.reserve(static_cast<size_t>(n));
    sorted.vectors.reserve(static_cast<size_t>(n));
    for (int idx : order) {
        sorted.values.push_back(res.values[static_cast<size_t>(idx)]);
        std::vector<double> col(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            col[static_cast<size_t>(k)] = v[static_cast<size_t>(k)][static_cast<size_t>(idx)];
        // Sign convention: first component of visible magnitude is positive.
        for (double x : col) {
            if (std::abs(x) > 1e-12) {
                if (x < 0.0)
                    for (double& y : col) y = -y;
                break;
            }
        }
        sorted.vectors.push_back(std::move(col));
    }
    return sorted;
}

} // namespace dbar
