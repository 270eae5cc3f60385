#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "dbar/errors.hpp"
#include "dbar/jacobi.hpp"
#include "dbar/mixed_polynomial.hpp"
#include "dbar/moments.hpp"
#include "dbar/multiindex.hpp"

namespace dbar {

/// Minimal-norm solution of dbar f = z^alpha dzbar_j:
///   zbar_j z^alpha - (c_{alpha-e_j}/c_alpha) z^{alpha-e_j},
/// the correction term vanishing when alpha_j = 0.
inline MixedPolynomial canonical_solution_monomial(const MomentProvider& provider,
                                                   const MultiIndex& alpha, int j) {
    if (!alpha.nonnegative())
        throw NotInGamma("canonical_solution_monomial: alpha must be nonnegative");
    MixedPolynomial p =
        MixedPolynomial::monomial(alpha, MultiIndex::unit(alpha.dim(), j));
    const MultiIndex shifted = alpha.minus_unit(j);
    const double c_shifted = provider.coeff(shifted);
    if (c_shifted != 0.0) {
        const double ratio = c_shifted / provider.coeff(alpha);
        p -= MixedPolynomial::holomorphic(shifted, ratio);
    }
    return p;
}

/// <S z^alpha dzbar_k, S z^beta dzbar_l>; zero unless beta = alpha + e_l - e_k.
inline double gram_entry(const MomentProvider& provider, const MultiIndex& alpha, int k,
                         const MultiIndex& beta, int l) {
    alpha.check_same_dim(beta);
    const MultiIndex expected = alpha.plus_unit(l).minus_unit(k);
    if (expected.any_negative() || beta != expected) return 0.0;
    const double c_a = provider.coeff(alpha);
    const double first = c_a / provider.coeff(alpha.plus_unit(l));
    const double c_ak = provider.coeff(alpha.minus_unit(k));
    const double second = c_ak == 0.0 ? 0.0 : c_ak / provider.coeff(expected);
    return (first - second) / c_a;
}

/// Formal Wirtinger derivative d/dzbar_j.
inline MixedPolynomial dbar_coefficient(const MixedPolynomial& p, int j) {
    MixedPolynomial out;
    for (const auto& [key, coeff] : p.terms()) {
        const auto& [alpha, beta] = key;
        if (beta[j] == 0) continue;
        out.add_term(alpha, beta.minus_unit(j), coeff * static_cast<double>(beta[j]));
    }
    return out;
}

/// L^2(dmu) inner product of two mixed polynomials, evaluated through the
/// orthogonality of monomials: <z^a zbar^b, z^c zbar^d> = m_{a+d} iff
/// a + d = c + b, else 0.
inline std::complex<double> polynomial_inner_product(const MomentProvider& provider,
                                                     const MixedPolynomial& p,
                                                     const MixedPolynomial& q) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [kp, cp] : p.terms()) {
        for (const auto& [kq, cq] : q.terms()) {
            const MultiIndex lhs = kp.first.plus(kq.second);
            const MultiIndex rhs = kq.first.plus(kp.second);
            if (lhs != rhs) continue;
            acc += cp * std::conj(cq) * provider.moment(lhs);
        }
    }
    return acc;
}

/// One invariant block: the matrix C_gamma over the admissible directions,
/// its eigenvalues (the squared singular values of S on the block) and the
/// diagonalizing coefficients.
struct SpectralBlock {
    MultiIndex gamma;
    std::vector<int> directions;   // admissible p, ascending
    std::vector<double> matrix;    // row-major, directions.size() square
    std::vector<double> eigenvalues; // descending, clamped to >= 0
    std::vector<std::vector<double>> eigenvectors;
    double trace = 0.0;

    int dim() const { return static_cast<int>(directions.size()); }
    double entry(int i, int j) const {
        return matrix[static_cast<size_t>(i * dim() + j)];
    }
};

/// C_{gamma,p,q} per the closed form; diagonal entries use the difference
/// of coefficient ratios directly.
inline std::vector<double> block_matrix(const MomentProvider& provider,
                                        const MultiIndex& gamma) {
    const auto dirs = admissible_directions(gamma);
    const int d = static_cast<int>(dirs.size());
    const double c_g = provider.coeff(gamma);
    std::vector<double> m(static_cast<size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) {
        const int p = dirs[static_cast<size_t>(i)];
        const double c_p = provider.coeff(gamma.plus_unit(p));
        m[static_cast<size_t>(i * d + i)] =
            c_p / provider.coeff(gamma.plus_unit(p, 2)) - c_g / c_p;
        for (int j = i + 1; j < d; ++j) {
            const int q = dirs[static_cast<size_t>(j)];
            const double c_q = provider.coeff(gamma.plus_unit(q));
            const double c_pq = provider.coeff(gamma.plus_unit(p).plus_unit(q));
            const double val = (c_p * c_q - c_g * c_pq) / (c_pq * std::sqrt(c_p * c_q));
            m[static_cast<size_t>(i * d + j)] = val;
            m[static_cast<size_t>(j * d + i)] = val; // symmetric by construction
        }
    }
    return m;
}

/// Eigenvalues of a symmetric block matrix, descending, with roundoff
/// negatives clamped to zero. A negative eigenvalue beyond -1e-10 * trace
/// signals non-moment input and raises PsdViolation.
inline EigenResult block_eigenvalues(std::vector<double> matrix, int dim) {
    EigenResult eig = jacobi_eigen(std::move(matrix), dim);
    double trace = 0.0;
    for (double v : eig.values) trace += v;
    const double floor = -1e-10 * std::max(trace, 0.0);
    for (double& v : eig.values) {
        if (v < 0.0) {
            if (v < floor)
                throw PsdViolation("block eigenvalue " + std::to_string(v) +
                                   " below PSD tolerance (trace " + std::to_string(trace) +
                                   ")");
            v = 0.0;
        }
    }
    return eig;
}

inline SpectralBlock build_block(const MomentProvider& provider, const MultiIndex& gamma) {
    SpectralBlock b{gamma, admissible_directions(gamma), {}, {}, {}, 0.0};
    b.matrix = block_matrix(provider, gamma);
    const int d = b.dim();
    for (int i = 0; i < d; ++i) b.trace += b.matrix[static_cast<size_t>(i * d + i)];
    try {
        EigenResult eig = block_eigenvalues(b.matrix, d);
        b.eigenvalues = std::move(eig.values);
        b.eigenvectors = std::move(eig.vectors);
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " at gamma=(" + gamma.str() + ")");
    }
    return b;
}

/// All blocks with |gamma| <= max_grade, ordered by grade then
/// lexicographically. Needs moments through max_grade + 2.
inline std::vector<SpectralBlock> assemble_blocks(const MomentProvider& provider,
                                                  int max_grade) {
    if (max_grade < -1) throw InvalidGrade("assemble_blocks: truncation must be >= -1");
    std::vector<SpectralBlock> blocks;
    for (int k = -1; k <= max_grade; ++k)
        for (const auto& gamma : enumerate_grade(provider.dim(), k))
            blocks.push_back(build_block(provider, gamma));
    return blocks;
}

} // namespace dbar
