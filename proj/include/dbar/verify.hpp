#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dbar/diagnostics.hpp"
#include "dbar/moments.hpp"
#include "dbar/multiindex.hpp"
#include "dbar/report.hpp"
#include "dbar/spectral.hpp"

namespace dbar {

/// Multimoment of a rotation-invariant measure w(|z|) dV on C^n computed by
/// nested 1-D quadrature over the moduli, independent of the combinatorial
/// closed form:
///   m_gamma = (2 pi)^n Int ... Int prod rho_k^{2 gamma_k + 1} w(|rho|) drho.
inline double oracle_radial_multimoment(const RadialWeight& weight, int n,
                                        const MultiIndex& gamma,
                                        const quad::Options& opt = {}) {
    if (!gamma.nonnegative())
        throw NotInGamma("oracle_radial_multimoment: index must be nonnegative");
    std::function<double(int, double)> level = [&](int i, double s2) -> double {
        if (i == n)
            return weight.w(std::sqrt(s2));
        const int e = 2 * gamma[i] + 1;
        auto f = [&](double rho) {
            return std::pow(rho, static_cast<double>(e)) * level(i + 1, s2 + rho * rho);
        };
        if (weight.infinite) return quad::integrate_half_line(f, opt);
        const double upper2 = weight.upper * weight.upper - s2;
        if (upper2 <= 0.0) return 0.0;
        return quad::integrate(f, 0.0, std::sqrt(upper2), opt);
    };
    double m = level(0, 0.0);
    for (int k = 0; k < n; ++k) m *= 2.0 * M_PI;
    return m;
}

/// Multimoment of a product measure via per-factor 1-D quadrature.
inline double oracle_product_multimoment(const std::vector<RadialWeight>& weights,
                                         const MultiIndex& gamma,
                                         const quad::Options& opt = {}) {
    if (static_cast<int>(weights.size()) != gamma.dim())
        throw DimensionMismatch("oracle_product_multimoment: factor count != dimension");
    double m = 1.0;
    for (int k = 0; k < gamma.dim(); ++k)
        m *= quadrature_radial_moment(weights[static_cast<size_t>(k)], gamma[k], opt);
    return m;
}

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline double rel_diff(double a, double b, double scale) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

} // namespace detail

/// Entrywise comparison of the closed-form block matrices against Gram
/// matrices recomputed from scratch through canonical solutions and the
/// polynomial inner product.
inline CheckResult check_gram_equivalence(const MomentProvider& provider, int max_grade) {
    CheckResult c{"gram-equivalence", 0.0, 1e-10, false, ""};
    for (int k = -1; k <= max_grade; ++k) {
        for (const auto& gamma : enumerate_grade(provider.dim(), k)) {
            const auto dirs = admissible_directions(gamma);
            const int d = static_cast<int>(dirs.size());
            const auto closed = block_matrix(provider, gamma);
            double scale = 0.0;
            for (int i = 0; i < d; ++i) scale += closed[static_cast<size_t>(i * d + i)];
            std::vector<MixedPolynomial> sols;
            sols.reserve(static_cast<size_t>(d));
            for (int p : dirs)
                sols.push_back(canonical_solution_monomial(provider, gamma.plus_unit(p), p));
            for (int i = 0; i < d; ++i) {
                const double c_p = provider.coeff(gamma.plus_unit(dirs[static_cast<size_t>(i)]));
                for (int j = 0; j < d; ++j) {
                    const double c_q =
                        provider.coeff(gamma.plus_unit(dirs[static_cast<size_t>(j)]));
                    const auto ip = polynomial_inner_product(
                        provider, sols[static_cast<size_t>(i)], sols[static_cast<size_t>(j)]);
                    const double oracle = std::sqrt(c_p * c_q) * ip.real();
                    const double r = detail::rel_diff(
                        closed[static_cast<size_t>(i * d + j)], oracle, scale);
                    if (r > c.max_residual) {
                        c.max_residual = r;
                        c.detail = "worst at gamma=(" + gamma.str() + ")";
                    }
                }
            }
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

/// Sum of eigenvalues vs sum of the coefficient-ratio differences.
inline CheckResult check_trace_identity(const std::vector<SpectralBlock>& blocks,
                                        const MomentProvider& provider) {
    CheckResult c{"trace-identity", 0.0, 1e-12, false, ""};
    for (const auto& b : blocks) {
        double eig_sum = 0.0;
        for (double v : b.eigenvalues) eig_sum += v;
        double gap_sum = 0.0;
        for (int p : b.directions) gap_sum += directional_gap(provider, b.gamma, p);
        const double r = std::abs(eig_sum - gap_sum) / std::abs(gap_sum);
        if (r > c.max_residual) {
            c.max_residual = r;
            c.detail = "worst at gamma=(" + b.gamma.str() + ")";
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

inline CheckResult check_telescoping(const std::vector<SpectralBlock>& blocks,
                                     const MomentProvider& provider, int max_k) {
    CheckResult c{"telescoping-identity", 0.0, 1e-9, false, ""};
    for (int k = -1; k <= max_k; ++k) {
        const double r = telescoping_check(blocks, provider, k);
        if (r > c.max_residual) {
            c.max_residual = r;
            c.detail = "worst at k=" + std::to_string(k);
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

/// c_gamma from the radial closed form against the nested quadrature
/// multimoments. Exploits only the permutation invariance of the integral
/// to avoid redundant quadratures.
inline CheckResult check_rotational_multimoments(const MomentProvider& provider,
                                                 int max_degree) {
    CheckResult c{"rotational-multimoment-quadrature", 0.0, 1e-8, false, ""};
    const auto* radial = provider.radial_moments();
    const auto weight = provider.oracle_radial_weight();
    if (!radial || !weight) {
        c.detail = "skipped: provider is not radial with a weight descriptor";
        c.pass = true;
        return c;
    }
    quad::Options opt;
    opt.rel_tol = 1e-10;
    std::map<MultiIndex, double> cache;
    for (int k = 0; k <= max_degree; ++k) {
        for (const auto& gamma : enumerate_nonnegative_grade(provider.dim(), k)) {
            auto sorted = gamma.entries();
            std::sort(sorted.begin(), sorted.end());
            const MultiIndex key{sorted};
            auto it = cache.find(key);
            if (it == cache.end())
                it = cache.emplace(key, oracle_radial_multimoment(*weight, provider.dim(),
                                                                  key, opt)).first;
            const double c_formula = radial_to_multimoment(*radial, provider.dim(), gamma);
            const double c_quad = 1.0 / it->second;
            const double r = std::abs(c_formula - c_quad) / c_quad;
            if (r > c.max_residual) {
                c.max_residual = r;
                c.detail = "worst at gamma=(" + gamma.str() + ")";
            }
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

/// c_gamma from the per-factor product against quadrature of the factor
/// weights.
inline CheckResult check_product_multimoments(const MomentProvider& provider, int max_degree) {
    CheckResult c{"product-multimoment-quadrature", 0.0, 1e-8, false, ""};
    const auto* factors = provider.factor_moments();
    const auto weights = provider.oracle_factor_weights();
    if (!factors || !weights) {
        c.detail = "skipped: provider is not a product with weight descriptors";
        c.pass = true;
        return c;
    }
    quad::Options opt;
    opt.rel_tol = 1e-10;
    std::vector<std::vector<double>> quad_factors(weights->size());
    for (int k = 0; k <= max_degree; ++k) {
        for (const auto& gamma : enumerate_nonnegative_grade(provider.dim(), k)) {
            double m_quad = 1.0;
            for (int i = 0; i < gamma.dim(); ++i) {
                auto& col = quad_factors[static_cast<size_t>(i)];
                while (static_cast<int>(col.size()) <= gamma[i])
                    col.push_back(quadrature_radial_moment(
                        (*weights)[static_cast<size_t>(i)],
                        static_cast<int>(col.size()), opt));
                m_quad *= col[static_cast<size_t>(gamma[i])];
            }
            const double c_formula = product_multimoment(*factors, gamma);
            const double c_quad = 1.0 / m_quad;
            const double r = std::abs(c_formula - c_quad) / c_quad;
            if (r > c.max_residual) {
                c.max_residual = r;
                c.detail = "worst at gamma=(" + gamma.str() + ")";
            }
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

/// Both branches of the rotation-invariant trace expression against the
/// directly summed coefficient differences.
inline CheckResult check_rotational_branches(const MomentProvider& provider, int max_d) {
    CheckResult c{"rotational-branch-identity", 0.0, 1e-10, false, ""};
    const auto* radial = provider.radial_moments();
    if (!radial) {
        c.detail = "skipped: provider is not radial";
        c.pass = true;
        return c;
    }
    const int n = provider.dim();
    for (int d = 1; d <= max_d; ++d) {
        const auto branches = rotational_statistics(*radial, n, d);
        int full_seen = 0, reduced_seen = 0;
        for (const auto& gamma : enumerate_grade(n, d - 1)) {
            double direct = 0.0;
            for (int p : admissible_directions(gamma))
                direct += directional_gap(provider, gamma, p);
            const bool reduced = gamma.negative_slot() >= 0;
            if (reduced && ++reduced_seen > 4) continue;
            if (!reduced && ++full_seen > 4) continue;
            const double expected = reduced ? branches.reduced : branches.full;
            const double r = detail::rel_diff(direct, expected, std::abs(expected));
            if (r > c.max_residual) {
                c.max_residual = r;
                c.detail = "worst at gamma=(" + gamma.str() + ")";
            }
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

/// dbar of the canonical solution must reproduce the monomial form exactly;
/// the solution must be orthogonal to the holomorphic monomials.
inline CheckResult check_dbar_and_orthogonality(const MomentProvider& provider,
                                                int max_alpha_degree, int max_beta_degree) {
    CheckResult c{"dbar-and-orthogonality", 0.0, 1e-12, false, ""};
    const int n = provider.dim();
    for (int k = 0; k <= max_alpha_degree; ++k) {
        for (const auto& alpha : enumerate_nonnegative_grade(n, k)) {
            for (int j = 0; j < n; ++j) {
                const auto sol = canonical_solution_monomial(provider, alpha, j);
                for (int i = 0; i < n; ++i) {
                    const auto der = dbar_coefficient(sol, i);
                    const auto expected =
                        i == j ? MixedPolynomial::holomorphic(alpha) : MixedPolynomial();
                    if (der != expected) {
                        c.max_residual = 1.0;
                        c.detail = "dbar mismatch at alpha=(" + alpha.str() + "), j=" +
                                   std::to_string(j);
                    }
                }
                const double sol_norm =
                    std::sqrt(polynomial_inner_product(provider, sol, sol).real());
                for (int bk = 0; bk <= max_beta_degree; ++bk) {
                    for (const auto& beta : enumerate_nonnegative_grade(n, bk)) {
                        const auto mono = MixedPolynomial::holomorphic(beta);
                        const double mono_norm = std::sqrt(provider.moment(beta));
                        const auto ip = polynomial_inner_product(provider, sol, mono);
                        const double r = std::abs(ip) / (sol_norm * mono_norm);
                        if (r > c.max_residual) {
                            c.max_residual = r;
                            c.detail = "worst orthogonality at alpha=(" + alpha.str() +
                                       "), beta=(" + beta.str() + ")";
                        }
                    }
                }
            }
        }
    }
    c.pass = c.max_residual <= c.tolerance;
    return c;
}

/// Fast-path statuses must agree with the general-path statuses.
inline CheckResult check_fast_path_agreement(const DiagnosticReport& report) {
    CheckResult c{"fast-path-agreement", 0.0, 0.5, false, ""};
    int mismatches = 0;
    auto compare = [&](Status a, Status b, const std::string& what) {
        if (a != b) {
            ++mismatches;
            c.detail += (c.detail.empty() ? "" : "; ") + what + ": " + status_name(a) +
                        " vs " + status_name(b);
        }
    };
    if (report.rotational) {
        compare(report.boundedness.status, report.rotational->bounded.status, "bounded");
        compare(report.compactness.status, report.rotational->compact.status, "compact");
        compare(report.hilbert_schmidt.status, report.rotational->hilbert_schmidt.status,
                "hilbert-schmidt");
        for (const auto& s : report.schatten) {
            auto it = report.rotational->schatten.find(s.p);
            if (it != report.rotational->schatten.end())
                compare(s.verdict.status, it->second.status,
                        "schatten p=" + format_exponent(s.p));
        }
    }
    if (report.product)
        compare(report.boundedness.status, report.product->overall, "product bounded");
    if (!report.rotational && !report.product) c.detail = "skipped: no fast path applies";
    c.max_residual = mismatches;
    c.pass = mismatches == 0;
    return c;
}

/// Full verification sweep. The provider must expose an independent moment
/// path (a radial weight or per-factor weights) for the quadrature checks.
inline VerificationReport run_verification(const MomentProvider& provider, int K,
                                           const std::vector<double>& p_list,
                                           const HeuristicConfig& cfg = {}) {
    VerificationReport vr;
    const int gram_grade = std::min(K, 8);
    vr.checks.push_back(check_gram_equivalence(provider, gram_grade));

    const auto blocks = assemble_blocks(provider, gram_grade);
    vr.checks.push_back(check_trace_identity(blocks, provider));

    const int tele_k = std::min(K - 1, 12);
    const auto tele_blocks = assemble_blocks(provider, std::max(tele_k, 0));
    vr.checks.push_back(check_telescoping(tele_blocks, provider, tele_k));

    if (provider.radial_moments()) {
        vr.checks.push_back(
            check_rotational_multimoments(provider, std::min(K, 10)));
        vr.checks.push_back(check_rotational_branches(provider, std::min(K, 12)));
    }
    if (provider.factor_moments())
        vr.checks.push_back(check_product_multimoments(provider, std::min(K, 10)));

    vr.checks.push_back(
        check_dbar_and_orthogonality(provider, std::min(K, 6), std::min(K, 8)));

    const auto report = analyze(provider, K, p_list, cfg);
    vr.checks.push_back(check_fast_path_agreement(report));
    return vr;
}

inline JsonValue verification_to_json(const VerificationReport& vr) {
    JsonValue j = JsonValue::object();
    j.set("schema_version", 1);
    j.set("mode", "verify");
    JsonValue checks = JsonValue::array();
    for (const auto& c : vr.checks) {
        JsonValue one = JsonValue::object();
        one.set("name", c.name);
        one.set("max_residual", c.max_residual);
        one.set("tolerance", c.tolerance);
        one.set("pass", c.pass);
        if (!c.detail.empty()) one.set("detail", c.detail);
        checks.push(std::move(one));
    }
    j.set("checks", std::move(checks));
    j.set("all_pass", vr.all_pass());
    return j;
}

} // namespace dbar
