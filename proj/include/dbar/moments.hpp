#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbar/errors.hpp"
#include "dbar/multiindex.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

inline double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

/// c_gamma for a rotation-invariant measure with radial moments m_d:
///   c_gamma = (n + |gamma| - 1)! / ((n-1)! gamma!) / m_{|gamma|}.
/// Prefactors go through lgamma so large degrees do not overflow.
inline double radial_to_multimoment(const std::vector<double>& radial, int n,
                                    const MultiIndex& gamma) {
    if (!gamma.nonnegative())
        throw NotInGamma("radial_to_multimoment: index must be nonnegative");
    const int d = gamma.degree();
    if (d >= static_cast<int>(radial.size()))
        throw DegreeExceeded("radial_to_multimoment: degree " + std::to_string(d) +
                             " exceeds radial sequence");
    double lg = std::lgamma(static_cast<double>(n + d)) - std::lgamma(static_cast<double>(n));
    for (int i = 0; i < gamma.dim(); ++i) lg -= log_factorial(gamma[i]);
    return std::exp(lg) / radial[static_cast<size_t>(d)];
}

/// c_gamma for a product measure: product of the per-factor reciprocals.
inline double product_multimoment(const std::vector<std::vector<double>>& factors,
                                  const MultiIndex& gamma) {
    if (static_cast<int>(factors.size()) != gamma.dim())
        throw DimensionMismatch("product_multimoment: factor count != dimension");
    if (!gamma.nonnegative())
        throw NotInGamma("product_multimoment: index must be nonnegative");
    double c = 1.0;
    for (int k = 0; k < gamma.dim(); ++k) {
        const auto& seq = factors[static_cast<size_t>(k)];
        if (gamma[k] >= static_cast<int>(seq.size()))
            throw DegreeExceeded("product_multimoment: factor " + std::to_string(k) +
                                 " lacks moment " + std::to_string(gamma[k]));
        c /= seq[static_cast<size_t>(gamma[k])];
    }
    return c;
}

/// Indices d with m_d^2 > m_{d-1} m_{d+1} (1 + tol). A genuine moment
/// sequence is log-convex by Cauchy-Schwarz, so this should be empty.
inline std::vector<int> validate_log_convexity(const std::vector<double>& m, int max_degree,
                                               double tol = 1e-9) {
    std::vector<int> violations;
    const int hi = std::min(max_degree, static_cast<int>(m.size()) - 2);
    for (int d = 1; d <= hi; ++d) {
        const auto du = static_cast<size_t>(d);
        if (m[du] * m[du] > m[du - 1] * m[du + 1] * (1.0 + tol)) violations.push_back(d);
    }
    return violations;
}

/// Source of multimoments m_alpha = Integral |z^alpha|^2 dmu and the derived
/// coefficients c_gamma = 1/m_gamma (with c = 0 on indices with a negative
/// entry). Immutable after construction; concurrent reads are safe.
class MomentProvider {
public:
    virtual ~MomentProvider() = default;

    int dim() const { return n_; }
    int max_degree() const { return max_degree_; }

    double moment(const MultiIndex& alpha) const {
        if (alpha.dim() != n_)
            throw DimensionMismatch("moment: index dimension != provider dimension");
        if (!alpha.nonnegative())
            throw NotInGamma("moment: index (" + alpha.str() + ") has a negative entry");
        if (alpha.degree() > max_degree_)
            throw DegreeExceeded("moment: degree " + std::to_string(alpha.degree()) +
                                 " exceeds supported degree " + std::to_string(max_degree_) +
                                 " at index (" + alpha.str() + ")");
        const double m = moment_impl(alpha);
        if (!(m > 0.0))
            throw NonpositiveMoment("moment: m_(" + alpha.str() + ") <= 0");
        return m;
    }

    /// c_gamma; zero on any index with a negative entry.
    virtual double coeff(const MultiIndex& gamma) const {
        if (gamma.dim() != n_)
            throw DimensionMismatch("coeff: index dimension != provider dimension");
        for (int i = 0; i < gamma.dim(); ++i)
            if (gamma[i] < -1)
                throw NotInGamma("coeff: entry below -1 at index (" + gamma.str() + ")");
        if (gamma.any_negative()) return 0.0;
        return 1.0 / moment(gamma);
    }

    virtual std::string kind() const = 0;
    virtual std::string description() const { return kind(); }

    // Fast-path hooks; null when the representation does not apply.
    virtual const std::vector<double>* radial_moments() const { return nullptr; }
    virtual const std::vector<std::vector<double>>* factor_moments() const { return nullptr; }

    // Weight descriptors for the independent quadrature oracle.
    virtual std::optional<RadialWeight> oracle_radial_weight() const { return std::nullopt; }
    virtual std::optional<std::vector<RadialWeight>> oracle_factor_weights() const {
        return std::nullopt;
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

protected:
    MomentProvider(int n, int max_degree) : n_(n), max_degree_(max_degree) {
        if (n < 1) throw InvalidDimension("MomentProvider: dimension must be >= 1");
        if (max_degree < 0) throw InvalidConfig("MomentProvider: max degree must be >= 0");
    }

    virtual double moment_impl(const MultiIndex& alpha) const = 0;

    int n_;
    int max_degree_;
    std::vector<std::string> warnings_;
};

/// Rotation-invariant measure given by its radial moment sequence
/// m_d = Integral |z|^{2d} dmu over C^n.
class RadialMomentProvider : public MomentProvider {
public:
    RadialMomentProvider(int n, std::vector<double> radial, std::string kind_name,
                         std::optional<RadialWeight> weight = std::nullopt,
                         bool strict_convexity = false)
        : MomentProvider(n, static_cast<int>(radial.size()) - 1),
          radial_(std::move(radial)),
          kind_(std::move(kind_name)),
          weight_(std::move(weight)) {
        if (radial_.empty()) throw InvalidConfig("radial provider: empty moment sequence");
        for (size_t d = 0; d < radial_.size(); ++d)
            if (!(radial_[d] > 0.0))
                throw NonpositiveMoment("radial provider: m_" + std::to_string(d) + " <= 0");
        auto bad = validate_log_convexity(radial_, max_degree_);
        if (!bad.empty()) {
            std::string msg = "radial moments violate log-convexity at d=";
            for (size_t i = 0; i < bad.size(); ++i)
                msg += (i ? "," : "") + std::to_string(bad[i]);
            if (strict_convexity) throw Error(msg);
            warnings_.push_back(msg);
        }
    }

    std::string kind() const override { return kind_; }

    const std::vector<double>* radial_moments() const override { return &radial_; }

    std::optional<RadialWeight> oracle_radial_weight() const override { return weight_; }

protected:
    double moment_impl(const MultiIndex& alpha) const override {
        // inverse of radial_to_multimoment
        const int d = alpha.degree();
        double lg = std::lgamma(static_cast<double>(n_)) -
                    std::lgamma(static_cast<double>(n_ + d));
        for (int i = 0; i < alpha.dim(); ++i) lg += log_factorial(alpha[i]);
        return std::exp(lg) * radial_[static_cast<size_t>(d)];
    }

private:
    std::vector<double> radial_;
    std::string kind_;
    std::optional<RadialWeight> weight_;
};

/// Product measure mu_1 x ... x mu_n of circle-invariant factors on C,
/// each given by its 1-D moment sequence.
class ProductMomentProvider : public MomentProvider {
public:
    ProductMomentProvider(int n, std::vector<std::vector<double>> factors,
                          std::string kind_name,
                          std::optional<std::vector<RadialWeight>> weights = std::nullopt)
        : MomentProvider(n, min_factor_degree(factors)),
          factors_(std::move(factors)),
          kind_(std::move(kind_name)),
          weights_(std::move(weights)) {
        if (static_cast<int>(factors_.size()) != n)
            throw DimensionMismatch("product provider: factor count != dimension");
        for (size_t k = 0; k < factors_.size(); ++k) {
            for (size_t j = 0; j < factors_[k].size(); ++j)
                if (!(factors_[k][j] > 0.0))
                    throw NonpositiveMoment("product provider: factor " + std::to_string(k) +
                                            " moment " + std::to_string(j) + " <= 0");
            auto bad = validate_log_convexity(factors_[k],
                                              static_cast<int>(factors_[k].size()) - 1);
            if (!bad.empty())
                warnings_.push_back("factor " + std::to_string(k) +
                                    " moments violate log-convexity");
        }
    }

    std::string kind() const override { return kind_; }

    const std::vector<std::vector<double>>* factor_moments() const override { return &factors_; }

    std::optional<std::vector<RadialWeight>> oracle_factor_weights() const override {
        return weights_;
    }

protected:
    double moment_impl(const MultiIndex& alpha) const override {
        double m = 1.0;
        for (int k = 0; k < n_; ++k) {
            const auto& seq = factors_[static_cast<size_t>(k)];
            if (alpha[k] >= static_cast<int>(seq.size()))
                throw DegreeExceeded("product provider: factor " + std::to_string(k) +
                                     " lacks moment " + std::to_string(alpha[k]));
            m *= seq[static_cast<size_t>(alpha[k])];
        }
        return m;
    }

private:
    static int min_factor_degree(const std::vector<std::vector<double>>& factors) {
        if (factors.empty()) throw InvalidConfig("product provider: no factors");
        int d = static_cast<int>(factors[0].size()) - 1;
        for (const auto& f : factors) d = std::min(d, static_cast<int>(f.size()) - 1);
        return d;
    }

    std::vector<std::vector<double>> factors_;
    std::string kind_;
    std::optional<std::vector<RadialWeight>> weights_;
};

/// Explicit table of multimoments; serves exactly the listed indices.
class TableMomentProvider : public MomentProvider {
public:
    TableMomentProvider(int n, std::map<MultiIndex, double> table)
        : MomentProvider(n, table_degree(table)), table_(std::move(table)) {
        for (const auto& [alpha, m] : table_) {
            if (alpha.dim() != n)
                throw DimensionMismatch("table provider: index (" + alpha.str() +
                                        ") has wrong dimension");
            if (!alpha.nonnegative())
                throw NotInGamma("table provider: index (" + alpha.str() + ") negative");
            if (!(m > 0.0))
                throw NonpositiveMoment("table provider: m_(" + alpha.str() + ") <= 0");
        }
    }

    std::string kind() const override { return "table"; }

protected:
    double moment_impl(const MultiIndex& alpha) const override {
        auto it = table_.find(alpha);
        if (it == table_.end())
            throw DegreeExceeded("table provider: index (" + alpha.str() + ") not listed");
        return it->second;
    }

private:
    static int table_degree(const std::map<MultiIndex, double>& table) {
        if (table.empty()) throw InvalidConfig("table provider: empty table");
        int d = 0;
        for (const auto& [alpha, m] : table) d = std::max(d, alpha.degree());
        return d;
    }

    std::map<MultiIndex, double> table_;
};

/// Test hook: serves one multimoment scaled by (1 + eps) while keeping the
/// coefficients c tied to the unperturbed table, so identity checks that
/// compare the two paths see a genuine discrepancy.
class PerturbedProvider : public MomentProvider {
public:
    PerturbedProvider(std::shared_ptr<const MomentProvider> inner, MultiIndex target,
                      double eps)
        : MomentProvider(inner->dim(), inner->max_degree()),
          inner_(std::move(inner)),
          target_(std::move(target)),
          factor_(1.0 + eps) {}

    std::string kind() const override { return inner_->kind(); }
    std::string description() const override {
        return inner_->description() + " (perturbed at " + target_.str() + ")";
    }

    double coeff(const MultiIndex& gamma) const override { return inner_->coeff(gamma); }

    const std::vector<double>* radial_moments() const override {
        return inner_->radial_moments();
    }
    const std::vector<std::vector<double>>* factor_moments() const override {
        return inner_->factor_moments();
    }
    std::optional<RadialWeight> oracle_radial_weight() const override {
        return inner_->oracle_radial_weight();
    }
    std::optional<std::vector<RadialWeight>> oracle_factor_weights() const override {
        return inner_->oracle_factor_weights();
    }

protected:
    double moment_impl(const MultiIndex& alpha) const override {
        const double m = inner_->moment(alpha);
        return alpha == target_ ? m * factor_ : m;
    }

private:
    std::shared_ptr<const MomentProvider> inner_;
    MultiIndex target_;
    double factor_;
};

/// m_d of a rotation-invariant measure w(|z|) dV on C^n by 1-D quadrature:
/// m_d = pi^{n-1}/(n-1)! * 2 pi * Integral r^{2(d+n-1)+1} w(r) dr.
inline double quadrature_radial_moment_nd(const RadialWeight& weight, int n, int d,
                                          const quad::Options& opt = {}) {
    const double scale =
        std::exp(static_cast<double>(n - 1) * std::log(M_PI) - log_factorial(n - 1));
    return scale * quadrature_radial_moment(weight, d + n - 1, opt);
}

namespace detail {

inline void check_catalog_radial(const std::vector<double>& radial, int n,
                                 const RadialWeight& weight, const std::string& name) {
    // Guard against a bad closed form: spot-check the first two radial
    // moments against quadrature.
    for (int d = 0; d <= 1 && d < static_cast<int>(radial.size()); ++d) {
        const double q = quadrature_radial_moment_nd(weight, n, d);
        if (std::abs(q - radial[static_cast<size_t>(d)]) > 1e-8 * q)
            throw Error("catalog measure " + name + ": closed-form m_" + std::to_string(d) +
                        " disagrees with quadrature");
    }
}

} // namespace detail

/// Gaussian weight e^{-|z|^2} on C^n: m_d = pi^n (n+d-1)!/(n-1)!.
inline std::unique_ptr<MomentProvider> make_fock(int n, int max_degree) {
    if (n < 1) throw InvalidDimension("make_fock: dimension must be >= 1");
    std::vector<double> radial(static_cast<size_t>(max_degree) + 1);
    for (int d = 0; d <= max_degree; ++d)
        radial[static_cast<size_t>(d)] =
            std::exp(n * std::log(M_PI) + std::lgamma(static_cast<double>(n + d)) -
                     std::lgamma(static_cast<double>(n)));
    RadialWeight w{[](double r) { return std::exp(-r * r); }, 0.0, true};
    detail::check_catalog_radial(radial, n, w, "fock");
    return std::make_unique<RadialMomentProvider>(n, std::move(radial), "catalog:fock", w,
                                                  /*strict_convexity=*/true);
}

/// Weight e^{-|z|^{2m}} on C^n: m_d = pi^n / ((n-1)! m) Gamma((d+n)/m).
inline std::unique_ptr<MomentProvider> make_generalized_fock(int n, double m, int max_degree) {
    if (n < 1) throw InvalidDimension("make_generalized_fock: dimension must be >= 1");
    if (!(m > 0.0)) throw InvalidConfig("make_generalized_fock: exponent m must be > 0");
    std::vector<double> radial(static_cast<size_t>(max_degree) + 1);
    for (int d = 0; d <= max_degree; ++d)
        radial[static_cast<size_t>(d)] =
            std::exp(n * std::log(M_PI) - std::lgamma(static_cast<double>(n)) - std::log(m) +
                     std::lgamma((d + n) / m));
    RadialWeight w{[m](double r) { return std::exp(-std::pow(r, 2.0 * m)); }, 0.0, true};
    detail::check_catalog_radial(radial, n, w, "generalized_fock");
    return std::make_unique<RadialMomentProvider>(n, std::move(radial),
                                                  "catalog:generalized_fock", w,
                                                  /*strict_convexity=*/true);
}

/// Lebesgue measure on the unit ball of C^n: m_d = pi^n / ((n-1)! (n+d)).
inline std::unique_ptr<MomentProvider> make_ball(int n, int max_degree) {
    if (n < 1) throw InvalidDimension("make_ball: dimension must be >= 1");
    std::vector<double> radial(static_cast<size_t>(max_degree) + 1);
    for (int d = 0; d <= max_degree; ++d)
        radial[static_cast<size_t>(d)] =
            std::exp(n * std::log(M_PI) - log_factorial(n - 1)) / (n + d);
    RadialWeight w{[](double r) { return r <= 1.0 ? 1.0 : 0.0; }, 1.0, false};
    detail::check_catalog_radial(radial, n, w, "ball");
    return std::make_unique<RadialMomentProvider>(n, std::move(radial), "catalog:ball", w,
                                                  /*strict_convexity=*/true);
}

/// Lebesgue measure on the unit polydisc: per-factor m_j = pi/(j+1).
inline std::unique_ptr<MomentProvider> make_polydisc(int n, int max_degree) {
    if (n < 1) throw InvalidDimension("make_polydisc: dimension must be >= 1");
    std::vector<double> factor(static_cast<size_t>(max_degree) + 1);
    for (int j = 0; j <= max_degree; ++j) factor[static_cast<size_t>(j)] = M_PI / (j + 1);
    std::vector<std::vector<double>> factors(static_cast<size_t>(n), factor);
    RadialWeight disc{[](double r) { return r <= 1.0 ? 1.0 : 0.0; }, 1.0, false};
    std::vector<RadialWeight> weights(static_cast<size_t>(n), disc);
    return std::make_unique<ProductMomentProvider>(n, std::move(factors), "catalog:polydisc",
                                                   std::move(weights));
}

/// Rotation-invariant measure defined by a 1-D radial weight; the radial
/// moments are computed by adaptive quadrature at construction.
inline std::unique_ptr<MomentProvider> make_radial_weight(int n, const RadialWeight& weight,
                                                          int max_degree,
                                                          const quad::Options& opt = {}) {
    std::vector<double> radial(static_cast<size_t>(max_degree) + 1);
    for (int d = 0; d <= max_degree; ++d)
        radial[static_cast<size_t>(d)] = quadrature_radial_moment_nd(weight, n, d, opt);
    return std::make_unique<RadialMomentProvider>(n, std::move(radial),
                                                  "radial-quadrature", weight);
}

} // namespace dbar
