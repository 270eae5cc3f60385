#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbar/moments.hpp"

namespace dbar {

namespace detail {

inline double parse_number(const std::string& s, size_t& pos) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str() + pos, &end);
    if (end == s.c_str() + pos) throw ParseError("radial weight: expected number in '" + s + "'");
    pos = static_cast<size_t>(end - s.c_str());
    return v;
}

} // namespace detail

/// Parses the supported radial weight expressions: a positive constant,
/// "exp(-r^k)" or "exp(-c*r^k)".
inline std::function<double(double)> parse_weight_expr(std::string expr) {
    std::string s;
    for (char ch : expr)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.rfind("exp(", 0) == 0 && s.back() == ')') {
        std::string inner = s.substr(4, s.size() - 5);
        if (inner.empty() || inner[0] != '-')
            throw ParseError("radial weight: expected exp(-...) in '" + expr + "'");
        size_t pos = 1;
        double coeff = 1.0;
        if (inner[pos] != 'r') {
            coeff = detail::parse_number(inner, pos);
            if (pos < inner.size() && inner[pos] == '*') ++pos;
        }
        if (pos >= inner.size() || inner[pos] != 'r')
            throw ParseError("radial weight: expected r in '" + expr + "'");
        ++pos;
        double power = 1.0;
        if (pos < inner.size()) {
            if (inner[pos] != '^')
                throw ParseError("radial weight: expected ^ in '" + expr + "'");
            ++pos;
            power = detail::parse_number(inner, pos);
        }
        if (pos != inner.size())
            throw ParseError("radial weight: trailing characters in '" + expr + "'");
        return [coeff, power](double r) { return std::exp(-coeff * std::pow(r, power)); };
    }
    size_t pos = 0;
    const double c = detail::parse_number(s, pos);
    if (pos != s.size()) throw ParseError("radial weight: unsupported expression '" + expr + "'");
    if (!(c > 0.0)) throw ParseError("radial weight: constant must be positive");
    return [c](double) { return c; };
}

/// Piecewise-linear weight from [[r, w], ...]; zero outside the listed range.
inline std::function<double(double)> tabulated_weight(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw ParseError("radial weight table: need at least two points");
    for (size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i].first > pts[i - 1].first))
            throw ParseError("radial weight table: abscissae must increase");
    return [pts = std::move(pts)](double r) {
        if (r < pts.front().first || r > pts.back().first) return 0.0;
        auto it = std::lower_bound(pts.begin(), pts.end(), r,
                                   [](const auto& p, double x) { return p.first < x; });
        if (it == pts.begin()) return it->second;
        const auto lo = *(it - 1);
        const auto hi = *it;
        const double t = (r - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
    };
}

/// Builds a provider from a parsed measure spec. `needed_degree` is the
/// highest multimoment degree the caller will request (K + 2 for a
/// truncation degree K).
inline std::unique_ptr<MomentProvider> make_provider_from_spec(const nlohmann::json& spec,
                                                               int needed_degree) {
    if (!spec.is_object()) throw ParseError("measure spec: top level must be an object");
    if (!spec.contains("n") || !spec["n"].is_number_integer())
        throw ParseError("measure spec: missing integer field \"n\"");
    const int n = spec["n"].get<int>();
    if (n < 1) throw ParseError("measure spec: n must be >= 1");

    const char* kinds[] = {"catalog", "radial_moments", "factors", "multimoments",
                           "radial_weight"};
    int present = 0;
    for (const char* k : kinds) present += spec.contains(k) ? 1 : 0;
    if (present != 1)
        throw ParseError("measure spec: exactly one of catalog / radial_moments / factors / "
                         "multimoments / radial_weight must be present");

    if (spec.contains("catalog")) {
        const auto& cat = spec["catalog"];
        const std::string name = cat.value("name", "");
        if (name == "fock") return make_fock(n, needed_degree);
        if (name == "ball") return make_ball(n, needed_degree);
        if (name == "polydisc") return make_polydisc(n, needed_degree);
        if (name == "generalized_fock") {
            if (!cat.contains("params") || !cat["params"].contains("m"))
                throw ParseError("measure spec: generalized_fock needs params.m");
            return make_generalized_fock(n, cat["params"]["m"].get<double>(), needed_degree);
        }
        throw ParseError("measure spec: unknown catalog measure '" + name + "'");
    }

    if (spec.contains("radial_moments")) {
        auto m = spec["radial_moments"].get<std::vector<double>>();
        if (static_cast<int>(m.size()) <= needed_degree)
            throw DegreeExceeded("measure spec: radial_moments lists " +
                                 std::to_string(m.size()) + " moments but degree " +
                                 std::to_string(needed_degree) + " is required");
        return std::make_unique<RadialMomentProvider>(n, std::move(m), "radial-sequence");
    }

    if (spec.contains("factors")) {
        auto f = spec["factors"].get<std::vector<std::vector<double>>>();
        if (static_cast<int>(f.size()) != n)
            throw ParseError("measure spec: factors count must equal n");
        return std::make_unique<ProductMomentProvider>(n, std::move(f), "product");
    }

    if (spec.contains("multimoments")) {
        std::map<MultiIndex, double> table;
        for (const auto& [key, value] : spec["multimoments"].items()) {
            std::vector<int> entries;
            size_t pos = 0;
            while (pos <= key.size()) {
                const size_t comma = key.find(',', pos);
                const std::string tok =
                    key.substr(pos, comma == std::string::npos ? comma : comma - pos);
                try {
                    size_t used = 0;
                    entries.push_back(std::stoi(tok, &used));
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw ParseError("measure spec: bad multimoment key '" + key + "'");
                }
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (static_cast<int>(entries.size()) != n)
                throw ParseError("measure spec: multimoment key '" + key +
                                 "' has wrong dimension");
            MultiIndex alpha{entries};
            if (table.count(alpha))
                throw ParseError("measure spec: duplicate multimoment index '" + key + "'");
            table.emplace(std::move(alpha), value.get<double>());
        }
        return std::make_unique<TableMomentProvider>(n, std::move(table));
    }

    const auto& rw = spec["radial_weight"];
    if (!rw.contains("support") || !rw["support"].is_array() || rw["support"].size() != 2)
        throw ParseError("measure spec: radial_weight needs \"support\": [0, R|\"inf\"]");
    RadialWeight weight;
    const auto& hi = rw["support"][1];
    if (hi.is_string() && hi.get<std::string>() == "inf") {
        weight.infinite = true;
    } else if (hi.is_number()) {
        weight.upper = hi.get<double>();
        if (!(weight.upper > 0.0))
            throw ParseError("measure spec: radial_weight support must be positive");
    } else {
        throw ParseError("measure spec: radial_weight support bound must be number or \"inf\"");
    }
    if (rw.contains("expr")) {
        weight.w = parse_weight_expr(rw["expr"].get<std::string>());
    } else if (rw.contains("table")) {
        auto pts = rw["table"].get<std::vector<std::pair<double, double>>>();
        weight.w = tabulated_weight(std::move(pts));
    } else {
        throw ParseError("measure spec: radial_weight needs \"expr\" or \"table\"");
    }
    return make_radial_weight(n, weight, needed_degree);
}

} // namespace dbar
