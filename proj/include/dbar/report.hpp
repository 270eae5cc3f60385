#pragma once

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dbar/diagnostics.hpp"

namespace dbar {

/// Tiny ordered JSON value for report output. Keys keep insertion order and
/// doubles are printed with 17 significant digits, so serialization is
/// byte-stable across runs.
class JsonValue {
public:
    using Array = std::vector<JsonValue>;
    using Object = std::vector<std::pair<std::string, JsonValue>>;

    JsonValue() : data_(nullptr) {}
    JsonValue(bool b) : data_(b) {}
    JsonValue(int i) : data_(static_cast<long long>(i)) {}
    JsonValue(long long i) : data_(i) {}
    JsonValue(double d) : data_(d) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}
    JsonValue(Array a) : data_(std::move(a)) {}
    JsonValue(Object o) : data_(std::move(o)) {}

    static JsonValue object() { return JsonValue(Object{}); }
    static JsonValue array() { return JsonValue(Array{}); }

    JsonValue& set(const std::string& key, JsonValue v) {
        std::get<Object>(data_).emplace_back(key, std::move(v));
        return *this;
    }

    JsonValue& push(JsonValue v) {
        std::get<Array>(data_).push_back(std::move(v));
        return *this;
    }

    static JsonValue from_doubles(const std::vector<double>& xs) {
        JsonValue a = array();
        for (double x : xs) a.push(JsonValue(x));
        return a;
    }

    std::string dump(int indent = 2) const {
        std::ostringstream os;
        write(os, indent, 0);
        os << '\n';
        return os.str();
    }

private:
    static std::string format_double(double d) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        std::string s(buf);
        // keep it a JSON number token
        if (s.find_first_of(".eE") == std::string::npos &&
            s.find_first_not_of("-0123456789") == std::string::npos)
            s += ".0";
        return s;
    }

    static void write_string(std::ostream& os, const std::string& s) {
        os << '"';
        for (char ch : s) {
            switch (ch) {
                case '"': os << "\\\""; break;
                case '\\': os << "\\\\"; break;
                case '\n': os << "\\n"; break;
                case '\t': os << "\\t"; break;
                default:
                    if (static_cast<unsigned char>(ch) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                        os << buf;
                    } else {
                        os << ch;
                    }
            }
        }
        os << '"';
    }

    void write(std::ostream& os, int indent, int depth) const {
        const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
        const std::string close_pad(static_cast<size_t>(indent * depth), ' ');
        if (std::holds_alternative<std::nullptr_t>(data_)) {
            os << "null";
        } else if (const auto* b = std::get_if<bool>(&data_)) {
            os << (*b ? "true" : "false");
        } else if (const auto* i = std::get_if<long long>(&data_)) {
            os << *i;
        } else if (const auto* d = std::get_if<double>(&data_)) {
            os << format_double(*d);
        } else if (const auto* s = std::get_if<std::string>(&data_)) {
            write_string(os, *s);
        } else if (const auto* a = std::get_if<Array>(&data_)) {
            if (a->empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (size_t i = 0; i < a->size(); ++i) {
                os << pad;
                (*a)[i].write(os, indent, depth + 1);
                if (i + 1 < a->size()) os << ',';
                os << '\n';
            }
            os << close_pad << ']';
        } else if (const auto* o = std::get_if<Object>(&data_)) {
            if (o->empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            for (size_t i = 0; i < o->size(); ++i) {
                os << pad;
                write_string(os, (*o)[i].first);
                os << ": ";
                (*o)[i].second.write(os, indent, depth + 1);
                if (i + 1 < o->size()) os << ',';
                os << '\n';
            }
            os << close_pad << '}';
        }
    }

    std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> data_;
};

inline JsonValue witness_to_json(const Witness& w) {
    JsonValue j = JsonValue::object();
    j.set("gamma", w.gamma.str());
    j.set("direction", w.direction);
    j.set("grade", w.grade);
    j.set("value", w.value);
    return j;
}

inline JsonValue verdict_to_json(const Verdict& v, bool include_stats = true) {
    JsonValue j = JsonValue::object();
    j.set("status", status_name(v.status));
    if (v.witness)
        j.set("witness", witness_to_json(*v.witness));
    j.set("first_grade", v.first_grade);
    j.set("truncation", v.truncation);
    if (include_stats)
        j.set("statistic_by_grade", JsonValue::from_doubles(v.statistic_by_grade));
    return j;
}

inline std::string format_exponent(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p);
    return buf;
}

inline JsonValue report_to_json(const DiagnosticReport& r) {
    JsonValue j = JsonValue::object();
    j.set("schema_version", 1);
    j.set("mode", "analyze");

    JsonValue measure = JsonValue::object();
    measure.set("kind", r.measure_kind);
    measure.set("description", r.measure_description);
    measure.set("n", r.n);
    j.set("measure", std::move(measure));

    JsonValue config = JsonValue::object();
    config.set("max_degree", r.truncation);
    config.set("schatten_exponents", JsonValue::from_doubles(r.schatten_exponents));
    JsonValue heur = JsonValue::object();
    heur.set("window", r.heuristics.window);
    heur.set("growth_factor", r.heuristics.growth_factor);
    heur.set("plateau_tol", r.heuristics.plateau_tol);
    heur.set("eps_report", r.heuristics.eps_report);
    heur.set("ratio_conv", r.heuristics.ratio_conv);
    heur.set("ratio_grow", r.heuristics.ratio_grow);
    heur.set("raabe_holds", r.heuristics.raabe_holds);
    heur.set("raabe_fails", r.heuristics.raabe_fails);
    config.set("heuristics", std::move(heur));
    j.set("config", std::move(config));

    if (!r.provider_warnings.empty()) {
        JsonValue w = JsonValue::array();
        for (const auto& s : r.provider_warnings) w.push(s);
        j.set("warnings", std::move(w));
    }

    j.set("boundedness", verdict_to_json(r.boundedness));
    j.set("compactness", verdict_to_json(r.compactness));

    JsonValue hs = verdict_to_json(r.hilbert_schmidt);
    hs.set("partial_sums", JsonValue::from_doubles(r.hs_sums));
    j.set("hilbert_schmidt", std::move(hs));

    JsonValue sch = JsonValue::object();
    for (const auto& s : r.schatten) {
        JsonValue one = verdict_to_json(s.verdict);
        one.set("partial_sums_eigenvalue", JsonValue::from_doubles(s.partial_sums_exact));
        one.set("partial_sums_trace", JsonValue::from_doubles(s.partial_sums_trace));
        sch.set(format_exponent(s.p), std::move(one));
    }
    j.set("schatten", std::move(sch));

    if (r.rotational) {
        JsonValue rot = JsonValue::object();
        rot.set("bounded", verdict_to_json(r.rotational->bounded));
        rot.set("compact", verdict_to_json(r.rotational->compact));
        rot.set("hilbert_schmidt", verdict_to_json(r.rotational->hilbert_schmidt));
        JsonValue rsch = JsonValue::object();
        for (const auto& [p, v] : r.rotational->schatten)
            rsch.set(format_exponent(p), verdict_to_json(v));
        rot.set("schatten", std::move(rsch));
        rot.set("branch_full", JsonValue::from_doubles(r.rotational->branch_full));
        rot.set("branch_reduced", JsonValue::from_doubles(r.rotational->branch_reduced));
        rot.set("dominance_onset", r.rotational->dominance_onset);
        j.set("rotation_invariant_path", std::move(rot));
    }

    if (r.product) {
        JsonValue prod = JsonValue::object();
        prod.set("bounded_status", status_name(r.product->overall));
        JsonValue pf = JsonValue::array();
        for (const auto& v : r.product->per_factor) pf.push(verdict_to_json(v));
        prod.set("per_factor", std::move(pf));
        j.set("product_path", std::move(prod));
    }
    return j;
}

/// Verbose variant: appends per-block eigenvalues and eigenvectors.
inline JsonValue blocks_to_json(const std::vector<SpectralBlock>& blocks) {
    JsonValue arr = JsonValue::array();
    for (const auto& b : blocks) {
        JsonValue one = JsonValue::object();
        one.set("gamma", b.gamma.str());
        JsonValue dirs = JsonValue::array();
        for (int d : b.directions) dirs.push(d);
        one.set("directions", std::move(dirs));
        one.set("trace", b.trace);
        one.set("eigenvalues", JsonValue::from_doubles(b.eigenvalues));
        JsonValue vecs = JsonValue::array();
        for (const auto& v : b.eigenvectors) vecs.push(JsonValue::from_doubles(v));
        one.set("eigenvectors", std::move(vecs));
        arr.push(std::move(one));
    }
    return arr;
}

} // namespace dbar
