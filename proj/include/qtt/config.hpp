// config.hpp — Flat key = value run configuration with defaults and validation
//
// Syntax: one `key = value` per line, `#` starts a comment, blank lines ignored.
// Lists are comma separated. Unspecified keys keep their defaults.

#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qtt/correlation.hpp"
#include "qtt/errors.hpp"
#include "qtt/model.hpp"
#include "qtt/rates.hpp"
#include "qtt/transistor.hpp"

namespace qtt {

// Malformed input (exit status 2).
struct ParseError : std::runtime_error {
    ParseError(int line_, const std::string& what)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what), line(line_) {}
    int line;
};

enum class CurrentSign { into_bath, out_of_bath };

struct ModelConfig {
    ModelPoint point{};
    std::vector<Scheme> schemes{};            // empty: subcommand default
    std::vector<RateOrder> orders{RateOrder::zeroth, RateOrder::first, RateOrder::full};
    std::vector<double> alpha_list{};         // amplification α_m values; empty: {alpha_m}
    std::optional<double> sweep_min, sweep_max;
    std::optional<std::size_t> sweep_n;
    std::optional<bool> sweep_log;
    double eps_div{1e-3};
    bool refine{true};
    double regime_tol{0.1};
    std::string table{"all"};                 // rates-dump: ptre | niba | redfield | all
    std::string output{};
    CurrentSign sign{CurrentSign::into_bath};

    ModelConfig() { point.baths.middle.coupling = 1.0; }

    // γ used to scale currents in the J/γ columns
    double gamma_scale() const {
        const double g = point.baths.left.coupling > 0.0 ? point.baths.left.coupling : point.baths.right.coupling;
        return g > 0.0 ? g : 1.0;
    }

    double sign_factor() const { return sign == CurrentSign::into_bath ? 1.0 : -1.0; }

    // Sweep grid for a subcommand, falling back to that subcommand's default grid.
    SweepSpec sweep_for(const std::string& subcommand) const {
        SweepSpec s;
        if (subcommand == "currents" || subcommand == "classify") {
            s = {"alpha_m", 1e-4, 10.0, 60, true};
        } else if (subcommand == "ndtc") {
            s = {"delta_T", 0.0, 1.6, 33, false};
        } else {
            s = {"T_m", 0.4, 2.0, 81, false};
        }
        if (sweep_min) s.min = *sweep_min;
        if (sweep_max) s.max = *sweep_max;
        if (sweep_n) s.n = *sweep_n;
        if (sweep_log) s.log = *sweep_log;
        return s;
    }

    void validate() const {
        point.validate();
        if (!(eps_div > 0.0 && eps_div < 1.0)) throw ValidationError("eps_div", "must be in (0, 1)");
        if (!(regime_tol > 0.0)) throw ValidationError("regime_tol", "must be > 0");
        for (double a : alpha_list)
            if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("alpha_list", "entries must be >= 0");
        if (table != "all" && table != "ptre" && table != "niba" && table != "redfield")
            throw ValidationError("table", "must be one of ptre, niba, redfield, all");
        if (sweep_n && *sweep_n < 3) throw ValidationError("sweep_n", "must be >= 3");
        if (sweep_min && sweep_max && !(*sweep_max > *sweep_min))
            throw ValidationError("sweep_max", "grid must be strictly increasing");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

inline double parse_double(const std::string& key, const std::string& v, int line) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || ptr != end) throw ParseError(line, key + ": expected a number, got '" + v + "'");
    return x;
}

inline std::size_t parse_size(const std::string& key, const std::string& v, int line) {
    std::size_t x = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || ptr != end) throw ParseError(line, key + ": expected a non-negative integer, got '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError(line, key + ": expected true or false, got '" + v + "'");
}

inline Scheme parse_scheme(const std::string& v, int line) {
    if (v == "ptre") return Scheme::ptre;
    if (v == "niba") return Scheme::niba;
    if (v == "redfield") return Scheme::redfield;
    throw ParseError(line, "schemes: unknown scheme '" + v + "' (ptre, niba, redfield)");
}

inline RateOrder parse_order(const std::string& v, int line) {
    if (v == "0") return RateOrder::zeroth;
    if (v == "1") return RateOrder::first;
    if (v == "full") return RateOrder::full;
    throw ParseError(line, "orders: unknown order '" + v + "' (0, 1, full)");
}

using Setter = void (*)(ModelConfig&, const std::string& key, const std::string& value, int line);

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"eps_l", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.sys.eps_l = parse_double(k, v, l); }},
        {"eps_r", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.sys.eps_r = parse_double(k, v, l); }},
        {"delta", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.sys.delta = parse_double(k, v, l); }},
        {"omega_c", [](ModelConfig& c, const std::string& k, const std::string& v, int l) {
             const double w = parse_double(k, v, l);
             c.point.baths.left.cutoff = c.point.baths.middle.cutoff = c.point.baths.right.cutoff = w;
         }},
        {"omega_c_l", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.left.cutoff = parse_double(k, v, l); }},
        {"omega_c_m", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.middle.cutoff = parse_double(k, v, l); }},
        {"omega_c_r", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.right.cutoff = parse_double(k, v, l); }},
        {"T_l", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.left.temperature = parse_double(k, v, l); }},
        {"T_m", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.middle.temperature = parse_double(k, v, l); }},
        {"T_r", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.right.temperature = parse_double(k, v, l); }},
        {"gamma", [](ModelConfig& c, const std::string& k, const std::string& v, int l) {
             c.point.baths.left.coupling = c.point.baths.right.coupling = parse_double(k, v, l);
         }},
        {"gamma_l", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.left.coupling = parse_double(k, v, l); }},
        {"gamma_r", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.right.coupling = parse_double(k, v, l); }},
        {"alpha_m", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.baths.middle.coupling = parse_double(k, v, l); }},
        {"alpha_list", [](ModelConfig& c, const std::string& k, const std::string& v, int l) {
             c.alpha_list.clear();
             for (const auto& s : split_list(v)) c.alpha_list.push_back(parse_double(k, s, l));
         }},
        {"schemes", [](ModelConfig& c, const std::string&, const std::string& v, int l) {
             c.schemes.clear();
             for (const auto& s : split_list(v)) c.schemes.push_back(parse_scheme(s, l));
         }},
        {"orders", [](ModelConfig& c, const std::string&, const std::string& v, int l) {
             c.orders.clear();
             for (const auto& s : split_list(v)) c.orders.push_back(parse_order(s, l));
             if (c.orders.empty()) throw ParseError(l, "orders: empty list");
         }},
        {"sweep_min", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.sweep_min = parse_double(k, v, l); }},
        {"sweep_max", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.sweep_max = parse_double(k, v, l); }},
        {"sweep_n", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.sweep_n = parse_size(k, v, l); }},
        {"sweep_scale", [](ModelConfig& c, const std::string&, const std::string& v, int l) {
             if (v != "linear" && v != "log") throw ParseError(l, "sweep_scale: expected linear or log, got '" + v + "'");
             c.sweep_log = v == "log";
         }},
        {"eps_div", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.eps_div = parse_double(k, v, l); }},
        {"refine", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.refine = parse_bool(k, v, l); }},
        {"regime_tol", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.regime_tol = parse_double(k, v, l); }},
        {"gamma_p", [](ModelConfig& c, const std::string&, const std::string& v, int l) {
             if (v == "half") c.point.conv.gamma_p = GammaPFactor::half;
             else if (v == "eighth") c.point.conv.gamma_p = GammaPFactor::eighth;
             else throw ParseError(l, "gamma_p: expected half or eighth, got '" + v + "'");
         }},
        {"include_pv", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.conv.include_pv = parse_bool(k, v, l); }},
        {"current_sign", [](ModelConfig& c, const std::string&, const std::string& v, int l) {
             if (v == "into_bath") c.sign = CurrentSign::into_bath;
             else if (v == "out_of_bath") c.sign = CurrentSign::out_of_bath;
             else throw ParseError(l, "current_sign: expected into_bath or out_of_bath, got '" + v + "'");
         }},
        {"table", [](ModelConfig& c, const std::string&, const std::string& v, int) { c.table = v; }},
        {"output", [](ModelConfig& c, const std::string&, const std::string& v, int) { c.output = v; }},
        {"tau_max", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.tau_max = parse_double(k, v, l); }},
        {"n_tau", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.n_tau = parse_size(k, v, l); }},
        {"n_omega", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.n_omega = parse_size(k, v, l); }},
        {"omega_max", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.omega_max = parse_double(k, v, l); }},
        {"abs_tol", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.abs_tol = parse_double(k, v, l); }},
        {"rel_tol", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.rel_tol = parse_double(k, v, l); }},
        {"panel_ratio", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.panel_ratio = parse_double(k, v, l); }},
        {"tail_factor", [](ModelConfig& c, const std::string& k, const std::string& v, int l) { c.point.quad.tail_factor = parse_double(k, v, l); }},
    };
    return table;
}

} // namespace detail

inline std::vector<std::string> known_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : detail::setters()) keys.push_back(k);
    return keys;
}

inline std::string nearest_key(const std::string& key) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& [k, _] : detail::setters()) {
        const std::size_t d = detail::edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

// Applies one assignment; `line` is used for error messages (0 for command-line overrides).
inline void apply_setting(ModelConfig& cfg, const std::string& key, const std::string& value, int line = 0) {
    const auto& table = detail::setters();
    const auto it = table.find(key);
    if (it == table.end())
        throw ParseError(line, "unknown key '" + key + "' (did you mean '" + nearest_key(key) + "'?)");
    if (value.empty()) throw ParseError(line, key + ": missing value");
    it->second(cfg, key, value, line);
}

inline void apply_assignment(ModelConfig& cfg, const std::string& text, int line = 0) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value', got '" + text + "'");
    const auto key = detail::trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ParseError(line, "missing key before '='");
    apply_setting(cfg, key, detail::trim(std::string_view(text).substr(eq + 1)), line);
}

// Parses without validating; duplicate keys are rejected.
inline ModelConfig parse_config(std::istream& in, ModelConfig cfg = {}) {
    std::string raw;
    int line = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto text = detail::trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq != std::string::npos) {
            const auto key = detail::trim(std::string_view(text).substr(0, eq));
            if (const auto it = seen.find(key); it != seen.end())
                throw ParseError(line, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
            seen[key] = line;
        }
        apply_assignment(cfg, text, line);
    }
    return cfg;
}

inline ModelConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
    auto cfg = parse_config(in);
    cfg.validate();
    return cfg;
}

} // namespace qtt
