// cli.hpp — Subcommand runners: sweeps in, CSV files out, exit status contract
//
// Exit status: 0 success, 2 parse error, 3 validation error, 4 solver failure.
// On a solver failure the rows already computed are kept and a marker row is appended.

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qtt/config.hpp"
#include "qtt/csv.hpp"
#include "qtt/transistor.hpp"

namespace qtt {

enum ExitCode : int { exit_ok = 0, exit_parse = 2, exit_validation = 3, exit_solver = 4 };

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"currents", "amplification", "mechanism", "ndtc", "rates-dump", "classify"};
    return names;
}

struct RunOptions {
    unsigned threads{1};
    std::string output;  // overrides the config's output path
};

// Solver failure carrying the sweep position it happened at.
struct SweepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace cli {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline std::string at(const std::string& name, double v) { return name + " = " + format_double(v); }

// Runs `body`; a solver failure appends the marker row to `w` and propagates.
template <class F>
void guarded(CsvWriter& w, F&& body) {
    try {
        body();
    } catch (const SweepFailure& e) {
        w.write_failure(e.what());
        throw;
    } catch (const std::runtime_error& e) {
        w.write_failure(e.what());
        throw SweepFailure(e.what());
    }
}

inline std::vector<Scheme> schemes_or(const ModelConfig& cfg, std::vector<Scheme> fallback) {
    return cfg.schemes.empty() ? fallback : cfg.schemes;
}

inline std::vector<double> alphas(const ModelConfig& cfg) {
    return cfg.alpha_list.empty() ? std::vector<double>{cfg.point.baths.middle.coupling} : cfg.alpha_list;
}

inline void currents(const ModelConfig& cfg, unsigned threads, std::ostream& out) {
    const auto grid = cfg.sweep_for("currents").grid();
    const auto schemes = schemes_or(cfg, {Scheme::ptre, Scheme::niba, Scheme::redfield});
    const double g = cfg.gamma_scale(), s = cfg.sign_factor();
    CsvWriter w(out, {"scheme", "alpha_m", "T_l", "T_m", "T_r", "J_l", "J_m", "J_r", "J_l_per_gamma", "J_m_per_gamma",
                      "J_r_per_gamma", "residual", "status"});
    guarded(w, [&] {
        struct Cell {
            std::optional<PointResult> r;
            std::string status;
        };
        auto res = parallel_map(grid.size(), [&](std::size_t i) {
            ModelPoint p = cfg.point;
            p.baths.middle.coupling = grid[i];
            std::vector<Cell> cells;
            for (auto sc : schemes) {
                try {
                    cells.push_back({evaluate(p, sc), "ok"});
                } catch (const RegimeError& e) {
                    cells.push_back({std::nullopt, std::string("not_applicable: ") + e.what()});
                }
            }
            return cells;
        }, threads);
        const auto& b = cfg.point.baths;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!res[i].ok()) throw SweepFailure(at("alpha_m", grid[i]) + ": " + res[i].error);
            for (std::size_t k = 0; k < schemes.size(); ++k) {
                const auto& c = (*res[i].value)[k];
                CsvRow row;
                row << to_string(schemes[k]) << grid[i] << b.left.temperature << b.middle.temperature << b.right.temperature;
                if (c.r) {
                    const auto& J = c.r->currents;
                    row << s * J.J_l << s * J.J_m << s * J.J_r << s * J.J_l / g << s * J.J_m / g << s * J.J_r / g
                        << c.r->residual;
                } else {
                    for (int j = 0; j < 7; ++j) row << nan;
                }
                row << c.status;
                w.write(row);
            }
        }
    });
}

inline void amplification(const ModelConfig& cfg, unsigned threads, std::ostream& out) {
    const auto grid = cfg.sweep_for("amplification").grid();
    const auto schemes = schemes_or(cfg, {Scheme::ptre});
    const double g = cfg.gamma_scale(), s = cfg.sign_factor();
    CsvWriter w(out, {"scheme", "alpha_m", "T_m", "J_l", "J_m", "J_r", "J_l_per_gamma", "J_m_per_gamma", "J_r_per_gamma",
                      "dJr_dTm", "dJm_dTm", "beta_r", "beta_l", "response_sign", "divergent", "inserted", "status"});
    guarded(w, [&] {
        const ScanOptions opt{cfg.eps_div, cfg.refine, threads};
        for (double a : alphas(cfg)) {
            ModelPoint p = cfg.point;
            p.baths.middle.coupling = a;
            for (auto sc : schemes) {
                std::vector<AmplificationPoint> pts;
                try {
                    pts = amplification_scan(p, sc, grid, opt);
                } catch (const std::runtime_error& e) {
                    throw SweepFailure(std::string(to_string(sc)) + ", " + at("alpha_m", a) + ": " + e.what());
                }
                for (const auto& q : pts) {
                    CsvRow row;
                    row << to_string(sc) << a << q.T_m << s * q.J.J_l << s * q.J.J_m << s * q.J.J_r << s * q.J.J_l / g
                        << s * q.J.J_m / g << s * q.J.J_r / g << s * q.dJr_dTm << s * q.dJm_dTm << q.beta_r << q.beta_l
                        << q.response_sign << q.divergent << q.inserted << "ok";
                    w.write(row);
                }
            }
        }
    });
}

inline void mechanism(const ModelConfig& cfg, unsigned threads, std::ostream& out) {
    const auto grid = cfg.sweep_for("mechanism").grid();
    const double g = cfg.gamma_scale(), s = cfg.sign_factor();
    CsvWriter w(out, {"alpha_m", "T_m", "G_m_plus", "G_m_minus", "G_l_plus", "G_l_minus", "G_r_plus", "G_r_minus",
                      "omega_l_plus", "omega_l_minus", "omega_r_plus", "omega_r_minus", "P_0", "P_l", "P_r", "J_l", "J_m",
                      "J_r", "J_m_a", "J_m_b", "J_m_ab", "J_r_approx", "J_m_per_gamma", "J_m_ab_per_gamma", "beta_r",
                      "beta_r_truncated", "divergent", "divergent_truncated", "status"});
    guarded(w, [&] {
        for (double a : alphas(cfg)) {
            ModelPoint p = cfg.point;
            p.baths.middle.coupling = a;
            auto res = parallel_map(grid.size(), [&](std::size_t i) {
                ModelPoint q = p;
                q.baths.middle.temperature = grid[i];
                return evaluate(q, Scheme::niba);
            }, threads);
            std::vector<CurrentTriple> full, truncated;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (!res[i].ok()) break;
                const auto& r = *res[i].value;
                full.push_back(r.currents);
                const double Jm = r.niba->J_m_a + r.niba->J_m_b;
                truncated.push_back({-r.currents.J_r - Jm, r.currents.J_r, Jm});
            }
            std::vector<AmplificationPoint> bf, bt;
            if (full.size() == grid.size()) {
                bf = amplification_from_currents(grid, full, cfg.eps_div);
                bt = amplification_from_currents(grid, truncated, cfg.eps_div);
            }
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (!res[i].ok()) throw SweepFailure(at("alpha_m", a) + ", " + at("T_m", grid[i]) + ": " + res[i].error);
                const auto& r = *res[i].value;
                const auto& t = *r.niba_rates;
                const auto& n = *r.niba;
                const double Jab = n.J_m_a + n.J_m_b;
                CsvRow row;
                row << a << grid[i] << t.G_m_plus << t.G_m_minus << t.G_plus[0] << t.G_minus[0] << t.G_plus[1]
                    << t.G_minus[1] << t.omega_plus[0] << t.omega_minus[0] << t.omega_plus[1] << t.omega_minus[1] << n.P_0
                    << n.P_l << n.P_r << s * n.currents.J_l << s * n.currents.J_m << s * n.currents.J_r << s * n.J_m_a
                    << s * n.J_m_b << s * Jab << s * n.J_r_approx << s * n.currents.J_m / g << s * Jab / g << (bf.empty() ? nan : bf[i].beta_r)
                    << (bt.empty() ? nan : bt[i].beta_r) << (!bf.empty() && bf[i].divergent)
                    << (!bt.empty() && bt[i].divergent) << "ok";
                w.write(row);
            }
        }
    });
}

inline void ndtc(const ModelConfig& cfg, unsigned threads, std::ostream& out) {
    const auto grid = cfg.sweep_for("ndtc").grid();
    const auto schemes = schemes_or(cfg, {Scheme::ptre});
    for (auto sc : schemes)
        if (sc == Scheme::redfield) throw ValidationError("schemes", "ndtc supports ptre and niba only");
    const double T_l = cfg.point.baths.left.temperature;
    if (!(T_l - grid.back() > 0.0)) throw ValidationError("sweep_max", "T_m = T_l - delta_T must stay positive");
    const double g = cfg.gamma_scale();
    CsvWriter w(out, {"scheme", "order", "alpha_m", "delta_T", "T_m", "J_lm", "J_lm_per_gamma", "G_m_plus", "G_m_minus",
                      "G_l_plus", "G_l_minus", "turnover", "status"});
    guarded(w, [&] {
        for (auto sc : schemes)
            for (auto order : cfg.orders) {
                NDTCResult r;
                try {
                    r = ndtc_scan(cfg.point, sc, order, grid, threads);
                } catch (const std::runtime_error& e) {
                    throw SweepFailure(std::string(to_string(sc)) + ", order " + to_string(order) + ": " + e.what());
                }
                std::map<std::size_t, int> marks;
                for (const auto& t : r.turnovers) marks[t.index] = t.maximum ? 1 : -1;
                for (std::size_t i = 0; i < r.rows.size(); ++i) {
                    const auto& row_in = r.rows[i];
                    CsvRow row;
                    row << to_string(sc) << to_string(order) << cfg.point.baths.middle.coupling << row_in.delta_T
                        << row_in.T_m << row_in.J << row_in.J / g;
                    if (row_in.rates)
                        row << row_in.rates->G_m_plus << row_in.rates->G_m_minus << row_in.rates->G_plus[0]
                            << row_in.rates->G_minus[0];
                    else
                        row << nan << nan << nan << nan;
                    row << (marks.count(i) ? marks[i] : 0) << "ok";
                    w.write(row);
                }
            }
    });
}

inline void rates_dump(const ModelConfig& cfg, unsigned, std::ostream& out) {
    CsvWriter w(out, {"table", "quantity", "bath", "sign", "level", "moment", "omega", "re", "im", "status"});
    guarded(w, [&] {
        const auto& p = cfg.point;
        auto emit = [&](const std::string& table, const std::string& q, const std::string& bath, const std::string& sign,
                        const std::string& level, const std::string& moment, double omega, Complex v) {
            CsvRow row;
            row << table << q << bath << sign << level << moment << omega << v.real() << v.imag() << "ok";
            w.write(row);
        };
        const char* baths[2] = {"l", "r"};
        const char* signs[2] = {"+", "-"};
        const char* levels[2] = {"+", "-"};
        const bool all = cfg.table == "all";
        if (all || cfg.table == "ptre" || cfg.table == "niba") {
            const auto frame = polaron_frame(p.sys, p.baths.middle);
            const CorrelationTables ct(p.baths, frame, p.quad);
            if (all || cfg.table == "ptre") {
                for (auto order : cfg.orders) {
                    const auto t = ptre_rates(ct, p.sys, order, p.conv);
                    const std::string name = std::string("ptre_") + to_string(order);
                    const double gap = t.frame.gap();
                    const double freqs[3] = {0.0, gap, -gap};
                    for (int i = 0; i < 3; ++i) emit(name, "gamma_x", "m", "", "", "0", freqs[i], t.gamma_x[i]);
                    for (int i = 0; i < 3; ++i) emit(name, "gamma_y", "m", "", "", "0", freqs[i], t.gamma_y[i]);
                    const double E[2] = {t.frame.e_plus, t.frame.e_minus};
                    for (int u = 0; u < 2; ++u)
                        for (int sg = 0; sg < 2; ++sg)
                            for (int lv = 0; lv < 2; ++lv)
                                for (int m = 0; m < 2; ++m)
                                    emit(name, "kappa", baths[u], signs[sg], levels[lv], std::to_string(m), E[lv],
                                         t.kappa[u][sg][lv][m]);
                }
            }
            if (all || cfg.table == "niba") {
                const auto t = niba_rates(ct, p.sys);
                const double split = p.sys.eps_l - p.sys.eps_r;
                emit("niba", "G_m", "m", "+", "", "0", split, t.G_m_plus);
                emit("niba", "G_m", "m", "-", "", "0", -split, t.G_m_minus);
                for (int u = 0; u < 2; ++u) {
                    emit("niba", "G", baths[u], "+", "", "0", t.energy[u], t.G_plus[u]);
                    emit("niba", "G", baths[u], "-", "", "0", t.energy[u], t.G_minus[u]);
                    emit("niba", "omega_avg", baths[u], "+", "", "1", t.energy[u], t.omega_plus[u]);
                    emit("niba", "omega_avg", baths[u], "-", "", "1", t.energy[u], t.omega_minus[u]);
                }
            }
        }
        if (all || cfg.table == "redfield") {
            const auto t = redfield_rates(p.sys, p.baths, p.conv);
            const double E[2] = {t.frame.e_plus, t.frame.e_minus};
            for (int u = 0; u < 2; ++u)
                for (int lv = 0; lv < 2; ++lv) {
                    emit("redfield", "kappa_e", baths[u], "", levels[lv], "0", E[lv], t.kappa_e[u][lv]);
                    emit("redfield", "kappa_a", baths[u], "", levels[lv], "0", E[lv], t.kappa_a[u][lv]);
                }
            emit("redfield", "kappa_e", "m", "", "", "0", t.frame.gap(), t.kappa_e_p);
            emit("redfield", "kappa_a", "m", "", "", "0", t.frame.gap(), t.kappa_a_p);
            for (int lv = 0; lv < 2; ++lv) {
                emit("redfield", "Gamma_e", "", "", levels[lv], "0", E[lv], t.Gamma_e[lv]);
                emit("redfield", "Gamma_a", "", "", levels[lv], "0", E[lv], t.Gamma_a[lv]);
            }
            emit("redfield", "Gamma_p", "m", "-+", "", "0", t.frame.gap(), t.Gamma_p[0]);
            emit("redfield", "Gamma_p", "m", "+-", "", "0", t.frame.gap(), t.Gamma_p[1]);
        }
    });
}

inline std::string sibling_path(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    const auto stem = p.stem().string();
    return (p.parent_path() / (stem + suffix + p.extension().string())).string();
}

inline void classify(const ModelConfig& cfg, unsigned threads, std::ostream& out, std::ostream& boundaries) {
    const auto grid = cfg.sweep_for("classify").grid();
    const double s = cfg.sign_factor();
    CsvWriter w(out, {"alpha_m", "J_l_ptre", "J_m_ptre", "J_r_ptre", "J_l_niba", "J_m_niba", "J_r_niba", "J_l_redfield",
                      "J_m_redfield", "J_r_redfield", "dev_redfield_J_l", "dev_redfield_J_m", "dev_niba_J_m", "status"});
    CsvWriter wb(boundaries, {"quantity", "alpha_m", "nominal", "ratio_to_nominal", "status"});
    RegimeReport rep;
    try {
        rep = regime_classifier(cfg.point, grid, cfg.regime_tol, threads);
    } catch (const std::runtime_error& e) {
        wb.write_failure(e.what());
        throw SweepFailure(e.what());
    }
    for (const auto& r : rep.rows) {
        CsvRow row;
        row << r.alpha << s * r.ptre.J_l << s * r.ptre.J_m << s * r.ptre.J_r << s * r.niba.J_l << s * r.niba.J_m
            << s * r.niba.J_r;
        if (r.redfield_ok)
            row << s * r.redfield.J_l << s * r.redfield.J_m << s * r.redfield.J_r
                << relative_deviation(r.redfield.J_l, r.ptre.J_l) << relative_deviation(r.redfield.J_m, r.ptre.J_m);
        else
            row << nan << nan << nan << nan << nan;
        row << relative_deviation(r.niba.J_m, r.ptre.J_m) << (r.redfield_ok ? "ok" : "redfield_not_applicable");
        w.write(row);
    }
    auto bound = [&](const char* name, const std::optional<double>& v, double nominal) {
        CsvRow row;
        row << name << (v ? *v : nan) << nominal << (v ? *v / nominal : nan) << (v ? "ok" : "not_found");
        wb.write(row);
    };
    bound("redfield_J_m_breakdown", rep.redfield_jm_breakdown, rep.nominal_weak);
    bound("redfield_J_l_breakdown", rep.redfield_jl_breakdown, rep.nominal_weak);
    bound("niba_J_m_validity", rep.niba_jm_validity, rep.nominal_strong);
}

} // namespace cli

inline std::string default_output(const std::string& name) { return name + ".csv"; }

// Runs one subcommand against a parsed config; diagnostics go to `err`.
inline int run_subcommand(const std::string& name, ModelConfig cfg, const RunOptions& opt, std::ostream& err = std::cerr) {
    if (std::find(subcommands().begin(), subcommands().end(), name) == subcommands().end()) {
        err << "error: unknown subcommand '" << name << "'\n";
        return exit_parse;
    }
    if (!opt.output.empty()) cfg.output = opt.output;
    const std::string path = cfg.output.empty() ? default_output(name) : cfg.output;
    try {
        cfg.validate();
        const char* swept = name == "rates-dump" ? nullptr : name.c_str();
        if (swept) cfg.sweep_for(swept).validate();
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    }
    std::ofstream out(path);
    if (!out) {
        err << "error: cannot open output '" << path << "'\n";
        return exit_validation;
    }
    std::ofstream bounds;
    const unsigned threads = resolve_threads(opt.threads);
    try {
        if (name == "currents") cli::currents(cfg, threads, out);
        else if (name == "amplification") cli::amplification(cfg, threads, out);
        else if (name == "mechanism") cli::mechanism(cfg, threads, out);
        else if (name == "ndtc") cli::ndtc(cfg, threads, out);
        else if (name == "rates-dump") cli::rates_dump(cfg, threads, out);
        else {
            const auto bpath = cli::sibling_path(path, "_boundaries");
            bounds.open(bpath);
            if (!bounds) {
                err << "error: cannot open output '" << bpath << "'\n";
                return exit_validation;
            }
            cli::classify(cfg, threads, out, bounds);
        }
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::runtime_error& e) {
        err << "solver failure: " << e.what() << '\n';
        return exit_solver;
    }
    return exit_ok;
}

} // namespace qtt
