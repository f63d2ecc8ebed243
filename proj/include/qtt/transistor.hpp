// transistor.hpp — Sweeps and transistor metrics: amplification, NDTC turnovers, regimes
//
// β_u = |∂J_u/∂J_m| is evaluated as a ratio of T_m derivatives. Zero crossings of
// dJ_m/dT_m between grid points are located by root finding and inserted as extra,
// flagged rows so that the divergence does not depend on where the grid happens to fall.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "qtt/correlation.hpp"
#include "qtt/errors.hpp"
#include "qtt/model.hpp"
#include "qtt/parallel.hpp"
#include "qtt/rates.hpp"
#include "qtt/solvers.hpp"

namespace qtt {

enum class Scheme { ptre, niba, redfield };

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::ptre: return "ptre";
        case Scheme::niba: return "niba";
        case Scheme::redfield: return "redfield";
    }
    return "?";
}

inline const char* to_string(RateOrder o) {
    switch (o) {
        case RateOrder::zeroth: return "0";
        case RateOrder::first: return "1";
        case RateOrder::full: return "full";
    }
    return "?";
}

// One physical parameter point plus numerics.
struct ModelPoint {
    SystemParams sys;
    BathSet baths;
    QuadratureConfig quad;
    Conventions conv;

    void validate() const {
        sys.validate();
        baths.validate();
        quad.validate();
    }
};

struct PointResult {
    CurrentTriple currents;
    std::array<double, 3> populations{};  // PTRE/Redfield: (+, -, 0); NIBA: (l, r, 0)
    double residual{0.0};
    std::optional<NIBASolution> niba;
    std::optional<NIBARateTable> niba_rates;
};

inline PointResult evaluate(const ModelPoint& p, Scheme scheme, RateOrder order = RateOrder::full) {
    PointResult r;
    if (scheme == Scheme::redfield) {
        const auto t = redfield_rates(p.sys, p.baths, p.conv);
        const auto s = redfield_currents(t);
        r.currents = s.currents;
        r.populations = {s.P_plus, s.P_minus, s.P_0};
        return r;
    }
    const auto frame = polaron_frame(p.sys, p.baths.middle);
    const CorrelationTables ct(p.baths, frame, p.quad);
    if (scheme == Scheme::niba) {
        const auto t = niba_rates(ct, p.sys, order);
        const auto s = niba_currents(t);
        r.currents = s.currents;
        r.populations = {s.P_l, s.P_r, s.P_0};
        r.niba = s;
        r.niba_rates = t;
        return r;
    }
    const auto sol = ptre_solve(ptre_rates(ct, p.sys, order, p.conv));
    r.currents = sol.currents;
    r.populations = {sol.state.rho(0).real(), sol.state.rho(1).real(), sol.state.rho(2).real()};
    r.residual = sol.residual;
    return r;
}

struct SweepSpec {
    std::string parameter{"T_m"};  // T_m | alpha_m | delta_T
    double min{0.4};
    double max{2.0};
    std::size_t n{81};
    bool log{false};

    void validate() const {
        if (parameter != "T_m" && parameter != "alpha_m" && parameter != "delta_T")
            throw ValidationError("sweep", "parameter must be T_m, alpha_m or delta_T");
        if (n < 3) throw ValidationError("sweep_n", "must be >= 3");
        if (!(max > min)) throw ValidationError("sweep_max", "grid must be strictly increasing");
        if (log && !(min > 0.0)) throw ValidationError("sweep_min", "log grid requires min > 0");
    }

    std::vector<double> grid() const {
        validate();
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(n - 1);
            g[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
        }
        g.front() = min;
        g.back() = max;
        return g;
    }
};

struct AmplificationPoint {
    double T_m{0.0};
    CurrentTriple J;
    double dJr_dTm{0.0};
    double dJm_dTm{0.0};
    double beta_r{0.0};
    double beta_l{0.0};
    int response_sign{0};    // sgn(∂J_r/∂J_m), the sign entering β_l = |β_r + sign|
    bool divergent{false};
    bool inserted{false};    // located by root finding rather than on the grid
};

struct ScanOptions {
    double eps_div{1e-3};
    bool refine{true};
    unsigned threads{1};
};

// Currents as a function of T_m; must be safe to call concurrently.
using CurrentProbe = std::function<CurrentTriple(double)>;

namespace detail {

inline AmplificationPoint make_amp_point(double T, const CurrentTriple& J, double dJr, double dJm) {
    AmplificationPoint a;
    a.T_m = T;
    a.J = J;
    a.dJr_dTm = dJr;
    a.dJm_dTm = dJm;
    a.beta_r = dJm != 0.0 ? std::abs(dJr / dJm) : std::numeric_limits<double>::infinity();
    const double ratio = dJm != 0.0 ? dJr / dJm : 0.0;
    a.response_sign = ratio > 0.0 ? 1 : (ratio < 0.0 ? -1 : 0);
    a.beta_l = std::abs(a.beta_r + a.response_sign);
    return a;
}

} // namespace detail

// Derivatives and β on a fixed grid of currents, without refinement.
inline std::vector<AmplificationPoint> amplification_from_currents(const std::vector<double>& grid,
                                                                   const std::vector<CurrentTriple>& J,
                                                                   double eps_div = 1e-3) {
    const std::size_t n = grid.size();
    if (n < 3) throw ValidationError("sweep_n", "amplification scan needs at least 3 points");
    if (J.size() != n) throw std::invalid_argument("amplification_from_currents: size mismatch");
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1])) throw ValidationError("sweep", "T_m grid must be strictly increasing");
    std::vector<double> dJr(n), dJm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == n ? n - 1 : i + 1;
        const double h = grid[b] - grid[a];
        dJr[i] = (J[b].J_r - J[a].J_r) / h;
        dJm[i] = (J[b].J_m - J[a].J_m) / h;
    }
    double max_dJm = 0.0;
    for (double d : dJm) max_dJm = std::max(max_dJm, std::abs(d));
    std::vector<AmplificationPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto p = detail::make_amp_point(grid[i], J[i], dJr[i], dJm[i]);
        p.divergent = std::abs(dJm[i]) < eps_div * max_dJm;
        out.push_back(p);
    }
    return out;
}

inline std::vector<AmplificationPoint> amplification_scan(const CurrentProbe& probe, const std::vector<double>& grid,
                                                          const ScanOptions& opt = {}) {
    const std::size_t n = grid.size();
    if (n < 3) throw ValidationError("sweep_n", "amplification scan needs at least 3 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1])) throw ValidationError("sweep", "T_m grid must be strictly increasing");
    auto results = parallel_map(n, [&](std::size_t i) { return probe(grid[i]); }, opt.threads);
    std::vector<CurrentTriple> J(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!results[i].ok())
            throw NumericsError("amplification scan failed at T_m = " + std::to_string(grid[i]) + ": " +
                                results[i].error);
        J[i] = *results[i].value;
    }
    const auto base = amplification_from_currents(grid, J, opt.eps_div);
    double max_dJm = 0.0;
    for (const auto& p : base) max_dJm = std::max(max_dJm, std::abs(p.dJm_dTm));
    const double threshold = opt.eps_div * max_dJm;
    std::vector<double> dJm(n);
    for (std::size_t i = 0; i < n; ++i) dJm[i] = base[i].dJm_dTm;

    std::vector<AmplificationPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(base[i]);
        if (!opt.refine || i + 1 == n) continue;
        if (!(dJm[i] * dJm[i + 1] < 0.0)) continue;
        if (std::abs(dJm[i]) < threshold || std::abs(dJm[i + 1]) < threshold) continue;
        // local derivative by a symmetric difference much finer than the grid
        const double h = 1e-3 * (grid[i + 1] - grid[i]);
        auto deriv = [&](double T) {
            const auto lo = probe(T - h), hi = probe(T + h);
            return std::pair{(hi.J_r - lo.J_r) / (2.0 * h), (hi.J_m - lo.J_m) / (2.0 * h)};
        };
        std::uintmax_t iters = 40;
        const auto tol = boost::math::tools::eps_tolerance<double>(30);
        double fa = dJm[i];
        try {
            const auto [a, b] = boost::math::tools::toms748_solve(
                [&](double T) { return deriv(T).second; }, grid[i], grid[i + 1], fa, dJm[i + 1], tol, iters);
            const double root = 0.5 * (a + b);
            const auto [r_deriv, m_deriv] = deriv(root);
            auto q = detail::make_amp_point(root, probe(root), r_deriv, m_deriv);
            q.divergent = std::abs(m_deriv) < threshold;
            q.inserted = true;
            out.push_back(q);
        } catch (const std::exception&) {
            // bracketing failed on a noisy derivative; keep the grid rows only
        }
    }
    return out;
}

inline CurrentProbe scheme_probe(const ModelPoint& base, Scheme scheme, RateOrder order = RateOrder::full) {
    return [base, scheme, order](double T_m) {
        ModelPoint p = base;
        p.baths.middle.temperature = T_m;
        return evaluate(p, scheme, order).currents;
    };
}

// Truncated NIBA currents: J_m ≈ J⁽ᵃ⁾ + J⁽ᵇ⁾ with the full NIBA J_r.
inline CurrentProbe niba_mechanism_probe(const ModelPoint& base) {
    return [base](double T_m) {
        ModelPoint p = base;
        p.baths.middle.temperature = T_m;
        const auto r = evaluate(p, Scheme::niba);
        const double Jm = r.niba->J_m_a + r.niba->J_m_b;
        return CurrentTriple{-r.currents.J_r - Jm, r.currents.J_r, Jm};
    };
}

inline std::vector<AmplificationPoint> amplification_scan(const ModelPoint& base, Scheme scheme,
                                                          const std::vector<double>& grid, const ScanOptions& opt = {}) {
    base.validate();
    return amplification_scan(scheme_probe(base, scheme), grid, opt);
}

// β_r ≈ (sin²θ/16)|(κ^e_{l,+}κ^a_{r,+} - κ^a_{l,+}κ^e_{r,+}) / (Γ^a_-(Γ^a_+ + Γ^e_+) + Γ^a_+Γ^e_-)|.
inline double weak_coupling_beta(const ModelPoint& p) {
    const auto t = redfield_rates(p.sys, p.baths, p.conv);
    const double num = t.kappa_e[0][0] * t.kappa_a[1][0] - t.kappa_a[0][0] * t.kappa_e[1][0];
    const double den = t.Gamma_a[1] * (t.Gamma_a[0] + t.Gamma_e[0]) + t.Gamma_a[0] * t.Gamma_e[1];
    if (den == 0.0) throw DegenerateSteadyState("weak_coupling_beta: vanishing denominator");
    return std::pow(std::sin(t.frame.theta), 2) / 16.0 * std::abs(num / den);
}

struct NDTCRow {
    double delta_T{0.0};
    double T_m{0.0};
    double J{0.0};  // J_{l-m}: energy flowing from the left into the middle bath
    std::optional<NIBARateTable> rates;
};

struct Turnover {
    std::size_t index{0};  // row index of the extremum
    double delta_T{0.0};
    bool maximum{true};
};

struct NDTCResult {
    std::vector<NDTCRow> rows;
    std::vector<Turnover> turnovers;
};

// Sign changes of the discrete derivative, ignoring steps below `tol`.
inline std::vector<Turnover> find_turnovers(const std::vector<double>& x, const std::vector<double>& y, double tol) {
    std::vector<Turnover> out;
    int last_sign = 0;
    std::size_t last_index = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double d = y[i] - y[i - 1];
        const int s = d > tol ? 1 : (d < -tol ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) {
            // extremum sits at the last point before the slope changed sign
            out.push_back({last_index, x[last_index], last_sign > 0});
        }
        last_sign = s;
        last_index = i;
    }
    return out;
}

// Two-terminal (right bath detached) current J_{l-m} versus ΔT = T_l - T_m.
inline NDTCResult ndtc_scan(const ModelPoint& base, Scheme scheme, RateOrder order, const std::vector<double>& delta_T,
                            unsigned threads = 1, double tol = -1.0) {
    if (scheme == Scheme::redfield) throw std::invalid_argument("ndtc_scan: scheme must be ptre or niba");
    ModelPoint two = base;
    two.baths.right.coupling = 0.0;
    two.validate();
    const double T_l = two.baths.left.temperature;
    for (double d : delta_T)
        if (!(T_l - d > 0.0)) throw ValidationError("delta_T", "T_m = T_l - delta_T must stay positive");
    auto res = parallel_map(delta_T.size(), [&](std::size_t i) {
        ModelPoint p = two;
        p.baths.middle.temperature = T_l - delta_T[i];
        NDTCRow row;
        row.delta_T = delta_T[i];
        row.T_m = p.baths.middle.temperature;
        if (scheme == Scheme::niba) {
            const auto frame = polaron_frame(p.sys, p.baths.middle);
            const CorrelationTables ct(p.baths, frame, p.quad);
            const auto t = niba_rates(ct, p.sys, order);
            row.J = niba_two_terminal(t);
            row.rates = t;
        } else {
            row.J = -evaluate(p, scheme, order).currents.J_l;
        }
        return row;
    }, threads);
    NDTCResult out;
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (!res[i].ok())
            throw NumericsError("ndtc scan failed at delta_T = " + std::to_string(delta_T[i]) + ": " + res[i].error);
        out.rows.push_back(*res[i].value);
    }
    std::vector<double> x, y;
    for (const auto& r : out.rows) {
        x.push_back(r.delta_T);
        y.push_back(r.J);
    }
    const double t = tol >= 0.0 ? tol : 1e-12 * std::max(two.baths.left.coupling, 1e-300);
    out.turnovers = find_turnovers(x, y, t);
    return out;
}

struct RegimeRow {
    double alpha{0.0};
    CurrentTriple ptre, niba, redfield;
    bool redfield_ok{false};
};

struct RegimeReport {
    std::vector<RegimeRow> rows;
    std::optional<double> redfield_jm_breakdown;  // first α where Redfield J_m deviates > tol
    std::optional<double> redfield_jl_breakdown;  // same for J_l
    std::optional<double> niba_jm_validity;       // smallest α beyond which NIBA J_m stays within tol
    double nominal_weak{0.01};
    double nominal_strong{2.0};
};

inline double relative_deviation(double x, double ref) {
    return ref != 0.0 ? std::abs(x - ref) / std::abs(ref) : std::abs(x);
}

inline RegimeReport regime_classifier(const ModelPoint& base, const std::vector<double>& alphas, double tol = 0.1,
                                      unsigned threads = 1) {
    base.validate();
    auto res = parallel_map(alphas.size(), [&](std::size_t i) {
        ModelPoint p = base;
        p.baths.middle.coupling = alphas[i];
        RegimeRow row;
        row.alpha = alphas[i];
        const auto frame = polaron_frame(p.sys, p.baths.middle);
        const CorrelationTables ct(p.baths, frame, p.quad);
        row.ptre = ptre_solve(ptre_rates(ct, p.sys, RateOrder::full, p.conv)).currents;
        row.niba = niba_currents(niba_rates(ct, p.sys)).currents;
        try {
            row.redfield = redfield_currents(redfield_rates(p.sys, p.baths, p.conv)).currents;
            row.redfield_ok = true;
        } catch (const RegimeError&) {
        }
        return row;
    }, threads);
    RegimeReport rep;
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (!res[i].ok())
            throw NumericsError("regime classification failed at alpha_m = " + std::to_string(alphas[i]) + ": " +
                                res[i].error);
        rep.rows.push_back(*res[i].value);
    }
    for (const auto& r : rep.rows) {
        if (!r.redfield_ok) continue;
        if (!rep.redfield_jm_breakdown && relative_deviation(r.redfield.J_m, r.ptre.J_m) > tol)
            rep.redfield_jm_breakdown = r.alpha;
        if (!rep.redfield_jl_breakdown && relative_deviation(r.redfield.J_l, r.ptre.J_l) > tol)
            rep.redfield_jl_breakdown = r.alpha;
    }
    for (std::size_t i = rep.rows.size(); i-- > 0;) {
        if (relative_deviation(rep.rows[i].niba.J_m, rep.rows[i].ptre.J_m) > tol) break;
        rep.niba_jm_validity = rep.rows[i].alpha;
    }
    return rep;
}

} // namespace qtt
