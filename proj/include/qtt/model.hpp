// model.hpp — System and bath parameters, super-Ohmic spectra, polaron-frame quantities
//
// Units: ħ = k_B = 1. Mode sums over a bath are replaced by (1/4π)∫Λ(ω)f(ω)dω.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "qtt/errors.hpp"

namespace qtt {

enum class BathLabel { left, right, middle };

inline const char* to_string(BathLabel b) {
    switch (b) {
        case BathLabel::left: return "left";
        case BathLabel::right: return "right";
        case BathLabel::middle: return "middle";
    }
    return "?";
}

struct SystemParams {
    double eps_l{1.0};  // left excited level
    double eps_r{0.6};  // right excited level
    double delta{0.6};  // l-r tunnelling

    void validate() const {
        if (!std::isfinite(eps_l)) throw ValidationError("eps_l", "must be finite");
        if (!std::isfinite(eps_r)) throw ValidationError("eps_r", "must be finite");
        if (!std::isfinite(delta) || delta < 0.0) throw ValidationError("delta", "must be finite and >= 0");
    }
};

struct BathParams {
    BathLabel label{BathLabel::middle};
    double temperature{1.0};
    double coupling{0.0};  // γ_l, γ_r or α_m
    double cutoff{10.0};   // ω_c

    void validate() const {
        const char* tag = label == BathLabel::left ? "l" : (label == BathLabel::right ? "r" : "m");
        const std::string coupling_key = label == BathLabel::middle ? "alpha_m" : std::string("gamma_") + tag;
        if (!(temperature > 0.0) || !std::isfinite(temperature))
            throw ValidationError(std::string("T_") + tag, "temperature must be > 0");
        if (!(coupling >= 0.0) || !std::isfinite(coupling))
            throw ValidationError(coupling_key, "coupling must be >= 0");
        if (!(cutoff > 0.0) || !std::isfinite(cutoff))
            throw ValidationError("omega_c", "cutoff must be > 0");
    }
};

struct BathSet {
    BathParams left{BathLabel::left, 2.0, 2e-4, 10.0};
    BathParams middle{BathLabel::middle, 1.2, 0.0, 10.0};
    BathParams right{BathLabel::right, 0.4, 2e-4, 10.0};

    void validate() const {
        left.validate();
        middle.validate();
        right.validate();
    }
    // u = 0 (left) or 1 (right)
    const BathParams& side(int u) const { return u == 0 ? left : right; }
};

// Λ(x) = π c x³/ω_c² e^{-|x|/ω_c}, odd in x.
inline double spectral_density(const BathParams& bath, double x) {
    const double wc = bath.cutoff;
    if (std::abs(x) > 700.0 * wc) return 0.0;
    return std::numbers::pi * bath.coupling * x * x * x / (wc * wc) * std::exp(-std::abs(x) / wc);
}

inline double bose_occupation(double omega, double T) {
    if (omega == 0.0) throw NumericsError("bose_occupation: singular at omega = 0, use thermal_weight");
    return 1.0 / std::expm1(omega / T);
}

// Λ(x)n(x), finite and non-negative on the whole real line (→ 0 as x → 0).
inline double thermal_weight(const BathParams& bath, double x) {
    const double wc = bath.cutoff;
    if (x == 0.0 || std::abs(x) > 700.0 * wc) return 0.0;
    // x³ n(x) = x² · x/(e^{x/T}-1), well behaved for either sign of x
    const double xn = x / std::expm1(x / bath.temperature);
    return std::numbers::pi * bath.coupling * x * x * xn / (wc * wc) * std::exp(-std::abs(x) / wc);
}

// Λ(x)[1 + n(x)] = Λ(-x) n(-x).
inline double emission_weight(const BathParams& bath, double x) { return thermal_weight(bath, -x); }

// Λ(x)[1 + n(x)]/x², the one-phonon emission density; finite at x = 0 (limit π c T/ω_c²).
inline double one_phonon_density(const BathParams& bath, double x) {
    const double wc = bath.cutoff;
    const double T = bath.temperature;
    if (std::abs(x) > 700.0 * wc) return 0.0;
    const double x_over = (x == 0.0) ? T : -x / std::expm1(-x / T);  // x(1+n(x))
    return std::numbers::pi * bath.coupling * x_over / (wc * wc) * std::exp(-std::abs(x) / wc);
}

namespace detail {
inline double half_line_integral(auto&& f) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double value = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14, &err);
    if (!std::isfinite(value)) throw NumericsError("half-line quadrature returned a non-finite value");
    return value;
}
} // namespace detail

// λ = Σ_k |g_k|²/ω_k = (1/4π)∫₀^∞ Λ(ω)/ω dω, evaluated by quadrature (= α ω_c/2 here).
inline double reorganization_energy(const BathParams& middle) {
    if (middle.coupling == 0.0) return 0.0;
    return detail::half_line_integral([&](double w) { return spectral_density(middle, w) / w; }) /
           (4.0 * std::numbers::pi);
}

struct Renormalization {
    double eta{1.0};    // ⟨e^{±2iB}⟩
    double eta_u{1.0};  // ⟨e^{±iB}⟩ = η^{1/4}
};

// η = exp[-(1/2π)∫₀^∞ Λ_m(ω)/ω² coth(ω/2T_m) dω].
inline Renormalization renormalization_factor(const BathParams& middle) {
    if (middle.coupling == 0.0) return {};
    const double T = middle.temperature;
    const double wc = middle.cutoff;
    const double pref = std::numbers::pi * middle.coupling / (wc * wc);
    // Λ/ω² coth(ω/2T) = pref · ω coth(ω/2T) e^{-ω/ω_c}; ω coth(ω/2T) → 2T at ω = 0
    const double integral = detail::half_line_integral([&](double w) {
        if (w > 700.0 * wc) return 0.0;
        const double wcoth = (w < 1e-8 * T) ? 2.0 * T : w / std::tanh(w / (2.0 * T));
        return pref * wcoth * std::exp(-w / wc);
    });
    const double exponent = integral / (2.0 * std::numbers::pi);
    Renormalization r;
    r.eta = std::exp(-exponent);
    r.eta_u = std::exp(-0.25 * exponent);
    return r;
}

struct PolaronFrame {
    double eta{1.0};
    double eta_u{1.0};
    double lambda_reorg{0.0};
    double eps_bar{0.0};    // (ε_l+ε_r)/2 - λ
    double delta_eps{0.0};  // (ε_l-ε_r)/2
    double tunnel{0.0};     // ηΔ
    double theta{0.0};      // atan2(ηΔ, δε) ∈ [0, π]
    double e_plus{0.0};
    double e_minus{0.0};
    double e_l_loc{0.0};    // ε_l - λ
    double e_r_loc{0.0};    // ε_r - λ

    double gap() const noexcept { return e_plus - e_minus; }
};

inline PolaronFrame polaron_frame(const SystemParams& sys, const BathParams& middle) {
    sys.validate();
    middle.validate();
    PolaronFrame f;
    const auto ren = renormalization_factor(middle);
    f.eta = ren.eta;
    f.eta_u = ren.eta_u;
    f.lambda_reorg = reorganization_energy(middle);
    f.eps_bar = 0.5 * (sys.eps_l + sys.eps_r) - f.lambda_reorg;
    f.delta_eps = 0.5 * (sys.eps_l - sys.eps_r);
    const double t = f.eta * sys.delta;
    f.tunnel = t;
    f.theta = std::atan2(t, f.delta_eps);
    if (t == 0.0 && f.delta_eps == 0.0) f.theta = 0.5 * std::numbers::pi;
    const double half_gap = std::hypot(f.delta_eps, t);
    f.e_plus = f.eps_bar + half_gap;
    f.e_minus = f.eps_bar - half_gap;
    f.e_l_loc = sys.eps_l - f.lambda_reorg;
    f.e_r_loc = sys.eps_r - f.lambda_reorg;
    return f;
}

} // namespace qtt
