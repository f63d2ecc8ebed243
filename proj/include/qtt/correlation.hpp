// correlation.hpp — Middle-bath correlation phase φ_m(τ) and half-line Fourier transforms
//
// Every time-domain quantity lives on one shared TimeGrid (geometric panels on
// [0, τ_max]). Thermal transforms of the spectra are evaluated by Filon quadrature
// in frequency; half-line transforms in time by Filon quadrature in τ. Integrands
// that do not decay (e^{φ/4} → 1) are split into a decaying numeric part plus the
// analytic singular part tail·[πδ(ω) + i PV(1/ω)].

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qtt/errors.hpp"
#include "qtt/model.hpp"
#include "qtt/numerics.hpp"

namespace qtt {

using Complex = std::complex<double>;

struct QuadratureConfig {
    double tau_max{0.0};          // decay-test horizon; 0 picks 50/ω_c and doubles until φ_m has decayed
    std::size_t n_tau{20};        // Gauss nodes per time panel
    std::size_t n_omega{24};      // Gauss nodes per frequency panel
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    double omega_max{0.0};        // frequency truncation; 0 picks 60 ω_c
    double panel_ratio{0.5};      // time panel width / distance from the τ = 0 singularity
    double tail_factor{1e3};      // grid extends to tail_factor × decay horizon

    void validate() const {
        if (tau_max < 0.0 || !std::isfinite(tau_max)) throw ValidationError("tau_max", "must be >= 0");
        if (n_tau < 4 || n_tau > 64) throw ValidationError("n_tau", "must be in [4, 64]");
        if (n_omega < 4 || n_omega > 64) throw ValidationError("n_omega", "must be in [4, 64]");
        if (!(abs_tol > 0.0)) throw ValidationError("abs_tol", "must be > 0");
        if (!(rel_tol > 0.0)) throw ValidationError("rel_tol", "must be > 0");
        if (omega_max < 0.0 || !std::isfinite(omega_max)) throw ValidationError("omega_max", "must be >= 0");
        if (!(panel_ratio > 0.0 && panel_ratio <= 2.0)) throw ValidationError("panel_ratio", "must be in (0, 2]");
        if (!(tail_factor >= 1.0)) throw ValidationError("tail_factor", "must be >= 1");
    }
};

// Frequency panels for thermal transforms of one bath: fine panels where coth(ω/2T)
// departs from 1, coarse panels out to ω_max.
inline numerics::PanelGrid frequency_grid(const BathParams& bath, const QuadratureConfig& q) {
    const double T = bath.temperature;
    const double wc = bath.cutoff;
    const double wmax = q.omega_max > 0.0 ? q.omega_max : 60.0 * wc;
    const double fine = std::min(2.0 * T, 0.5 * wc);
    const double coarse = 0.5 * wc;
    const double split = std::min(40.0 * T, wmax);
    std::vector<double> widths;
    const auto n_fine = static_cast<std::size_t>(std::ceil(split / fine));
    for (std::size_t i = 0; i < n_fine; ++i) widths.push_back(split / static_cast<double>(n_fine));
    if (wmax > split) {
        const auto n_coarse = static_cast<std::size_t>(std::ceil((wmax - split) / coarse));
        for (std::size_t i = 0; i < n_coarse; ++i) widths.push_back((wmax - split) / static_cast<double>(n_coarse));
    }
    return numerics::PanelGrid::from_widths(0.0, widths, q.n_omega);
}

// Thermal transform of a positive weight g on ω > 0:
//   coth_cos(τ) = ∫ g coth(ω/2T) cos ωτ,  sin(τ) = ∫ g sin ωτ,
//   cos(τ)      = ∫ g cos ωτ,             coth_sin(τ) = ∫ g coth(ω/2T) sin ωτ.
class ThermalTransform {
public:
    ThermalTransform(const BathParams& bath, const QuadratureConfig& q, const std::function<double(double)>& g)
        : grid_(frequency_grid(bath, q)) {
        const auto& w = grid_.nodes();
        plain_.resize(w.size());
        coth_.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            plain_[i] = g(w[i]);
            coth_[i] = plain_[i] / std::tanh(w[i] / (2.0 * bath.temperature));
        }
    }

    struct Parts {
        double coth_cos, sin, cos, coth_sin;
    };

    Parts at(double tau) const {
        std::array<std::span<const double>, 2> s{std::span<const double>(coth_), std::span<const double>(plain_)};
        std::array<Complex, 2> out;
        grid_.fourier_many<double>(tau, s, out);
        return {out[0].real(), out[1].imag(), out[1].real(), out[0].imag()};
    }

private:
    numerics::PanelGrid grid_;
    std::vector<double> plain_, coth_;
};

// φ_m(τ) = (1/π)∫₀^∞ Λ_m(ω)/ω² [cos ωτ coth(ω/2T_m) - i sin ωτ] dω.
class PhaseTransform {
public:
    PhaseTransform(const BathParams& middle, const QuadratureConfig& q)
        : transform_(middle, q, [middle](double w) { return spectral_density(middle, w) / (std::numbers::pi * w * w); }) {}

    Complex operator()(double tau) const {
        const auto p = transform_.at(tau);
        return {p.coth_cos, -p.sin};
    }

private:
    ThermalTransform transform_;
};

inline Complex phase_function(const BathParams& middle, double tau, const QuadratureConfig& q = {}) {
    if (middle.coupling == 0.0) return {0.0, 0.0};
    return PhaseTransform(middle, q)(tau);
}

// Geometric time panels on [0, τ_end]: width = ratio·(start + scale).
class TimeGrid {
public:
    TimeGrid(double tau_end, double scale, double ratio, std::size_t n)
        : grid_(make(tau_end, scale, ratio, n)) {}

    const numerics::PanelGrid& panels() const noexcept { return grid_; }
    const std::vector<double>& nodes() const noexcept { return grid_.nodes(); }
    std::size_t size() const noexcept { return grid_.nodes().size(); }
    double tau_end() const { return grid_.upper(); }

private:
    static numerics::PanelGrid make(double tau_end, double scale, double ratio, std::size_t n) {
        std::vector<double> widths;
        double s = 0.0;
        while (s < tau_end) {
            const double w = ratio * (s + scale);
            widths.push_back(w);
            s += w;
        }
        return numerics::PanelGrid::from_widths(0.0, widths, n);
    }

    numerics::PanelGrid grid_;
};

// ∫₀^∞ e^{iωτ}(f(τ) - tail) dτ plus the symbolic remainder tail·[πδ(ω) + i PV(1/ω)].
struct HalfFourier {
    Complex numeric{};
    Complex tail{};

    Complex delta_weight() const { return std::numbers::pi * tail; }  // coefficient of δ(ω)
    Complex pv_weight() const { return tail; }                         // coefficient of PV(1/ω)
    // Value away from ω = 0, where the δ term vanishes.
    Complex off_resonance(double omega) const { return numeric + Complex{0.0, 1.0} * tail / omega; }
};

inline HalfFourier half_fourier(const TimeGrid& grid, std::span<const Complex> f, Complex tail, double omega) {
    if (f.size() != grid.size()) throw NumericsError("half_fourier: sample count does not match grid");
    std::vector<Complex> g(f.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        g[i] = f[i] - tail;
        if (!std::isfinite(g[i].real()) || !std::isfinite(g[i].imag()))
            throw NumericsError("half_fourier: non-finite integrand sample");
        peak = std::max(peak, std::abs(g[i]));
    }
    if (peak > 0.0 && std::abs(g.back()) > 1e-6 * peak + 1e-300)
        throw NumericsError("half_fourier: integrand minus tail has not decayed at tau_max (|f-tail| = " +
                            std::to_string(std::abs(g.back())) + ")");
    return {grid.panels().fourier<Complex>(omega, g), tail};
}

inline HalfFourier half_fourier(const TimeGrid& grid, const std::function<Complex(double)>& f, Complex tail,
                                double omega) {
    std::vector<Complex> s(grid.size());
    const auto& t = grid.nodes();
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = f(t[i]);
    return half_fourier(grid, s, tail, omega);
}

// Sampled correlation data for one parameter point: φ_m on the time grid together with
// the left/right bath kernels
//   F_u(τ)  = ∫ Λ_u(ω) n_u(ω) e^{iωτ} dω,   F1_u(τ) = ∫ ω Λ_u(ω) n_u(ω) e^{iωτ} dω
// over the whole real line.
class CorrelationTables {
public:
    CorrelationTables(const BathSet& baths, const PolaronFrame& frame, const QuadratureConfig& q)
        : CorrelationTables(baths.left, baths.middle, baths.right, frame, q) {}

    CorrelationTables(const BathParams& left, const BathParams& middle, const BathParams& right,
                      const PolaronFrame& frame, const QuadratureConfig& q)
        : left_(left), right_(right), middle_(middle), frame_(frame), quad_(q), phase_(middle, q), grid_(build_grid(middle, q, phase_)) {
        q.validate();
        const auto& t = grid_.nodes();
        phi_.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) phi_[i] = middle.coupling == 0.0 ? Complex{} : phase_(t[i]);
        phi0_ = middle.coupling == 0.0 ? 0.0 : phase_(0.0).real();
        fill_bath(left, kernel_[0], kernel1_[0]);
        fill_bath(right, kernel_[1], kernel1_[1]);
    }

    const TimeGrid& grid() const noexcept { return grid_; }
    const PolaronFrame& frame() const noexcept { return frame_; }
    const BathParams& middle() const noexcept { return middle_; }
    const BathParams& side(int u) const noexcept { return u == 0 ? left_ : right_; }
    const QuadratureConfig& quadrature() const noexcept { return quad_; }
    std::span<const Complex> phase_samples() const noexcept { return phi_; }
    double phase_at_zero() const noexcept { return phi0_; }
    Complex phase(double tau) const { return middle_.coupling == 0.0 ? Complex{} : phase_(tau); }

    // u = 0 (left) or 1 (right); moment 0 → F_u, 1 → F1_u
    std::span<const Complex> kernel(int u, int moment) const {
        return moment == 0 ? std::span<const Complex>(kernel_[u]) : std::span<const Complex>(kernel1_[u]);
    }

    // γ_x(ω) = η²Δ²∫₀^∞ e^{iωτ}[cosh φ - 1],  γ_y(ω) = η²Δ²∫₀^∞ e^{iωτ} sinh φ.
    std::pair<Complex, Complex> gamma_xy(double delta, double omega) const {
        const double pref = frame_.eta * frame_.eta * delta * delta;
        if (pref == 0.0) return {};
        std::vector<Complex> cx(phi_.size()), sy(phi_.size());
        for (std::size_t i = 0; i < phi_.size(); ++i) {
            cx[i] = std::cosh(phi_[i]) - 1.0;
            sy[i] = std::sinh(phi_[i]);
        }
        const auto gx = half_fourier(grid_, cx, {}, omega);
        const auto gy = half_fourier(grid_, sy, {}, omega);
        return {pref * gx.numeric, pref * gy.numeric};
    }

    // One-phonon γ_y: η²Δ²∫₀^∞ e^{iωτ} φ_m(τ) dτ.
    Complex gamma_y_one_phonon(double delta, double omega) const {
        const double pref = frame_.eta * frame_.eta * delta * delta;
        if (pref == 0.0) return {};
        return pref * half_fourier(grid_, phi_, {}, omega).numeric;
    }

    // C_u(ω) = η_u²∫₀^∞ e^{iωτ} e^{φ_m/4}: numeric part of (e^{φ/4} - 1) and unit tail, both × η_u².
    HalfFourier correlation_C(double omega) const {
        std::vector<Complex> f(phi_.size());
        for (std::size_t i = 0; i < phi_.size(); ++i) f[i] = std::exp(0.25 * phi_[i]);
        auto hf = half_fourier(grid_, f, Complex{1.0, 0.0}, omega);
        const double eu2 = frame_.eta_u * frame_.eta_u;
        hf.numeric *= eu2;
        hf.tail *= eu2;
        return hf;
    }

    // C⁽¹⁾_u(ω) = (η_u²/4)∫₀^∞ e^{iωτ} φ_m(τ) dτ.
    Complex correlation_C1(double omega) const {
        return 0.25 * frame_.eta_u * frame_.eta_u * half_fourier(grid_, phi_, {}, omega).numeric;
    }

    // ∫₀^∞ e^{iωτ} w(τ) F(τ) dτ for a sampled dressing w (e.g. e^{φ/4} - 1) and bath kernel F.
    Complex dressed_kernel_transform(std::span<const Complex> dressing, int u, int moment, double omega) const {
        const auto F = kernel(u, moment);
        std::vector<Complex> g(F.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = dressing[i] * F[i];
        return half_fourier(grid_, g, {}, omega).numeric;
    }

private:
    static TimeGrid build_grid(const BathParams& middle, const QuadratureConfig& q, const PhaseTransform& phase) {
        const double wc = middle.cutoff;
        double horizon = q.tau_max > 0.0 ? q.tau_max : 50.0 / wc;
        if (middle.coupling > 0.0) {
            const double phi0 = std::abs(phase(0.0));
            int guard = 0;
            while (std::abs(phase(horizon)) >= q.rel_tol * phi0) {
                horizon *= 2.0;
                if (++guard > 60) throw NumericsError("correlation phase does not decay");
            }
        }
        // near τ = 0 the dressing e^{φ} varies on 1/(ω_c √(1+φ(0)))
        const double scale = 1.0 / (wc * std::sqrt(1.0 + 2.0 * middle.coupling));
        return TimeGrid(horizon * q.tail_factor, scale, q.panel_ratio, q.n_tau);
    }

    void fill_bath(const BathParams& bath, std::vector<Complex>& F, std::vector<Complex>& F1) const {
        const auto& t = grid_.nodes();
        F.assign(t.size(), Complex{});
        F1.assign(t.size(), Complex{});
        if (bath.coupling == 0.0) return;
        const ThermalTransform zeroth(bath, quad_, [&](double w) { return spectral_density(bath, w); });
        const ThermalTransform first(bath, quad_, [&](double w) { return w * spectral_density(bath, w); });
        for (std::size_t i = 0; i < t.size(); ++i) {
            // F = ∫₀^∞ Λ[coth cos - i sin],  F1 = ∫₀^∞ ωΛ[-cos + i coth sin]
            const auto a = zeroth.at(t[i]);
            const auto b = first.at(t[i]);
            F[i] = {a.coth_cos, -a.sin};
            F1[i] = {-b.cos, b.coth_sin};
        }
    }

    BathParams left_, right_, middle_;
    PolaronFrame frame_;
    QuadratureConfig quad_;
    PhaseTransform phase_;
    TimeGrid grid_;
    std::vector<Complex> phi_;
    double phi0_{0.0};
    std::array<std::vector<Complex>, 2> kernel_, kernel1_;
};

} // namespace qtt
