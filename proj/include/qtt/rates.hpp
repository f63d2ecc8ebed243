// rates.hpp — Rate tables for the three transport schemes
//
// PTRE rates are computed in the time domain:
//   κ_{u,±}(ω) = (η_u²/4π) ∫₀^∞ e^{∓iωτ} e^{φ_m(τ)/4} F_u(τ) dτ,
// with F_u the full-line thermal kernel of bath u (F1_u for the energy-weighted moment).
// The constant part of e^{φ/4} is folded analytically: its real part is the resonant
// term η_u²Λ_u(ω)n_u(ω)/4 (absorption) or η_u²Λ_u(ω)[1+n_u(ω)]/4 (emission); its
// imaginary part is a principal-value level shift.
//
// Rate tables keep only the real (dissipative) parts unless Conventions::include_pv is
// set; the imaginary parts only renormalise the coherence block.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qtt/correlation.hpp"
#include "qtt/errors.hpp"
#include "qtt/model.hpp"

namespace qtt {

enum class Sign { plus, minus };  // plus: |0⟩ → excited (absorb from bath), minus: excited → |0⟩

// Prefactor of the Redfield middle-bath rates: sin²θ/2 or sin²θ/8.
enum class GammaPFactor { half, eighth };

struct Conventions {
    GammaPFactor gamma_p{GammaPFactor::half};
    bool include_pv{false};
};

// Order of the expansion of e^{φ_m/4} (and e^{±φ_m} in γ_{x,y}) used by the rates.
enum class RateOrder { zeroth, first, full };

namespace detail {

// e^{φ/4} - 1 or its first-order truncation φ/4.
inline std::vector<Complex> single_dressing(const CorrelationTables& ct, RateOrder order) {
    const auto phi = ct.phase_samples();
    std::vector<Complex> d(phi.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (order == RateOrder::full) d[i] = std::expm1(0.25 * phi[i].real()) * std::polar(1.0, 0.25 * phi[i].imag()) +
                                             (std::polar(1.0, 0.25 * phi[i].imag()) - 1.0);
        else if (order == RateOrder::first) d[i] = 0.25 * phi[i];
        else d[i] = 0.0;
    }
    return d;
}

// Resonant weight ∫ (Λn) e^{∓iωτ}: moment 0 gives Λn(ω) or Λ(1+n)(ω); moment 1 adds ∓ω.
inline double resonant_weight(const BathParams& bath, double omega, Sign s, int moment) {
    const double w = s == Sign::plus ? thermal_weight(bath, omega) : emission_weight(bath, omega);
    if (moment == 0) return w;
    return s == Sign::plus ? -omega * w : omega * w;
}

} // namespace detail

// Generalised rate κ_{u,±}(ω) at counting moment 0 or 1, with the dressing truncated at `order`.
inline Complex ptre_kappa(const CorrelationTables& ct, int u, double omega, int moment, Sign s,
                          RateOrder order = RateOrder::full, bool include_pv = true,
                          const std::vector<Complex>* dressing = nullptr) {
    const auto& bath = ct.side(u);
    if (bath.coupling == 0.0) return {};
    const double eu2 = ct.frame().eta_u * ct.frame().eta_u;
    const double pref = eu2 / (4.0 * std::numbers::pi);
    const double w = s == Sign::plus ? -omega : omega;
    Complex value = 0.25 * eu2 * detail::resonant_weight(bath, omega, s, moment);
    const auto F = ct.kernel(u, moment);
    // F1 enters with the energy weight -ω₁ for both signs
    const double fsign = moment == 0 ? 1.0 : -1.0;
    if (order != RateOrder::zeroth) {
        std::vector<Complex> local;
        if (!dressing) {
            local = detail::single_dressing(ct, order);
            dressing = &local;
        }
        value += fsign * pref * ct.dressed_kernel_transform(*dressing, u, moment, w);
    }
    if (include_pv) {
        std::vector<Complex> one(F.size(), Complex{1.0, 0.0});
        const Complex bare = fsign * pref * ct.dressed_kernel_transform(one, u, moment, w);
        value += Complex{0.0, bare.imag()};
    }
    return value;
}

// Ordered rate: order 0 keeps only the resonant term, order 1 adds the one-phonon convolution.
inline Complex ordered_kappa(const CorrelationTables& ct, int u, double omega, int order, Sign s, int moment = 0) {
    if (order != 0 && order != 1) throw std::invalid_argument("ordered_kappa: order must be 0 or 1");
    return ptre_kappa(ct, u, omega, moment, s, order == 0 ? RateOrder::zeroth : RateOrder::first);
}

// Frequency-domain form of the first-order correction to Re κ_{u,±}(ω):
//   (η_u²/16π) ∫ dω₁ w_u(ω₁) Λ_m(ν)[1+n_m(ν)]/ν²,  ν = ±(ω₁ - ω),
// with w_u = Λ_u n_u (plus) or Λ_u(1+n_u) (minus), times (∓ω₁) for moment 1.
inline double one_phonon_correction(const CorrelationTables& ct, int u, double omega, Sign s, int moment,
                                    const QuadratureConfig& q = {}) {
    const auto& bath = ct.side(u);
    const auto& middle = ct.middle();
    if (bath.coupling == 0.0 || middle.coupling == 0.0) return 0.0;
    const double eu2 = ct.frame().eta_u * ct.frame().eta_u;
    auto integrand = [&](double w1) {
        const double nu = s == Sign::plus ? w1 - omega : omega - w1;
        double v = (s == Sign::plus ? thermal_weight(bath, w1) : emission_weight(bath, w1)) *
                   one_phonon_density(middle, nu);
        if (moment == 1) v *= s == Sign::plus ? -w1 : w1;
        return v;
    };
    const double wmax = q.omega_max > 0.0 ? q.omega_max : 60.0 * std::max(bath.cutoff, middle.cutoff);
    // panels refined around ω₁ = 0 and ω₁ = ω where the integrand has kinks
    std::vector<double> breaks{-wmax, std::min(0.0, omega), std::max(0.0, omega), wmax};
    double total = 0.0;
    const auto rule = numerics::gauss_legendre(q.n_omega);
    const double fine = 0.25 * std::min({bath.temperature, middle.temperature, bath.cutoff});
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double a = breaks[b], c = breaks[b + 1];
        if (c <= a) continue;
        // graded panels away from the inner breakpoints
        std::vector<double> edges{a};
        if (b == 0) {
            double x = c, h = fine;
            std::vector<double> rev{c};
            while (x - h > a) {
                x -= h;
                rev.push_back(x);
                h *= 1.3;
            }
            edges.assign(rev.rbegin(), rev.rend());
            edges.insert(edges.begin(), a);
        } else if (b + 2 == breaks.size()) {
            double x = a, h = fine;
            while (x + h < c) {
                x += h;
                edges.push_back(x);
                h *= 1.3;
            }
            edges.push_back(c);
        } else {
            const auto n = static_cast<std::size_t>(std::ceil((c - a) / fine)) + 1;
            for (std::size_t i = 1; i <= n; ++i) edges.push_back(a + (c - a) * static_cast<double>(i) / n);
        }
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double mid = 0.5 * (edges[e] + edges[e + 1]);
            const double half = 0.5 * (edges[e + 1] - edges[e]);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                total += half * rule.weights[i] * integrand(mid + half * rule.nodes[i]);
        }
    }
    return eu2 / (16.0 * std::numbers::pi) * total;
}

struct PTRERateTable {
    PolaronFrame frame;
    double delta{0.0};
    // γ at ω = 0, +Δ_E, -Δ_E
    std::array<Complex, 3> gamma_x{}, gamma_y{};
    // kappa[u][sign][level][moment]; u: 0 left, 1 right; level: 0 → E_+, 1 → E_-
    std::array<std::array<std::array<std::array<Complex, 2>, 2>, 2>, 2> kappa{};
    RateOrder order{RateOrder::full};

    Complex k(int u, Sign s, int level, int moment) const {
        return kappa[u][s == Sign::plus ? 0 : 1][level][moment];
    }
};

// Full-order PTRE rates, or the ordered variant (one-phonon γ_y, no γ_x, κ at order 0 or 1).
inline PTRERateTable ptre_rates(const CorrelationTables& ct, const SystemParams& sys, RateOrder order = RateOrder::full,
                                const Conventions& conv = {}) {
    PTRERateTable t;
    t.frame = ct.frame();
    t.delta = sys.delta;
    t.order = order;
    const double gap = t.frame.gap();
    const std::array<double, 3> freqs{0.0, gap, -gap};
    for (std::size_t i = 0; i < 3; ++i) {
        if (order == RateOrder::full) {
            const auto [gx, gy] = ct.gamma_xy(sys.delta, freqs[i]);
            t.gamma_x[i] = conv.include_pv ? gx : Complex{gx.real(), 0.0};
            t.gamma_y[i] = conv.include_pv ? gy : Complex{gy.real(), 0.0};
        } else {
            t.gamma_x[i] = 0.0;
            const Complex gy = ct.gamma_y_one_phonon(sys.delta, freqs[i]);
            t.gamma_y[i] = conv.include_pv ? gy : Complex{gy.real(), 0.0};
        }
    }
    const auto dressing = detail::single_dressing(ct, order);
    const std::array<double, 2> levels{t.frame.e_plus, t.frame.e_minus};
    for (int u = 0; u < 2; ++u)
        for (int s = 0; s < 2; ++s)
            for (int lv = 0; lv < 2; ++lv)
                for (int m = 0; m < 2; ++m) {
                    const Complex k = ptre_kappa(ct, u, levels[lv], m, s == 0 ? Sign::plus : Sign::minus, order,
                                                 conv.include_pv, &dressing);
                    t.kappa[u][s][lv][m] = conv.include_pv ? k : Complex{k.real(), 0.0};
                }
    return t;
}

struct NIBARateTable {
    double G_m_plus{0.0};   // l → r
    double G_m_minus{0.0};  // r → l
    std::array<double, 2> G_plus{}, G_minus{};          // |0⟩ → |u⟩, |u⟩ → |0⟩
    std::array<double, 2> omega_plus{}, omega_minus{};  // average energy quanta into bath u
    std::array<double, 2> energy{};                      // localized E_u
};

// G_m^± = 2 Re[Δ²η² ∫₀^∞ e^{±i(ε_l-ε_r)τ}(e^{φ_m} - 1) dτ]; the constant part only
// contributes at zero frequency.
inline std::pair<double, double> niba_middle_rates(const CorrelationTables& ct, const SystemParams& sys) {
    const double split = sys.eps_l - sys.eps_r;
    if (split == 0.0) throw RegimeError("NIBA middle-bath rates require eps_l != eps_r");
    const double eta2 = ct.frame().eta * ct.frame().eta;
    if (sys.delta == 0.0 || eta2 == 0.0) return {0.0, 0.0};
    const double log_eta2 = std::log(eta2);
    const auto phi = ct.phase_samples();
    std::vector<Complex> f(phi.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(phi[i] + log_eta2) - eta2;
    const double d2 = sys.delta * sys.delta;
    const double gp = 2.0 * d2 * half_fourier(ct.grid(), f, {}, split).numeric.real();
    const double gm = 2.0 * d2 * half_fourier(ct.grid(), f, {}, -split).numeric.real();
    return {gp, gm};
}

inline NIBARateTable niba_rates(const CorrelationTables& ct, const SystemParams& sys,
                                RateOrder order = RateOrder::full) {
    NIBARateTable t;
    std::tie(t.G_m_plus, t.G_m_minus) = niba_middle_rates(ct, sys);
    const auto dressing = detail::single_dressing(ct, order);
    t.energy = {ct.frame().e_l_loc, ct.frame().e_r_loc};
    for (int u = 0; u < 2; ++u) {
        const double E = t.energy[u];
        t.G_plus[u] = 2.0 * ptre_kappa(ct, u, E, 0, Sign::plus, order, false, &dressing).real();
        t.G_minus[u] = 2.0 * ptre_kappa(ct, u, E, 0, Sign::minus, order, false, &dressing).real();
        const double m_plus = 2.0 * ptre_kappa(ct, u, E, 1, Sign::plus, order, false, &dressing).real();
        const double m_minus = 2.0 * ptre_kappa(ct, u, E, 1, Sign::minus, order, false, &dressing).real();
        t.omega_plus[u] = t.G_plus[u] > 0.0 ? m_plus / t.G_plus[u] : -E;
        t.omega_minus[u] = t.G_minus[u] > 0.0 ? -m_minus / t.G_minus[u] : -E;
    }
    return t;
}

inline NIBARateTable niba_first_order_rates(const CorrelationTables& ct, const SystemParams& sys) {
    return niba_rates(ct, sys, RateOrder::first);
}

struct RedfieldRateTable {
    PolaronFrame frame;  // bare eigensystem (η = 1, λ = 0)
    // [u][level]; level 0 → E_+, 1 → E_-
    std::array<std::array<double, 2>, 2> kappa_e{}, kappa_a{};
    double kappa_e_p{0.0}, kappa_a_p{0.0};
    std::array<double, 2> Gamma_e{}, Gamma_a{};  // [0] → +, [1] → -
    std::array<double, 2> Gamma_p{};             // [0]: - → +, [1]: + → -
};

inline RedfieldRateTable redfield_rates(const SystemParams& sys, const BathSet& baths, const Conventions& conv = {}) {
    RedfieldRateTable t;
    BathParams bare = baths.middle;
    bare.coupling = 0.0;
    t.frame = polaron_frame(sys, bare);
    if (!(t.frame.e_minus > 0.0))
        throw RegimeError("Redfield scheme requires E_- > 0 (got " + std::to_string(t.frame.e_minus) + ")");
    const std::array<double, 2> levels{t.frame.e_plus, t.frame.e_minus};
    for (int u = 0; u < 2; ++u)
        for (int lv = 0; lv < 2; ++lv) {
            t.kappa_e[u][lv] = thermal_weight(baths.side(u), levels[lv]);
            t.kappa_a[u][lv] = emission_weight(baths.side(u), levels[lv]);
        }
    const double gap = t.frame.gap();
    t.kappa_e_p = thermal_weight(baths.middle, gap);
    t.kappa_a_p = emission_weight(baths.middle, gap);
    const double c2 = std::pow(std::cos(0.5 * t.frame.theta), 2);
    const double s2 = std::pow(std::sin(0.5 * t.frame.theta), 2);
    t.Gamma_e[0] = 0.5 * (t.kappa_e[0][0] * c2 + t.kappa_e[1][0] * s2);
    t.Gamma_a[0] = 0.5 * (t.kappa_a[0][0] * c2 + t.kappa_a[1][0] * s2);
    t.Gamma_e[1] = 0.5 * (t.kappa_e[0][1] * s2 + t.kappa_e[1][1] * c2);
    t.Gamma_a[1] = 0.5 * (t.kappa_a[0][1] * s2 + t.kappa_a[1][1] * c2);
    const double sin2 = std::pow(std::sin(t.frame.theta), 2);
    const double pf = conv.gamma_p == GammaPFactor::half ? 0.5 : 0.125;
    t.Gamma_p[0] = pf * sin2 * t.kappa_e_p;
    t.Gamma_p[1] = pf * sin2 * t.kappa_a_p;
    return t;
}

} // namespace qtt
