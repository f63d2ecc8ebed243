// numerics.hpp — Panelled Gauss-Legendre grids with Filon-type Fourier weights
//
// A PanelGrid partitions an interval into panels, each carrying an n-point
// Gauss-Legendre rule. Plain integrals use the Gauss weights; Fourier integrals
// ∫ f(t) e^{iωt} dt interpolate f by its degree-(n-1) Legendre expansion on each
// panel and integrate the exponential exactly through
//     ∫_{-1}^{1} e^{iκx} P_k(x) dx = 2 i^k j_k(κ),
// so the cost does not grow with |ω|·width.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <span>
#include <stdexcept>
#include <vector>

namespace qtt::numerics {

using Complex = std::complex<double>;

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1), ascending
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(std::size_t n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.weights[0] = 2.0;
        return rule;
    }
    const double dn = static_cast<double>(n);
    // P_n(x) and P_{n-1}(x)
    auto legendre_pair = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double dk = static_cast<double>(k);
            const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, p0};
    };
    for (std::size_t i = 0; i < n / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [pn, pm] = legendre_pair(x);
            const double dp = dn * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [pn, pm] = legendre_pair(x);
        const double dp = dn * (x * pn - pm) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        const auto [pn, pm] = legendre_pair(0.0);
        const double dp = dn * (-pm) / (-1.0);
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }
    return rule;
}

// P_0(x) ... P_{n-1}(x).
inline std::vector<double> legendre_sequence(double x, std::size_t n) {
    std::vector<double> p(n, 0.0);
    if (n > 0) p[0] = 1.0;
    if (n > 1) p[1] = x;
    for (std::size_t k = 2; k < n; ++k) {
        const double dk = static_cast<double>(k);
        p[k] = ((2.0 * dk - 1.0) * x * p[k - 1] - (dk - 1.0) * p[k - 2]) / dk;
    }
    return p;
}

// Spherical Bessel functions j_0(x) ... j_{n-1}(x) for x >= 0.
// Upward recurrence where it is stable (x > n), Miller's backward recurrence otherwise.
inline void spherical_bessel_sequence(double x, std::span<double> out) {
    const std::size_t n = out.size();
    if (n == 0) return;
    x = std::abs(x);
    if (x == 0.0) {
        out[0] = 1.0;
        for (std::size_t k = 1; k < n; ++k) out[k] = 0.0;
        return;
    }
    const double s = std::sin(x), c = std::cos(x);
    const double j0 = x < 1e-4 ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : s / x;
    const double j1 = x < 1e-4 ? x / 3.0 - x * x * x / 30.0 : (s / x - c) / x;
    if (x > static_cast<double>(n)) {
        out[0] = j0;
        if (n > 1) out[1] = j1;
        for (std::size_t k = 1; k + 1 < n; ++k)
            out[k + 1] = (2.0 * static_cast<double>(k) + 1.0) / x * out[k] - out[k - 1];
        return;
    }
    const std::size_t start = n + 20 + static_cast<std::size_t>(std::sqrt(40.0 * static_cast<double>(n) + x));
    double f_next = 0.0, f = 1e-300;
    for (std::size_t k = start; k > 0; --k) {
        // f = f_k, f_next = f_{k+1}; compute f_{k-1}
        const double f_prev = (2.0 * static_cast<double>(k) + 1.0) / x * f - f_next;
        f_next = f;
        f = f_prev;
        const std::size_t km1 = k - 1;
        if (km1 < n) out[km1] = f;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            f_next *= 1e-250;
            for (std::size_t j = km1; j < n; ++j) out[j] *= 1e-250;
        }
    }
    // Normalise with whichever of j0, j1 is better conditioned.
    const double scale = (n > 1 && std::abs(j1) > std::abs(j0)) ? j1 / out[1] : j0 / out[0];
    for (std::size_t k = 0; k < n; ++k) out[k] *= scale;
}

// Legendre-moment Filon rule on the reference panel [-1, 1].
class FilonRule {
public:
    explicit FilonRule(std::size_t n) : n_(n), gauss_(gauss_legendre(n)), coeff_(n * n) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = legendre_sequence(gauss_.nodes[i], n);
            for (std::size_t k = 0; k < n; ++k)
                coeff_[k * n + i] = 0.5 * (2.0 * static_cast<double>(k) + 1.0) * gauss_.weights[i] * p[k];
        }
    }

    std::size_t size() const noexcept { return n_; }
    const GaussRule& gauss() const noexcept { return gauss_; }

    // W_i(κ) with ∫_{-1}^{1} e^{iκx} f(x) dx ≈ Σ_i W_i f(x_i).
    void weights(double kappa, std::span<Complex> w) const {
        std::vector<double> j(n_);
        spherical_bessel_sequence(kappa, j);
        const double sgn = kappa < 0.0 ? -1.0 : 1.0;
        std::vector<Complex> m(n_);
        Complex ik{1.0, 0.0};
        const Complex i_unit{0.0, sgn};
        for (std::size_t k = 0; k < n_; ++k) {
            // j_k is even/odd in κ, i.e. j_k(-κ) = (-1)^k j_k(κ)
            m[k] = 2.0 * ik * j[k];
            ik *= i_unit;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < n_; ++k) acc += m[k] * coeff_[k * n_ + i];
            w[i] = acc;
        }
    }

private:
    std::size_t n_;
    GaussRule gauss_;
    std::vector<double> coeff_;  // (2k+1)/2 w_i P_k(x_i), row-major in k
};

struct Panel {
    double center;
    double half_width;
};

// Panels over an interval plus their flattened Gauss nodes.
class PanelGrid {
public:
    PanelGrid(std::vector<Panel> panels, std::size_t nodes_per_panel)
        : rule_(nodes_per_panel), panels_(std::move(panels)) {
        nodes_.reserve(panels_.size() * rule_.size());
        for (const auto& p : panels_)
            for (double x : rule_.gauss().nodes) nodes_.push_back(p.center + p.half_width * x);
    }

    // Contiguous panels of given widths starting at `start`.
    static PanelGrid from_widths(double start, const std::vector<double>& widths, std::size_t n) {
        std::vector<Panel> panels;
        panels.reserve(widths.size());
        double a = start;
        for (double w : widths) {
            panels.push_back({a + 0.5 * w, 0.5 * w});
            a += w;
        }
        return PanelGrid(std::move(panels), n);
    }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<Panel>& panels() const noexcept { return panels_; }
    std::size_t nodes_per_panel() const noexcept { return rule_.size(); }
    double lower() const { return panels_.front().center - panels_.front().half_width; }
    double upper() const { return panels_.back().center + panels_.back().half_width; }

    template <class T>
    T integrate(std::span<const T> samples) const {
        check(samples.size());
        T acc{};
        const auto& w = rule_.gauss().weights;
        const std::size_t n = rule_.size();
        for (std::size_t p = 0; p < panels_.size(); ++p) {
            T part{};
            for (std::size_t i = 0; i < n; ++i) part += w[i] * samples[p * n + i];
            acc += panels_[p].half_width * part;
        }
        return acc;
    }

    // ∫ e^{iωt} f(t) dt over the grid, for any number of sampled functions at once.
    // `out[s]` receives the transform of `samples[s]`.
    template <class T>
    void fourier_many(double omega, std::span<const std::span<const T>> samples, std::span<Complex> out) const {
        for (const auto& s : samples) check(s.size());
        const std::size_t n = rule_.size();
        std::vector<Complex> w(n);
        for (auto& o : out) o = Complex{0.0, 0.0};
        double last_half = -1.0;
        for (std::size_t p = 0; p < panels_.size(); ++p) {
            const auto& pan = panels_[p];
            if (pan.half_width != last_half) {
                rule_.weights(omega * pan.half_width, w);
                last_half = pan.half_width;
            }
            const Complex phase = pan.half_width * std::polar(1.0, omega * pan.center);
            for (std::size_t s = 0; s < samples.size(); ++s) {
                Complex part{0.0, 0.0};
                const T* f = samples[s].data() + p * n;
                for (std::size_t i = 0; i < n; ++i) part += w[i] * f[i];
                out[s] += phase * part;
            }
        }
    }

    template <class T>
    Complex fourier(double omega, std::span<const T> samples) const {
        Complex out;
        std::span<const T> one[1] = {samples};
        fourier_many<T>(omega, std::span<const std::span<const T>>(one, 1), std::span<Complex>(&out, 1));
        return out;
    }

private:
    void check(std::size_t n) const {
        if (n != nodes_.size()) throw std::invalid_argument("PanelGrid: sample count does not match node count");
    }

    FilonRule rule_;
    std::vector<Panel> panels_;
    std::vector<double> nodes_;
};

} // namespace qtt::numerics
