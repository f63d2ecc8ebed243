// solvers.hpp — Steady states and heat currents for the PTRE, NIBA and Redfield schemes
//
// The PTRE generator acts on ρ in the dressed eigenbasis (|+⟩, |-⟩, |0⟩). Only the
// block [ρ_{++}, ρ_{--}, ρ_{00}, ρ_{+-}, ρ_{-+}] is kept; the ρ_{0±} coherences decouple.
// Sign convention: J_u > 0 is energy flowing into bath u, and J_m = -J_l - J_r.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "qtt/errors.hpp"
#include "qtt/model.hpp"
#include "qtt/rates.hpp"

namespace qtt {

using Matrix3c = Eigen::Matrix<Complex, 3, 3>;
using Matrix5c = Eigen::Matrix<Complex, 5, 5>;
using Vector5c = Eigen::Matrix<Complex, 5, 1>;

struct DensityVector {
    Vector5c rho;  // [ρ_{++}, ρ_{--}, ρ_{00}, ρ_{+-}, ρ_{-+}]

    double trace() const { return (rho(0) + rho(1) + rho(2)).real(); }
    double min_population() const { return std::min({rho(0).real(), rho(1).real(), rho(2).real()}); }
};

// Base generator (moment 0) or the counting derivative ∂L/∂(iχ_u) at χ = 0 (moment 1, bath u).
struct Generator {
    Matrix5c matrix{Matrix5c::Zero()};
    int bath{-1};  // -1 for the base generator, 0/1 for the left/right counting derivative
};

struct CurrentTriple {
    double J_l{0.0};
    double J_r{0.0};
    double J_m{0.0};
};

inline CurrentTriple make_currents(double J_l, double J_r) { return {J_l, J_r, -J_l - J_r}; }

namespace detail {

// ρ index pairs for the kept block; the 3×3 matrix is flattened row-major.
inline constexpr std::array<int, 5> kept_index{0 * 3 + 0, 1 * 3 + 1, 2 * 3 + 2, 0 * 3 + 1, 1 * 3 + 0};

// Operators in the eigenbasis (+, -, 0).
struct EigenOperators {
    Matrix3c sigma_x, sigma_y;
    std::array<Matrix3c, 2> S;  // S_u = |0⟩⟨u|, u = l, r
};

inline EigenOperators eigen_operators(double theta) {
    EigenOperators op;
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    const Complex I{0.0, 1.0};
    op.sigma_x = Matrix3c::Zero();
    op.sigma_x(0, 0) = std::sin(theta);
    op.sigma_x(1, 1) = -std::sin(theta);
    op.sigma_x(0, 1) = op.sigma_x(1, 0) = std::cos(theta);
    op.sigma_y = Matrix3c::Zero();
    op.sigma_y(0, 1) = -I;
    op.sigma_y(1, 0) = I;
    for (auto& m : op.S) m = Matrix3c::Zero();
    // ⟨l|+⟩ = cos(θ/2), ⟨l|-⟩ = -sin(θ/2), ⟨r|+⟩ = sin(θ/2), ⟨r|-⟩ = cos(θ/2)
    op.S[0](2, 0) = c;
    op.S[0](2, 1) = -s;
    op.S[1](2, 0) = s;
    op.S[1](2, 1) = c;
    return op;
}

// γ_α(E_j - E_i) looked up from the table at ω ∈ {0, +Δ_E, -Δ_E}.
inline Complex gamma_lookup(const std::array<Complex, 3>& g, int i, int j) {
    if (i == j || i == 2 || j == 2) return g[0];
    // i = +, j = -: E_- - E_+ = -Δ_E
    return (i == 0) ? g[2] : g[1];
}

struct DissipatorParts {
    Matrix3c Lx, Ly;                         // Λ_x, Λ_y
    std::array<Matrix3c, 2> A_plus, A_minus;  // moment 0
    std::array<Matrix3c, 2> B_plus, B_minus;  // moment 1
};

inline DissipatorParts dissipator_parts(const PTRERateTable& t, const EigenOperators& op) {
    DissipatorParts d;
    d.Lx = Matrix3c::Zero();
    d.Ly = Matrix3c::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (op.sigma_x(i, j) != 0.0) d.Lx(i, j) = gamma_lookup(t.gamma_x, i, j) * op.sigma_x(i, j);
            if (op.sigma_y(i, j) != 0.0) d.Ly(i, j) = gamma_lookup(t.gamma_y, i, j) * op.sigma_y(i, j);
        }
    for (int u = 0; u < 2; ++u) {
        const Matrix3c& S = op.S[u];
        const Matrix3c Sd = S.adjoint();
        for (auto* m : {&d.A_plus[u], &d.A_minus[u], &d.B_plus[u], &d.B_minus[u]}) *m = Matrix3c::Zero();
        for (int lv = 0; lv < 2; ++lv) {
            d.A_minus[u](2, lv) = t.k(u, Sign::minus, lv, 0) * S(2, lv);
            d.B_minus[u](2, lv) = t.k(u, Sign::minus, lv, 1) * S(2, lv);
            d.A_plus[u](lv, 2) = t.k(u, Sign::plus, lv, 0) * Sd(lv, 2);
            d.B_plus[u](lv, 2) = t.k(u, Sign::plus, lv, 1) * Sd(lv, 2);
        }
    }
    return d;
}

inline Matrix3c apply_base(const DissipatorParts& d, const EigenOperators& op, const Matrix3c& H, const Matrix3c& rho) {
    const Complex I{0.0, 1.0};
    Matrix3c out = -I * (H * rho - rho * H);
    Matrix3c m = d.Lx * rho * op.sigma_x - op.sigma_x * d.Lx * rho + d.Ly * rho * op.sigma_y - op.sigma_y * d.Ly * rho;
    for (int u = 0; u < 2; ++u) {
        const Matrix3c& S = op.S[u];
        const Matrix3c Sd = S.adjoint();
        m += d.A_minus[u] * rho * Sd + d.A_plus[u] * rho * S - S * d.A_plus[u] * rho - Sd * d.A_minus[u] * rho;
    }
    out += m + m.adjoint();
    return out;
}

inline Matrix3c apply_counting(const DissipatorParts& d, const EigenOperators& op, int u, const Matrix3c& rho) {
    const Matrix3c& S = op.S[u];
    const Matrix3c Sd = S.adjoint();
    Matrix3c m = d.B_minus[u] * rho * Sd + d.B_plus[u] * rho * S;
    return m + m.adjoint();
}

template <class Apply>
Matrix5c superoperator(Apply&& apply) {
    // The superoperator maps ρ to Lρ linearly; "+ H.c." makes it real-linear only, so columns
    // come from Hermitian probes: E_ii, (E_ij + E_ji), i(E_ij - E_ji).
    Eigen::Matrix<Complex, 9, 9> L = Eigen::Matrix<Complex, 9, 9>::Zero();
    const Complex I{0.0, 1.0};
    auto flat = [](const Matrix3c& m) {
        Eigen::Matrix<Complex, 9, 1> v;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v(3 * i + j) = m(i, j);
        return v;
    };
    for (int i = 0; i < 3; ++i) {
        Matrix3c e = Matrix3c::Zero();
        e(i, i) = 1.0;
        L.col(3 * i + i) = flat(apply(e));
        for (int j = i + 1; j < 3; ++j) {
            Matrix3c sym = Matrix3c::Zero(), asym = Matrix3c::Zero();
            sym(i, j) = sym(j, i) = 1.0;
            asym(i, j) = I;
            asym(j, i) = -I;
            const auto ls = flat(apply(sym));
            const auto la = flat(apply(asym));
            // E_ij = (sym - i·asym)/2, E_ji = (sym + i·asym)/2
            L.col(3 * i + j) = 0.5 * (ls - I * la);
            L.col(3 * j + i) = 0.5 * (ls + I * la);
        }
    }
    Matrix5c out;
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) out(r, c) = L(kept_index[r], kept_index[c]);
    return out;
}

} // namespace detail

// Base generator L₀ (bath = -1) or counting derivative for bath u ∈ {0, 1}.
inline Generator build_ptre_generator(const PTRERateTable& t, int bath = -1) {
    if (bath < -1 || bath > 1) throw std::invalid_argument("build_ptre_generator: bath must be -1, 0 or 1");
    const auto op = detail::eigen_operators(t.frame.theta);
    const auto d = detail::dissipator_parts(t, op);
    Matrix3c H = Matrix3c::Zero();
    H(0, 0) = t.frame.e_plus;
    H(1, 1) = t.frame.e_minus;
    Generator g;
    g.bath = bath;
    if (bath < 0) g.matrix = detail::superoperator([&](const Matrix3c& r) { return detail::apply_base(d, op, H, r); });
    else g.matrix = detail::superoperator([&](const Matrix3c& r) { return detail::apply_counting(d, op, bath, r); });
    return g;
}

struct SteadyStateOptions {
    double null_tol{1e-13};      // second-smallest singular value / largest must exceed this
    double residual_tol{1e-10};  // relative to the generator norm
};

inline DensityVector steady_state(const Generator& gen, const SteadyStateOptions& opt = {}) {
    if (gen.bath != -1) throw std::invalid_argument("steady_state: requires the base generator");
    const Matrix5c& L = gen.matrix;
    Eigen::JacobiSVD<Matrix5c> svd(L);
    const auto sv = svd.singularValues();  // descending
    const double scale = sv(0);
    if (!(scale > 0.0)) throw DegenerateSteadyState("steady_state: generator is zero");
    if (sv(3) <= opt.null_tol * scale)
        throw DegenerateSteadyState("steady_state: null space dimension > 1 (sigma_4/sigma_1 = " +
                                    std::to_string(sv(3) / scale) + ")");
    Matrix5c M = L;
    Vector5c rhs = Vector5c::Zero();
    // replace the population row with the weakest coupling by the trace condition
    M.row(2) << 1.0, 1.0, 1.0, 0.0, 0.0;
    rhs(2) = 1.0;
    DensityVector d;
    d.rho = M.fullPivLu().solve(rhs);
    const double residual = (L * d.rho).norm();
    if (!std::isfinite(residual) || residual > opt.residual_tol * scale)
        throw NumericsError("steady_state: residual " + std::to_string(residual / scale) + " exceeds tolerance");
    return d;
}

inline double steady_state_residual(const Generator& gen, const DensityVector& d) {
    return (gen.matrix * d.rho).norm();
}

struct PTRESolution {
    DensityVector state;
    CurrentTriple currents;
    double residual{0.0};  // |L₀ρ| relative to |L₀|
};

inline PTRESolution ptre_solve(const PTRERateTable& t, const SteadyStateOptions& opt = {}) {
    PTRESolution s;
    const auto L0 = build_ptre_generator(t);
    s.state = steady_state(L0, opt);
    s.residual = steady_state_residual(L0, s.state) / L0.matrix.norm();
    const Eigen::Matrix<Complex, 1, 5> tr{1.0, 1.0, 1.0, 0.0, 0.0};
    std::array<double, 2> J{};
    for (int u = 0; u < 2; ++u) {
        const auto D = build_ptre_generator(t, u);
        J[u] = (tr * D.matrix * s.state.rho)(0).real();
    }
    s.currents = make_currents(J[0], J[1]);
    return s;
}

inline CurrentTriple ptre_currents(const PTRERateTable& t) { return ptre_solve(t).currents; }

struct NIBASolution {
    double P_0{0.0}, P_l{0.0}, P_r{0.0};
    double A{0.0};
    CurrentTriple currents;
    double J_m_a{0.0};      // cyclic component
    double J_m_b{0.0};      // local l ↔ 0 component
    double J_r_approx{0.0};  // dominant cyclic term of J_r
};

inline NIBASolution niba_currents(const NIBARateTable& t) {
    const double Gmp = t.G_m_plus, Gmm = t.G_m_minus;
    const double Glp = t.G_plus[0], Glm = t.G_minus[0];
    const double Grp = t.G_plus[1], Grm = t.G_minus[1];
    NIBASolution s;
    s.A = (Gmp + Gmm) * (Glp + Grp) + Gmp * Grm + Gmm * Glm + Glm * Grp + Grm * (Glp + Glm);
    if (!(s.A > 0.0) || !std::isfinite(s.A)) throw DegenerateSteadyState("NIBA: normalisation A is not positive");
    s.P_0 = (Gmp * Grm + Gmm * Glm + Glm * Grm) / s.A;
    s.P_l = (Gmm * Glp + Gmm * Grp + Glp * Grm) / s.A;
    s.P_r = (Gmp * Glp + Gmp * Grp + Glm * Grp) / s.A;
    const double J_l = Glp * t.omega_plus[0] * s.P_0 - Glm * t.omega_minus[0] * s.P_l;
    const double J_r = Grp * t.omega_plus[1] * s.P_0 - Grm * t.omega_minus[1] * s.P_r;
    s.currents = make_currents(J_l, J_r);
    s.J_m_a = Gmm * Glm * Grp * (t.omega_minus[0] - t.omega_plus[1]) / s.A;
    s.J_m_b = Gmm * Glm * Glp * (t.omega_minus[0] - t.omega_plus[0]) / s.A;
    s.J_r_approx = Glm * Gmm * Grp * t.omega_plus[1] / s.A;
    return s;
}

struct RedfieldSolution {
    double P_plus{0.0}, P_minus{0.0}, P_0{0.0};
    double B{0.0};
    CurrentTriple currents;
};

inline RedfieldSolution redfield_currents(const RedfieldRateTable& t) {
    const double ep = t.Gamma_e[0], em = t.Gamma_e[1];
    const double ap = t.Gamma_a[0], am = t.Gamma_a[1];
    const double pp = t.Gamma_p[0], pm = t.Gamma_p[1];
    const double es = ep + em;
    const double Xp = ep * am + es * pp;
    const double Xm = ap * em + es * pm;
    RedfieldSolution s;
    s.B = (ap + es) * Xp + (am + es) * Xm;
    if (!(s.B > 0.0) || !std::isfinite(s.B)) throw DegenerateSteadyState("Redfield: normalisation B is not positive");
    s.P_plus = es * Xp / s.B;
    s.P_minus = es * Xm / s.B;
    s.P_0 = (ap * Xp + am * Xm) / s.B;
    const double Ep = t.frame.e_plus, Em = t.frame.e_minus;
    const double c2 = std::pow(std::cos(0.5 * t.frame.theta), 2);
    const double s2 = std::pow(std::sin(0.5 * t.frame.theta), 2);
    const double J_l = 0.5 * c2 * t.kappa_a[0][0] * Ep * s.P_plus + 0.5 * s2 * t.kappa_a[0][1] * Em * s.P_minus -
                       (0.5 * c2 * t.kappa_e[0][0] * Ep + 0.5 * s2 * t.kappa_e[0][1] * Em) * s.P_0;
    const double J_r = 0.5 * s2 * t.kappa_a[1][0] * Ep * s.P_plus + 0.5 * c2 * t.kappa_a[1][1] * Em * s.P_minus -
                       (0.5 * s2 * t.kappa_e[1][0] * Ep + 0.5 * c2 * t.kappa_e[1][1] * Em) * s.P_0;
    s.currents = make_currents(J_l, J_r);
    return s;
}

// Middle-bath current from the closed form, for cross-checking conservation.
inline double redfield_middle_current(const RedfieldRateTable& t, const RedfieldSolution& s) {
    return t.frame.gap() * (t.Gamma_p[1] * s.P_plus - t.Gamma_p[0] * s.P_minus);
}

// Two-terminal NIBA current J_{l-m} (right bath detached).
inline double niba_two_terminal(const NIBARateTable& t) {
    const double Ap = (t.G_m_plus + t.G_m_minus) * t.G_plus[0] + t.G_m_minus * t.G_minus[0];
    if (!(Ap > 0.0)) throw DegenerateSteadyState("NIBA two-terminal: normalisation is not positive");
    return t.G_m_minus * t.G_plus[0] * t.G_minus[0] * (t.omega_minus[0] - t.omega_plus[0]) / Ap;
}

} // namespace qtt
