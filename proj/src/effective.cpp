#include "dsqed/effective.hpp"

#include <cmath>

namespace dsqed {

EffectiveParams effective_params(const SystemParams& p) {
    p.validate();
    const double d2 = p.delta1 * p.delta1 + 0.25 * p.kappa1 * p.kappa1;
    if (d2 <= 0.0)
        throw std::invalid_argument(
            "effective_params: delta1 and kappa1 cannot both vanish");
    const double denom = std::sqrt(d2);
    EffectiveParams e;
    e.alpha = p.g / denom;
    e.beta = p.J / denom;
    e.g_eff = e.beta * p.g;
    e.delta_eff = p.delta2 + (e.alpha * e.alpha - e.beta * e.beta) * p.delta1;
    e.kappa_eff = p.kappa2 + e.beta * e.beta * p.kappa1;
    e.gamma_eff = p.gamma + e.alpha * e.alpha * p.kappa1;
    e.shift_e = -e.alpha * e.alpha * p.delta1;
    e.shift_2 = -e.beta * e.beta * p.delta1;
    return e;
}

double resonance_delta2(const SystemParams& p) {
    const EffectiveParams e = effective_params(p);
    return (e.beta * e.beta - e.alpha * e.alpha) * p.delta1;
}

CouplingRatios coupling_ratios(const SystemParams& p) {
    const EffectiveParams e = effective_params(p);
    if (e.kappa_eff <= 0.0 || e.gamma_eff <= 0.0)
        throw std::invalid_argument("coupling_ratios: effective decay vanishes");
    CouplingRatios r;
    r.g_over_kappa = e.g_eff / e.kappa_eff;
    r.g_over_gamma = e.g_eff / e.gamma_eff;
    r.cooperativity = e.g_eff * e.g_eff / (e.kappa_eff * e.gamma_eff);
    return r;
}

OptimalBeta optimal_beta(double g, double kappa1, double kappa2) {
    if (kappa1 <= 0.0 || kappa2 <= 0.0)
        throw std::invalid_argument("optimal_beta: decay rates must be positive");
    OptimalBeta ob;
    ob.beta_opt = std::sqrt(kappa2 / kappa1);
    ob.ratio_max = g / (2.0 * std::sqrt(kappa1 * kappa2));
    ob.strong_coupling = kappa2 < g * g / (4.0 * kappa1);
    return ob;
}

double effective_rabi_pe(double t, const EffectiveParams& eff) {
    const double c = std::cos(eff.g_eff * t);
    return std::exp(-0.5 * (eff.kappa_eff + eff.gamma_eff) * t) * c * c;
}

Eigen::Matrix2cd effective_single_excitation_matrix(const EffectiveParams& eff,
                                                    double detuning_e) {
    Eigen::Matrix2cd m;
    m(0, 0) = Complex(eff.shift_e - detuning_e, -0.5 * eff.gamma_eff);
    m(1, 1) = Complex(eff.shift_e + eff.delta_eff - detuning_e, -0.5 * eff.kappa_eff);
    m(0, 1) = eff.g_eff;
    m(1, 0) = eff.g_eff;
    return m;
}

ScanResult effective_spectrum(const EffectiveParams& eff,
                              const std::vector<double>& omega_grid) {
    if (omega_grid.empty())
        throw std::invalid_argument("effective_spectrum: empty grid");
    // Linear response of the emitter amplitude to a weak drive entering
    // through the mode column: |[(M - w)^-1]_{e,2}|^2 = g_eff^2 / |det|^2.
    std::vector<double> s(omega_grid.size());
    for (size_t i = 0; i < omega_grid.size(); ++i) {
        const Eigen::Matrix2cd m = effective_single_excitation_matrix(eff, omega_grid[i]);
        if (eff.g_eff == 0.0) {
            // Decoupled limit: only the bare emitter line survives.
            const double ae = std::abs(m(0, 0));
            s[i] = 1.0 / (ae * ae);
        } else {
            const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
            const double ad = std::abs(det);
            s[i] = eff.g_eff * eff.g_eff / (ad * ad);
        }
    }
    double peak = 0.0;
    for (double v : s) peak = std::max(peak, v);
    if (peak > 0.0)
        for (double& v : s) v /= peak;

    ScanResult out;
    out.abscissa_name = "detuning_e";
    out.abscissa = omega_grid;
    out.add_column("spectrum", std::move(s));
    out.validate();
    return out;
}

} // namespace dsqed
