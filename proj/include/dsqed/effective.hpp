#pragma once

#include "dsqed/linalg.hpp"
#include "dsqed/params.hpp"
#include "dsqed/scan.hpp"

namespace dsqed {

// Parameters of the dark-state model obtained by eliminating the lossy
// mode a1: an emitter coupled directly to mode a2 with coupling g_eff,
// detuning delta_eff and decay rates kappa_eff (mode) and gamma_eff
// (emitter). The admixture amplitudes are
//   alpha = g / sqrt(delta1^2 + kappa1^2/4),
//   beta  = J / sqrt(delta1^2 + kappa1^2/4),
// and the levels |e> and |0,1> are shifted by -alpha^2*delta1 and
// -beta^2*delta1 respectively.
struct EffectiveParams {
    double alpha = 0.0;
    double beta = 0.0;
    double g_eff = 0.0;
    double delta_eff = 0.0;
    double kappa_eff = 0.0;
    double gamma_eff = 0.0;
    double shift_e = 0.0;
    double shift_2 = 0.0;
};

EffectiveParams effective_params(const SystemParams& p);

// The delta2 that makes delta_eff vanish: (beta^2 - alpha^2) * delta1.
double resonance_delta2(const SystemParams& p);

struct CouplingRatios {
    double g_over_kappa = 0.0;
    double g_over_gamma = 0.0;
    double cooperativity = 0.0;  // g_eff^2 / (kappa_eff * gamma_eff)
};

CouplingRatios coupling_ratios(const SystemParams& p);

struct OptimalBeta {
    double beta_opt = 0.0;    // sqrt(kappa2/kappa1)
    double ratio_max = 0.0;   // g / (2 sqrt(kappa1*kappa2))
    bool strong_coupling = false;  // kappa2 < g^2/(4 kappa1)
};

OptimalBeta optimal_beta(double g, double kappa1, double kappa2);

// Resonant vacuum-Rabi envelope of the effective model,
// exp(-(kappa_eff+gamma_eff) t / 2) * cos^2(g_eff t). Valid at delta_eff = 0.
double effective_rabi_pe(double t, const EffectiveParams& eff);

// Non-Hermitian single-excitation matrix of the effective model in the probe
// frame, basis (|e,0>, |g,1>).
Eigen::Matrix2cd effective_single_excitation_matrix(const EffectiveParams& eff,
                                                    double detuning_e = 0.0);

// Weak-probe emitter excitation spectrum of the effective model, normalized
// to unit maximum over the grid.
ScanResult effective_spectrum(const EffectiveParams& eff,
                              const std::vector<double>& omega_grid);

} // namespace dsqed
