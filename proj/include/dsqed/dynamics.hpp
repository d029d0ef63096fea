#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "dsqed/linalg.hpp"
#include "dsqed/params.hpp"

namespace dsqed {

struct IntegrationError : std::runtime_error {
    double t_reached;
    IntegrationError(const std::string& what, double t)
        : std::runtime_error(what), t_reached(t) {}
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> N1, N2, Pe;
    std::vector<Matrix> states;  // filled only when requested
};

Matrix pure_state(const Vector& ket);

// Density-matrix sanity used by callers and tests: Hermitian to herm_tol,
// unit trace to trace_tol, smallest eigenvalue >= -psd_tol.
void validate_density(const Matrix& rho, double trace_tol = 1e-8,
                      double herm_tol = 1e-10, double psd_tol = 1e-8);

// Integrates vec(rho_dot) = L vec(rho) with an adaptive embedded
// Dormand-Prince 5(4) pair; `tol` is the relative tolerance, the absolute
// one is tol/100. The state is re-Hermitized after every accepted step.
// Observables are sampled exactly at t_grid. Throws IntegrationError on
// step-size underflow.
TimeSeries evolve(const SystemParams& p, const ProbeDrive& drive,
                  const Matrix& rho0, const std::vector<double>& t_grid,
                  double tol = 1e-8, bool keep_states = false);

struct RabiResult {
    TimeSeries series;
    std::vector<double> pe_eff;   // analytic envelope on the same grid
    double max_N1 = 0.0;
    double max_N2 = 0.0;
    double delta2_used = 0.0;
    double horizon = 0.0;
};

// Emitter initially excited, both modes in vacuum, no drive, delta2 resolved
// to resonance. Runs in the exact single-excitation reduced space. The
// horizon defaults to three Rabi periods (3 pi / g_eff) or, for J = 0, to a
// few emitter lifetimes.
RabiResult rabi_experiment(const SystemParams& p, int samples = 601,
                           double tol = 1e-8);

// exp(L*t) by scaling-and-squaring with a diagonal Pade approximant.
// Accurate to ~1e-13 relative for the norms used here; rejects operators
// whose scaled norm exhausts the squaring budget.
Matrix propagator_oracle(const Matrix& l, double t);

// Exact restriction to total excitation <= max_exc. Valid for undriven
// dynamics started inside the subspace: the Hamiltonian conserves the total
// excitation number and every dissipator only lowers it.
struct ReducedSpace {
    int max_exc = 0;
    std::vector<std::array<int, 3>> basis;  // (s, n1, n2)
    Matrix a1, a2, sigma_minus, sigma_plus;
    // Restriction of the undriven Hamiltonian to the subspace. Built from
    // matrix elements directly: products of the projected ladder operators
    // would lose the coupling paths that pass through higher-excitation
    // intermediates.
    Matrix hamiltonian;
    Matrix embed;  // dim_full x dim_red isometry
};

ReducedSpace excitation_truncation(const SystemParams& p, const Matrix& rho0,
                                   const ProbeDrive& drive, int max_exc);

Matrix reduce_state(const ReducedSpace& r, const Matrix& rho_full);
Matrix embed_state(const ReducedSpace& r, const Matrix& rho_red);

// Shared integration core: real expectation values of the given operators,
// sampled at t_grid. observables[k][i] is tr(obs[k] rho(t_i)).
struct GeneratorSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> observables;
    std::vector<Matrix> states;
};

GeneratorSeries evolve_generator(const Matrix& l, const std::vector<Matrix>& obs,
                                 const Matrix& rho0,
                                 const std::vector<double>& t_grid, double tol,
                                 bool keep_states = false);

} // namespace dsqed
