#pragma once

#include <stdexcept>

#include "dsqed/linalg.hpp"
#include "dsqed/params.hpp"
#include "dsqed/scan.hpp"

namespace dsqed {

struct SteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stationary state of the generator: the null vector of L obtained by
// inverse iteration (the smallest-singular-direction of L), Hermitized,
// checked positive and trace-normalized. Throws SteadyStateError when the
// kernel is degenerate or the candidate is not a state. The residual
// ||L vec(rho)|| < residual_tol * ||L|| is enforced.
Matrix steady_state(const Matrix& l, double residual_tol = 1e-10);

// <a^+a^+aa> / <a^+a>^2 on rho; throws std::domain_error when <a^+a> <= 1e-12.
double g2_zero(const Matrix& rho, const Matrix& a);

// g2(0) of mode a2 against the probe detuning. Computed at the cutoffs in p
// and re-computed one Fock level lower; `converged` flags points where the
// two agree within 5%. Per-point solver failures yield NaN rows flagged
// not-ok instead of aborting the scan.
// Columns: g2, g2_coarse, converged, ok, n2.
ScanResult g2_scan(const SystemParams& p, double eps,
                   const std::vector<double>& delta_e_grid,
                   DriveTarget target);

// Steady-state emitter excitation <sp sm> against the probe detuning with the
// probe injected into mode a2, normalized to unit maximum over the grid.
// Columns: spectrum, raw.
ScanResult excitation_spectrum(const SystemParams& p, double eps,
                               const std::vector<double>& delta_e_grid);

} // namespace dsqed
