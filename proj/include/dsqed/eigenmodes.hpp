#pragma once

#include <array>
#include <string>
#include <vector>

#include "dsqed/linalg.hpp"
#include "dsqed/params.hpp"
#include "dsqed/scan.hpp"

namespace dsqed {

// Block of the non-Hermitian Hamiltonian restricted to a fixed total
// excitation number. Basis kets are (s, n1, n2) tuples ordered emitter-excited
// first, then by decreasing n1:
//   n_exc = 1: (e,0,0), (g,1,0), (g,0,1)
//   n_exc = 2: (e,1,0), (e,0,1), (g,2,0), (g,1,1), (g,0,2)
struct ExcitationSubspace {
    int n_exc = 0;
    std::vector<std::array<int, 3>> basis;
    Matrix matrix;
};

ExcitationSubspace excitation_block(const SystemParams& p, int n_exc);

struct EigenBranch {
    std::string label;     // "dark-minus", "dark-plus", "bright", ...
    double energy = 0.0;   // Re(eigenvalue)
    double linewidth = 0.0;  // -2 Im(eigenvalue)
    Complex value;
    Vector vector;         // unit-norm right eigenvector
};

// All eigenpairs of the block; throws on solver failure and when the
// eigenvalue sum disagrees with the matrix trace.
std::vector<EigenBranch> eigendecompose(const ExcitationSubspace& sub);

struct DarkDoublet {
    EigenBranch lower;   // smaller real part
    EigenBranch upper;
    double splitting = 0.0;
    bool adiabatic_regime = true;  // false flags delta1 < 5*kappa1
};

// The two eigenbranches with the smallest linewidths (ties broken by the
// smaller weight on states with n1 > 0), ordered by energy.
DarkDoublet dark_doublet(const SystemParams& p, int n_exc);

// Dark-doublet energies/linewidths against delta2 with branch identity
// maintained across the scan by maximal eigenvector overlap. Throws if the
// overlap between neighbouring points drops below 0.5 (grid too coarse).
ScanResult avoided_crossing_scan(const SystemParams& p,
                                 const std::vector<double>& delta2_grid);

// Exact single-excitation doublet versus the effective prediction
// shift_e +- g_eff as kappa1 varies. delta1 and J are held at their values
// in `base`; delta2 is re-resolved to resonance at every point.
ScanResult effective_agreement_scan(const SystemParams& base,
                                    const std::vector<double>& kappa1_grid);

// Closed-form roots of det(m - x I) = 0 for a 3x3 complex matrix; used as an
// independent cross-check of the dense solver.
std::array<Complex, 3> cubic_eigenvalues(const Eigen::Matrix3cd& m);

} // namespace dsqed
