#pragma once

#include <stdexcept>

namespace dsqed {

// All rates and detunings are in units of the emitter-cavity coupling g;
// time is in units of 1/g. The rotating frame is fixed at the emitter
// frequency, so only the detunings delta1 = w1 - we and delta2 = w2 - we
// enter.
struct SystemParams {
    double g = 1.0;        // emitter <-> mode-1 coupling
    double J = 0.0;        // mode-1 <-> mode-2 coupling
    double delta1 = 0.0;
    double delta2 = 0.0;
    double kappa1 = 0.0;   // mode-1 decay
    double kappa2 = 0.0;   // mode-2 decay
    double gamma = 0.0;    // emitter decay
    int n1_cutoff = 2;     // max Fock number kept for mode 1
    int n2_cutoff = 2;     // max Fock number kept for mode 2

    int dim() const { return 2 * (n1_cutoff + 1) * (n2_cutoff + 1); }
    void validate() const;
    bool operator==(const SystemParams&) const = default;
};

enum class DriveTarget {
    mode2,    // probe injected into the auxiliary cavity, eps*(a2 + a2^dag)
    emitter,  // probe on the emitter dipole, eps*(sm + sp)
};

// Weak coherent probe at frequency w, described in the frame rotating at w:
// every excitation-number operator is detuned by -detuning_e and the drive
// term eps*(o + o^dag) is added for the chosen target operator.
struct ProbeDrive {
    double amplitude = 0.0;              // eps; 0 means undriven
    double detuning_e = 0.0;             // Delta_e = w - we
    DriveTarget target = DriveTarget::mode2;

    void validate() const;
    bool operator==(const ProbeDrive&) const = default;
};

const char* to_string(DriveTarget t);

} // namespace dsqed
