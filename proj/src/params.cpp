#include "dsqed/params.hpp"

namespace dsqed {

void SystemParams::validate() const {
    if (kappa1 < 0 || kappa2 < 0 || gamma < 0)
        throw std::invalid_argument("decay rates must be nonnegative");
    if (n1_cutoff < 1 || n2_cutoff < 1)
        throw std::invalid_argument("Fock cutoffs must be at least 1");
}

void ProbeDrive::validate() const {
    if (amplitude < 0)
        throw std::invalid_argument("drive amplitude must be nonnegative");
}

const char* to_string(DriveTarget t) {
    return t == DriveTarget::mode2 ? "mode2" : "emitter";
}

} // namespace dsqed
