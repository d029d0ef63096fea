#pragma once

#include <vector>

#include "dsqed/linalg.hpp"
#include "dsqed/params.hpp"

namespace dsqed {

// Basis convention for the composite space: |s> (x) |n1> (x) |n2> with the
// emitter slowest (g=0, e=1) and mode 2 fastest; flat index
//   s*(n1_cutoff+1)*(n2_cutoff+1) + n1*(n2_cutoff+1) + n2.
int basis_index(const SystemParams& p, int s, int n1, int n2);
int total_excitation(const SystemParams& p, int index);

// Single-mode bosonic annihilation operator on a truncated Fock space,
// <n-1|a|n> = sqrt(n). cutoff >= 1.
Matrix fock_annihilation(int cutoff);

struct CompositeOps {
    int dim = 0;
    Matrix a1, a2, sigma_minus, sigma_plus, sigma_z, identity;
};

CompositeOps composite_operators(const SystemParams& p);

// H = (d1-de) a1^+a1 + (d2-de) a2^+a2 - de sp sm
//     + g (a1^+ sm + a1 sp) + J (a1^+ a2 + a2^+ a1) + eps (o + o^+).
// With amplitude = 0 and detuning_e = 0 this is the bare Hamiltonian in the
// emitter frame.
Matrix build_hamiltonian(const SystemParams& p, const ProbeDrive& drive = {});

// H_nh = H - (i/2)(kappa1 a1^+a1 + kappa2 a2^+a2 + gamma sp sm), undriven.
Matrix build_nonhermitian_hamiltonian(const SystemParams& p);

// Lindblad generator acting on column-stacked density matrices:
// vec(rho_dot) = L vec(rho) with
//   L = -i(I (x) H - H^T (x) I)
//       + sum_k kappa_k [conj(o_k) (x) o_k
//                        - (I (x) o_k^+o_k + (o_k^+o_k)^T (x) I)/2].
Matrix build_liouvillian(const SystemParams& p, const ProbeDrive& drive = {});

// Same generator from explicit parts; jumps are (rate, operator) pairs.
Matrix lindblad_generator(const Matrix& h,
                          const std::vector<std::pair<double, Matrix>>& jumps);

// Direct evaluation of the master-equation right-hand side
// i[rho,H] + sum_k kappa_k D[o_k] rho, without any vectorization.
Matrix master_equation_rhs(const Matrix& h,
                           const std::vector<std::pair<double, Matrix>>& jumps,
                           const Matrix& rho);

} // namespace dsqed
