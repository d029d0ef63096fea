#include "dsqed/hilbert.hpp"

#include <cmath>

namespace dsqed {

int basis_index(const SystemParams& p, int s, int n1, int n2) {
    return (s * (p.n1_cutoff + 1) + n1) * (p.n2_cutoff + 1) + n2;
}

int total_excitation(const SystemParams& p, int index) {
    const int m2 = p.n2_cutoff + 1;
    const int m1 = p.n1_cutoff + 1;
    const int n2 = index % m2;
    const int n1 = (index / m2) % m1;
    const int s = index / (m1 * m2);
    return s + n1 + n2;
}

Matrix fock_annihilation(int cutoff) {
    if (cutoff < 1)
        throw std::invalid_argument("fock_annihilation: cutoff must be >= 1");
    Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

CompositeOps composite_operators(const SystemParams& p) {
    p.validate();
    const int m1 = p.n1_cutoff + 1, m2 = p.n2_cutoff + 1;
    const Matrix i2 = Matrix::Identity(2, 2);
    const Matrix im1 = Matrix::Identity(m1, m1);
    const Matrix im2 = Matrix::Identity(m2, m2);

    Matrix sm2 = Matrix::Zero(2, 2);
    sm2(0, 1) = 1.0;  // |g><e| with g=0, e=1
    Matrix sz2 = Matrix::Zero(2, 2);
    sz2(0, 0) = -1.0;
    sz2(1, 1) = 1.0;

    CompositeOps ops;
    ops.dim = p.dim();
    ops.a1 = kron(i2, kron(fock_annihilation(p.n1_cutoff), im2));
    ops.a2 = kron(i2, kron(im1, fock_annihilation(p.n2_cutoff)));
    ops.sigma_minus = kron(sm2, kron(im1, im2));
    ops.sigma_plus = ops.sigma_minus.adjoint();
    ops.sigma_z = kron(sz2, kron(im1, im2));
    ops.identity = Matrix::Identity(ops.dim, ops.dim);
    return ops;
}

namespace {
const Matrix& drive_operator(const CompositeOps& ops, DriveTarget t) {
    return t == DriveTarget::mode2 ? ops.a2 : ops.sigma_minus;
}
} // namespace

Matrix build_hamiltonian(const SystemParams& p, const ProbeDrive& drive) {
    p.validate();
    drive.validate();
    const CompositeOps ops = composite_operators(p);
    const double de = drive.detuning_e;
    Matrix h = (p.delta1 - de) * (ops.a1.adjoint() * ops.a1)
             + (p.delta2 - de) * (ops.a2.adjoint() * ops.a2)
             - de * (ops.sigma_plus * ops.sigma_minus)
             + p.g * (ops.a1.adjoint() * ops.sigma_minus + ops.a1 * ops.sigma_plus)
             + p.J * (ops.a1.adjoint() * ops.a2 + ops.a2.adjoint() * ops.a1);
    if (drive.amplitude != 0.0) {
        const Matrix& o = drive_operator(ops, drive.target);
        h += drive.amplitude * (o + o.adjoint());
    }
    return h;
}

Matrix build_nonhermitian_hamiltonian(const SystemParams& p) {
    const CompositeOps ops = composite_operators(p);
    Matrix h = build_hamiltonian(p);
    h -= Complex(0, 0.5) * (p.kappa1 * (ops.a1.adjoint() * ops.a1)
                          + p.kappa2 * (ops.a2.adjoint() * ops.a2)
                          + p.gamma * (ops.sigma_plus * ops.sigma_minus));
    return h;
}

Matrix lindblad_generator(const Matrix& h,
                          const std::vector<std::pair<double, Matrix>>& jumps) {
    const Eigen::Index d = h.rows();
    const Matrix id = Matrix::Identity(d, d);
    Matrix l = Complex(0, -1) * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& [rate, o] : jumps) {
        if (rate == 0.0) continue;
        const Matrix oo = o.adjoint() * o;
        l += rate * (kron(o.conjugate(), o)
                     - 0.5 * (kron(id, oo) + kron(oo.transpose(), id)));
    }
    return l;
}

Matrix build_liouvillian(const SystemParams& p, const ProbeDrive& drive) {
    const CompositeOps ops = composite_operators(p);
    const Matrix h = build_hamiltonian(p, drive);
    return lindblad_generator(h, {{p.kappa1, ops.a1},
                                  {p.kappa2, ops.a2},
                                  {p.gamma, ops.sigma_minus}});
}

Matrix master_equation_rhs(const Matrix& h,
                           const std::vector<std::pair<double, Matrix>>& jumps,
                           const Matrix& rho) {
    Matrix out = Complex(0, 1) * (rho * h - h * rho);
    for (const auto& [rate, o] : jumps) {
        if (rate == 0.0) continue;
        const Matrix oo = o.adjoint() * o;
        out += rate * (o * rho * o.adjoint() - 0.5 * (oo * rho + rho * oo));
    }
    return out;
}

} // namespace dsqed
