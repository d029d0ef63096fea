#include <doctest.h>

#include <random>

#include "dsqed/dynamics.hpp"
#include "dsqed/effective.hpp"
#include "dsqed/hilbert.hpp"

using namespace dsqed;

namespace {

SystemParams set_a() {
    SystemParams p;
    p.g = 1.0;
    p.J = 5.0;
    p.delta1 = 1000.0;
    p.kappa1 = 100.0;
    p.kappa2 = 1e-3;
    p.gamma = 1e-3;
    p.delta2 = 0.0239401496259352;
    return p;
}

Matrix random_hermitian(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = Complex(u(rng), u(rng));
    return hermitize(m);
}

} // namespace

TEST_CASE("fock_annihilation ladder entries") {
    const Matrix a1 = fock_annihilation(1);
    REQUIRE(a1.rows() == 2);
    CHECK(a1(0, 1) == Complex(1.0));
    CHECK(max_abs(a1) == 1.0);

    const Matrix a2 = fock_annihilation(2);
    CHECK(a2(0, 1) == Complex(1.0));
    CHECK(a2(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    for (int cutoff : {1, 2, 5}) {
        const Matrix a = fock_annihilation(cutoff);
        const Matrix n = a.adjoint() * a;
        for (int k = 0; k <= cutoff; ++k)
            CHECK(n(k, k).real() == doctest::Approx(double(k)).epsilon(1e-15));
    }

    CHECK_THROWS_AS(fock_annihilation(0), std::invalid_argument);
}

TEST_CASE("truncated commutator identity [a, a^+] = I - (cutoff+1) P_top") {
    SystemParams p = set_a();
    p.n1_cutoff = 2;
    p.n2_cutoff = 3;
    const CompositeOps ops = composite_operators(p);

    Matrix comm = ops.a1 * ops.a1.adjoint() - ops.a1.adjoint() * ops.a1;
    Matrix expect = ops.identity;
    for (int s = 0; s < 2; ++s)
        for (int n2 = 0; n2 <= p.n2_cutoff; ++n2) {
            const int idx = basis_index(p, s, p.n1_cutoff, n2);
            expect(idx, idx) -= double(p.n1_cutoff + 1);
        }
    // sqrt(n)*sqrt(n) rounds, so "exact" here means one ulp of the integers.
    CHECK(max_abs(comm - expect) < 1e-14);
}

TEST_CASE("two-level algebra and commuting mode operators") {
    SystemParams p = set_a();
    const CompositeOps ops = composite_operators(p);
    CHECK(max_abs(ops.sigma_minus * ops.sigma_plus +
                  ops.sigma_plus * ops.sigma_minus - ops.identity) == 0.0);
    CHECK(max_abs(ops.a1 * ops.a2 - ops.a2 * ops.a1) == 0.0);
    // sigma_z = |e><e| - |g><g| = 2 sp sm - I
    CHECK(max_abs(ops.sigma_z -
                  (2.0 * ops.sigma_plus * ops.sigma_minus - ops.identity)) == 0.0);
}

TEST_CASE("hamiltonian: diagonal limit and the bare coupling element") {
    SystemParams p = set_a();
    SUBCASE("g = J = 0 leaves only detunings on the diagonal") {
        p.g = 0.0;
        p.J = 0.0;
        const Matrix h = build_hamiltonian(p);
        CHECK(max_abs(h - Matrix(h.diagonal().asDiagonal())) == 0.0);
        const int idx = basis_index(p, 0, 1, 2);
        CHECK(h(idx, idx).real() ==
              doctest::Approx(p.delta1 + 2 * p.delta2).epsilon(1e-14));
    }
    SUBCASE("<e,0,0|H|g,1,0> = g") {
        const Matrix h = build_hamiltonian(p);
        CHECK(h(basis_index(p, 1, 0, 0), basis_index(p, 0, 1, 0)) == Complex(1.0));
    }
}

TEST_CASE("hamiltonian is Hermitian, also with a drive") {
    SystemParams p = set_a();
    CHECK(is_hermitian(build_hamiltonian(p), 1e-14));
    ProbeDrive d{0.3, -0.7, DriveTarget::mode2};
    CHECK(is_hermitian(build_hamiltonian(p, d), 1e-14));
    d.target = DriveTarget::emitter;
    CHECK(is_hermitian(build_hamiltonian(p, d), 1e-14));
}

TEST_CASE("undriven H commutes with the total excitation number") {
    SystemParams p = set_a();
    const CompositeOps ops = composite_operators(p);
    const Matrix n_tot = ops.a1.adjoint() * ops.a1 + ops.a2.adjoint() * ops.a2 +
                         ops.sigma_plus * ops.sigma_minus;
    const Matrix h = build_hamiltonian(p);
    const double hnorm = max_abs(h);
    CHECK(max_abs(h * n_tot - n_tot * h) < 1e-12 * hnorm);

    // The drive term breaks the conservation.
    const Matrix hd = build_hamiltonian(p, ProbeDrive{0.5, 0.0, DriveTarget::mode2});
    CHECK(max_abs(hd * n_tot - n_tot * hd) > 0.1);
}

TEST_CASE("probe frame shifts every excitation by -detuning_e") {
    SystemParams p = set_a();
    const double de = 0.37;
    const CompositeOps ops = composite_operators(p);
    const Matrix n_tot = ops.a1.adjoint() * ops.a1 + ops.a2.adjoint() * ops.a2 +
                         ops.sigma_plus * ops.sigma_minus;
    const Matrix h0 = build_hamiltonian(p);
    const Matrix hd = build_hamiltonian(p, ProbeDrive{0.0, de, DriveTarget::mode2});
    CHECK(max_abs(hd - (h0 - de * n_tot)) < 1e-12);
}

TEST_CASE("non-Hermitian Hamiltonian: decay-free limit and trace") {
    SystemParams p = set_a();
    SUBCASE("no decay reduces to H") {
        SystemParams q = p;
        q.kappa1 = q.kappa2 = q.gamma = 0.0;
        CHECK(max_abs(build_nonhermitian_hamiltonian(q) - build_hamiltonian(q)) == 0.0);
    }
    SUBCASE("single-excitation trace has imaginary part -(k1+k2+gamma)/2") {
        const Matrix hnh = build_nonhermitian_hamiltonian(p);
        Complex tr = 0.0;
        for (int i = 0; i < p.dim(); ++i)
            if (total_excitation(p, i) == 1) tr += hnh(i, i);
        CHECK(tr.imag() == doctest::Approx(-50.001).epsilon(1e-12));
    }
}

TEST_CASE("non-Hermitian spectrum only decays") {
    SystemParams p = set_a();
    p.n1_cutoff = 2;
    p.n2_cutoff = 2;
    const Matrix hnh = build_nonhermitian_hamiltonian(p);
    Eigen::ComplexEigenSolver<Matrix> es(hnh, false);
    REQUIRE(es.info() == Eigen::Success);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        CHECK(es.eigenvalues()(i).imag() <= 1e-12);
}

TEST_CASE("liouvillian annihilates the trace and preserves hermiticity") {
    SystemParams p = set_a();
    p.n1_cutoff = 1;
    p.n2_cutoff = 2;
    const Matrix l = build_liouvillian(p, ProbeDrive{0.2, 0.1, DriveTarget::mode2});
    for (int k = 0; k < 8; ++k) {
        Matrix rho = random_hermitian(p.dim(), 100 + unsigned(k));
        rho /= rho.trace();
        const Matrix drho = unvec(l * vec(rho));
        CHECK(std::abs(drho.trace()) < 1e-12 * max_abs(drho) * p.dim());
        CHECK(is_hermitian(drho, 1e-10 * max_abs(drho)));
    }
}

TEST_CASE("liouvillian matches the directly evaluated master-equation RHS") {
    SystemParams p = set_a();
    p.n1_cutoff = 1;
    p.n2_cutoff = 1;
    const ProbeDrive drive{0.15, -0.2, DriveTarget::emitter};
    const CompositeOps ops = composite_operators(p);
    const Matrix h = build_hamiltonian(p, drive);
    const Matrix l = build_liouvillian(p, drive);
    const std::vector<std::pair<double, Matrix>> jumps = {
        {p.kappa1, ops.a1}, {p.kappa2, ops.a2}, {p.gamma, ops.sigma_minus}};
    for (int k = 0; k < 10; ++k) {
        const Matrix rho = random_hermitian(p.dim(), 200 + unsigned(k));
        const Matrix via_l = unvec(l * vec(rho));
        const Matrix direct = master_equation_rhs(h, jumps, rho);
        CHECK(max_abs(via_l - direct) < 1e-10 * std::max(1.0, max_abs(direct)));
    }
}

TEST_CASE("isolated emitter decays exponentially through the liouvillian") {
    SystemParams p;
    p.g = 0.0;
    p.J = 0.0;
    p.gamma = 0.25;
    p.n1_cutoff = 1;
    p.n2_cutoff = 1;
    const CompositeOps ops = composite_operators(p);
    Vector excited = Vector::Zero(p.dim());
    excited(basis_index(p, 1, 0, 0)) = 1.0;
    const Matrix rho0 = pure_state(excited);

    const Matrix l = build_liouvillian(p);
    const Matrix prop = propagator_oracle(l, 3.0);
    const Matrix rho_t = unvec(prop * vec(rho0));
    const double pe = (ops.sigma_plus * ops.sigma_minus * rho_t).trace().real();
    CHECK(pe == doctest::Approx(std::exp(-0.25 * 3.0)).epsilon(1e-10));
}
