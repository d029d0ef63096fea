#include "dsqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dsqed/effective.hpp"
#include "dsqed/hilbert.hpp"

namespace dsqed {

Matrix pure_state(const Vector& ket) {
    Vector k = ket / ket.norm();
    return k * k.adjoint();
}

void validate_density(const Matrix& rho, double trace_tol, double herm_tol,
                      double psd_tol) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("density matrix must be square");
    if (std::abs(rho.trace() - Complex(1.0)) > trace_tol)
        throw std::invalid_argument("density matrix trace differs from 1");
    if (!is_hermitian(rho, herm_tol))
        throw std::invalid_argument("density matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
        throw std::invalid_argument("density matrix not positive semidefinite");
}

namespace {

// Dormand-Prince 5(4) tableau (the system is autonomous, so the nodes are
// not needed).
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights equal the last A row; error weights are b5 - b4.
constexpr double kE[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

struct Dopri5 {
    const Matrix& l;
    double rtol, atol;
    std::array<Vector, 7> k;

    explicit Dopri5(const Matrix& gen, double rt, double at)
        : l(gen), rtol(rt), atol(at) {}

    // One controlled step from (t, y); h is updated in place. Returns the
    // accepted step size actually taken.
    double step(double& t, Vector& y, double& h, double t_limit) {
        const auto n = y.size();
        Vector ytmp(n), ynew(n), yerr(n);
        matvec(l, y, k[0]);
        for (;;) {
            if (t + h > t_limit) h = t_limit - t;
            for (int s = 1; s < 7; ++s) {
                ytmp = y;
                for (int j = 0; j < s; ++j)
                    if (kA[s][j] != 0.0) ytmp += (h * kA[s][j]) * k[static_cast<size_t>(j)];
                if (s < 6) {
                    matvec(l, ytmp, k[static_cast<size_t>(s)]);
                } else {
                    ynew = ytmp;  // b == a[6][:], FSAL
                    matvec(l, ynew, k[6]);
                }
            }
            yerr.setZero();
            for (int s = 0; s < 7; ++s)
                if (kE[s] != 0.0) yerr += (h * kE[s]) * k[static_cast<size_t>(s)];

            double err = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double sc =
                    atol + rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
                const double e = std::abs(yerr(i)) / sc;
                err += e * e;
            }
            err = std::sqrt(err / double(n));

            const double h_taken = h;
            const double factor =
                std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                t += h_taken;
                y = ynew;
                h = h_taken * factor;
                return h_taken;
            }
            h = h_taken * factor;
            if (h < 1e-14 * std::max(1.0, std::abs(t)))
                throw IntegrationError("step size underflow", t);
        }
    }
};

} // namespace

GeneratorSeries evolve_generator(const Matrix& l, const std::vector<Matrix>& obs,
                                 const Matrix& rho0,
                                 const std::vector<double>& t_grid, double tol,
                                 bool keep_states) {
    if (t_grid.empty())
        throw std::invalid_argument("evolve_generator: empty time grid");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("evolve_generator: time grid not increasing");
    if (tol <= 0) throw std::invalid_argument("evolve_generator: tol must be > 0");

    GeneratorSeries out;
    out.times = t_grid;
    out.observables.assign(obs.size(), std::vector<double>(t_grid.size(), 0.0));

    Vector y = vec(rho0);
    double t = t_grid.front();
    Dopri5 stepper(l, tol, tol * 1e-2);
    double h = 1e-4;

    auto record = [&](size_t idx) {
        const Matrix rho = unvec(y);
        for (size_t k = 0; k < obs.size(); ++k)
            out.observables[k][idx] = (obs[k] * rho).trace().real();
        if (keep_states) out.states.push_back(rho);
    };

    record(0);
    for (size_t idx = 1; idx < t_grid.size(); ++idx) {
        const double t_target = t_grid[idx];
        while (t < t_target - 1e-13 * std::max(1.0, std::abs(t_target))) {
            stepper.step(t, y, h, t_target);
            y = vec(hermitize(unvec(y)));
        }
        t = t_target;
        record(idx);
    }
    return out;
}

TimeSeries evolve(const SystemParams& p, const ProbeDrive& drive,
                  const Matrix& rho0, const std::vector<double>& t_grid,
                  double tol, bool keep_states) {
    p.validate();
    drive.validate();
    if (rho0.rows() != p.dim())
        throw std::invalid_argument("evolve: state dimension mismatch");
    validate_density(rho0);

    const CompositeOps ops = composite_operators(p);
    const Matrix l = build_liouvillian(p, drive);
    const GeneratorSeries g = evolve_generator(
        l,
        {ops.a1.adjoint() * ops.a1, ops.a2.adjoint() * ops.a2,
         ops.sigma_plus * ops.sigma_minus},
        rho0, t_grid, tol, keep_states);

    TimeSeries ts;
    ts.times = g.times;
    ts.N1 = g.observables[0];
    ts.N2 = g.observables[1];
    ts.Pe = g.observables[2];
    ts.states = g.states;
    return ts;
}

namespace {

std::vector<std::array<int, 3>> truncated_basis(const SystemParams& p, int max_exc) {
    std::vector<std::array<int, 3>> basis;
    for (int s = 0; s < 2; ++s)
        for (int n1 = 0; n1 <= p.n1_cutoff; ++n1)
            for (int n2 = 0; n2 <= p.n2_cutoff; ++n2)
                if (s + n1 + n2 <= max_exc) basis.push_back({s, n1, n2});
    return basis;
}

Matrix reduced_operator(const std::vector<std::array<int, 3>>& basis,
                        const std::map<std::array<int, 3>, int>& index,
                        int component) {
    // component: 0 -> a1, 1 -> a2, 2 -> sigma_minus
    const int d = static_cast<int>(basis.size());
    Matrix op = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        auto [s, n1, n2] = basis[static_cast<size_t>(i)];
        std::array<int, 3> lowered = basis[static_cast<size_t>(i)];
        double amp = 0.0;
        if (component == 0 && n1 > 0) {
            lowered[1] = n1 - 1;
            amp = std::sqrt(double(n1));
        } else if (component == 1 && n2 > 0) {
            lowered[2] = n2 - 1;
            amp = std::sqrt(double(n2));
        } else if (component == 2 && s == 1) {
            lowered[0] = 0;
            amp = 1.0;
        }
        if (amp != 0.0) {
            auto it = index.find(lowered);
            if (it != index.end()) op(it->second, i) = amp;
        }
    }
    return op;
}

} // namespace

ReducedSpace excitation_truncation(const SystemParams& p, const Matrix& rho0,
                                   const ProbeDrive& drive, int max_exc) {
    p.validate();
    if (drive.amplitude != 0.0)
        throw std::invalid_argument(
            "excitation_truncation: only undriven dynamics stay in the subspace");
    if (max_exc < 0)
        throw std::invalid_argument("excitation_truncation: max_exc must be >= 0");

    ReducedSpace r;
    r.max_exc = max_exc;
    r.basis = truncated_basis(p, max_exc);
    const int d = static_cast<int>(r.basis.size());

    std::map<std::array<int, 3>, int> index;
    for (int i = 0; i < d; ++i) index[r.basis[static_cast<size_t>(i)]] = i;

    r.embed = Matrix::Zero(p.dim(), d);
    for (int i = 0; i < d; ++i) {
        const auto [s, n1, n2] = r.basis[static_cast<size_t>(i)];
        r.embed(basis_index(p, s, n1, n2), i) = 1.0;
    }

    if (rho0.rows() == p.dim()) {
        // The initial state must have no support outside the subspace.
        const Matrix proj = r.embed * r.embed.adjoint();
        const Matrix outside = rho0 - proj * rho0 * proj;
        if (max_abs(outside) > 1e-12)
            throw std::invalid_argument(
                "excitation_truncation: initial state leaves the subspace");
    }

    r.a1 = reduced_operator(r.basis, index, 0);
    r.a2 = reduced_operator(r.basis, index, 1);
    r.sigma_minus = reduced_operator(r.basis, index, 2);
    r.sigma_plus = r.sigma_minus.adjoint();

    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const auto [s, n1, n2] = r.basis[static_cast<size_t>(i)];
        h(i, i) = p.delta1 * n1 + p.delta2 * n2;
        if (s == 1) {
            auto it = index.find({0, n1 + 1, n2});
            if (it != index.end()) {
                const double el = p.g * std::sqrt(double(n1 + 1));
                h(it->second, i) += el;
                h(i, it->second) += el;
            }
        }
        if (n2 >= 1) {
            auto it = index.find({s, n1 + 1, n2 - 1});
            if (it != index.end()) {
                const double el = p.J * std::sqrt(double((n1 + 1) * n2));
                h(it->second, i) += el;
                h(i, it->second) += el;
            }
        }
    }
    r.hamiltonian = std::move(h);
    return r;
}

Matrix reduce_state(const ReducedSpace& r, const Matrix& rho_full) {
    return r.embed.adjoint() * rho_full * r.embed;
}

Matrix embed_state(const ReducedSpace& r, const Matrix& rho_red) {
    return r.embed * rho_red * r.embed.adjoint();
}

namespace {

Matrix reduced_liouvillian(const SystemParams& p, const ReducedSpace& r) {
    return lindblad_generator(r.hamiltonian, {{p.kappa1, r.a1},
                                              {p.kappa2, r.a2},
                                              {p.gamma, r.sigma_minus}});
}

} // namespace

RabiResult rabi_experiment(const SystemParams& p, int samples, double tol) {
    p.validate();
    if (samples < 2) throw std::invalid_argument("rabi_experiment: samples < 2");

    SystemParams q = p;
    q.delta2 = resonance_delta2(q);
    const EffectiveParams eff = effective_params(q);

    RabiResult res;
    res.delta2_used = q.delta2;
    res.horizon = eff.g_eff > 0.0
                      ? 3.0 * M_PI / eff.g_eff
                      : 6.0 / std::max(eff.gamma_eff, 1e-6);

    const ReducedSpace r = excitation_truncation(q, Matrix(), ProbeDrive{}, 1);
    const int d = static_cast<int>(r.basis.size());
    Vector excited = Vector::Zero(d);
    for (int i = 0; i < d; ++i)
        if (r.basis[static_cast<size_t>(i)] == std::array<int, 3>{1, 0, 0})
            excited(i) = 1.0;
    const Matrix rho0 = pure_state(excited);

    std::vector<double> grid(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i)
        grid[static_cast<size_t>(i)] = res.horizon * double(i) / double(samples - 1);

    const Matrix l = reduced_liouvillian(q, r);
    const GeneratorSeries g = evolve_generator(
        l,
        {r.a1.adjoint() * r.a1, r.a2.adjoint() * r.a2, r.sigma_plus * r.sigma_minus},
        rho0, grid, tol, false);

    res.series.times = g.times;
    res.series.N1 = g.observables[0];
    res.series.N2 = g.observables[1];
    res.series.Pe = g.observables[2];
    res.pe_eff.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        res.pe_eff[i] = effective_rabi_pe(grid[i], eff);
    res.max_N1 = *std::max_element(res.series.N1.begin(), res.series.N1.end());
    res.max_N2 = *std::max_element(res.series.N2.begin(), res.series.N2.end());
    return res;
}

Matrix propagator_oracle(const Matrix& l, double t) {
    if (t < 0) throw std::invalid_argument("propagator_oracle: t must be >= 0");
    const Eigen::Index n = l.rows();
    if (l.cols() != n) throw std::invalid_argument("propagator_oracle: not square");
    if (t == 0.0) return Matrix::Identity(n, n);

    Matrix a = l * t;
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

    // Pade-13 scaling and squaring; theta_13 per the standard analysis.
    constexpr double theta13 = 5.371920351148152;
    constexpr int max_squarings = 45;
    int s = 0;
    if (norm1 > theta13)
        s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    if (s > max_squarings) {
        if (norm1 / std::pow(2.0, max_squarings) > 1e4)
            throw std::invalid_argument("propagator_oracle: norm exceeds scaling budget");
        s = max_squarings;
    }
    if (s > 0) a /= std::pow(2.0, s);

    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0};

    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                          b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                     b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

} // namespace dsqed
