#include "dsqed/probe.hpp"

#include <cmath>

#include "dsqed/csv.hpp"
#include "dsqed/dynamics.hpp"
#include "dsqed/hilbert.hpp"

namespace dsqed {

namespace {

double one_norm(const Matrix& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace

Matrix steady_state(const Matrix& l, double residual_tol) {
    const Eigen::Index n2 = l.rows();
    if (l.cols() != n2) throw std::invalid_argument("steady_state: not square");
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n2))));
    if (d * d != n2) throw std::invalid_argument("steady_state: not a superoperator");

    const double lnorm = one_norm(l);
    if (lnorm == 0.0)
        throw SteadyStateError("steady_state: zero generator (degenerate kernel)");

    // Inverse iteration drives a trial vector onto the smallest singular
    // direction of L, i.e. its kernel. The unshifted factorization usually
    // works (partial pivoting leaves a tiny pivot); a shifted retry covers
    // an exactly vanishing one. Iterations continue well past the contract
    // tolerance because weakly driven kernels carry physical structure many
    // orders below the leading populations.
    Eigen::PartialPivLU<Matrix> lu(l);
    auto finite = [](const Vector& x) {
        return std::isfinite(x.norm());
    };
    {
        Vector probe = lu.solve(Vector::Ones(n2));
        if (!finite(probe)) {
            Matrix shifted = l;
            shifted.diagonal().array() += Complex(1e-15 * lnorm, 0.0);
            lu.compute(shifted);
        }
    }

    Vector v = vec(Matrix::Identity(d, d) / double(d));
    double residual = 1.0;
    Vector lv(n2);
    for (int it = 0; it < 50; ++it) {
        Vector next = lu.solve(v);
        const double nrm = next.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw SteadyStateError("steady_state: inverse iteration failed");
        next /= nrm;
        matvec(l, next, lv);
        const double res_next = lv.norm() / lnorm;
        if (res_next > residual && residual < residual_tol) break;  // plateau
        v = next;
        residual = res_next;
        if (residual < 1e-15) break;
    }
    if (residual >= residual_tol)
        throw SteadyStateError("steady_state: residual did not converge");

    // Probe for a second kernel direction; a one-dimensional kernel is
    // required for the state to be unique.
    {
        Vector w = Vector::Zero(n2);
        w(0) = 1.0;
        w(n2 - 1) = Complex(0.0, 1.0);
        w -= v * v.dot(w);
        if (w.norm() > 1e-8) {
            w /= w.norm();
            for (int it = 0; it < 3; ++it) {
                w = lu.solve(w);
                w -= v * v.dot(w);
                const double nrm = w.norm();
                if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
                w /= nrm;
            }
            matvec(l, w, lv);
            if (lv.norm() / lnorm < 10.0 * residual_tol)
                throw SteadyStateError("steady_state: degenerate kernel");
        }
    }

    Matrix rho = hermitize(unvec(v));
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-10)
        throw SteadyStateError("steady_state: traceless kernel vector");
    rho /= tr;

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw SteadyStateError("steady_state: candidate not positive semidefinite");

    matvec(l, vec(rho), lv);
    if (lv.norm() > residual_tol * lnorm)
        throw SteadyStateError("steady_state: final residual too large");
    return rho;
}

double g2_zero(const Matrix& rho, const Matrix& a) {
    const Matrix n_op = a.adjoint() * a;
    const double n = (n_op * rho).trace().real();
    if (n <= 1e-12)
        throw std::domain_error("g2_zero: mode population vanishes");
    const double num = (a.adjoint() * a.adjoint() * a * a * rho).trace().real();
    return num / (n * n);
}

namespace {

struct G2Point {
    double g2 = std::nan("");
    double g2_coarse = std::nan("");
    double n2 = std::nan("");
    bool ok = false;
    bool converged = false;
};

G2Point g2_point(const SystemParams& p, double eps, double de, DriveTarget target) {
    G2Point out;
    ProbeDrive drive{eps, de, target};
    try {
        const Matrix rho = steady_state(build_liouvillian(p, drive));
        const CompositeOps ops = composite_operators(p);
        out.g2 = g2_zero(rho, ops.a2);
        out.n2 = (ops.a2.adjoint() * ops.a2 * rho).trace().real();

        SystemParams coarse = p;
        coarse.n1_cutoff = std::max(1, p.n1_cutoff - 1);
        coarse.n2_cutoff = std::max(1, p.n2_cutoff - 1);
        const Matrix rho_c = steady_state(build_liouvillian(coarse, drive));
        out.g2_coarse = g2_zero(rho_c, composite_operators(coarse).a2);

        out.ok = true;
        out.converged = std::abs(out.g2 - out.g2_coarse) <=
                        0.05 * std::max(std::abs(out.g2), 1e-12);
    } catch (const std::exception&) {
        out.ok = false;
    }
    return out;
}

} // namespace

ScanResult g2_scan(const SystemParams& p, double eps,
                   const std::vector<double>& delta_e_grid, DriveTarget target) {
    p.validate();
    if (delta_e_grid.empty()) throw std::invalid_argument("g2_scan: empty grid");
    if (eps <= 0) throw std::invalid_argument("g2_scan: drive must be positive");

    const int n = static_cast<int>(delta_e_grid.size());
    std::vector<G2Point> pts(static_cast<size_t>(n));
    map_index(n, [&](int i) {
        pts[static_cast<size_t>(i)] =
            g2_point(p, eps, delta_e_grid[static_cast<size_t>(i)], target);
    });

    ScanResult out;
    out.abscissa_name = "detuning_e";
    out.abscissa = delta_e_grid;
    std::vector<double> g2(static_cast<size_t>(n)), g2c(static_cast<size_t>(n));
    std::vector<double> conv(static_cast<size_t>(n)), ok(static_cast<size_t>(n));
    std::vector<double> n2(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& q = pts[static_cast<size_t>(i)];
        const auto k = static_cast<size_t>(i);
        g2[k] = q.g2;
        g2c[k] = q.g2_coarse;
        conv[k] = q.converged ? 1.0 : 0.0;
        ok[k] = q.ok ? 1.0 : 0.0;
        n2[k] = q.n2;
    }
    out.add_column("g2", std::move(g2));
    out.add_column("g2_coarse", std::move(g2c));
    out.add_column("converged", std::move(conv));
    out.add_column("ok", std::move(ok));
    out.add_column("n2", std::move(n2));
    out.add_metadata("drive_target", to_string(target));
    out.add_metadata("amplitude", format_double(eps));
    out.validate();
    return out;
}

ScanResult excitation_spectrum(const SystemParams& p, double eps,
                               const std::vector<double>& delta_e_grid) {
    p.validate();
    if (delta_e_grid.empty())
        throw std::invalid_argument("excitation_spectrum: empty grid");
    if (eps <= 0) throw std::invalid_argument("excitation_spectrum: drive must be positive");

    const int n = static_cast<int>(delta_e_grid.size());
    std::vector<double> raw(static_cast<size_t>(n), std::nan(""));
    std::vector<double> ok(static_cast<size_t>(n), 0.0);
    map_index(n, [&](int i) {
        ProbeDrive drive{eps, delta_e_grid[static_cast<size_t>(i)], DriveTarget::mode2};
        try {
            const Matrix rho = steady_state(build_liouvillian(p, drive));
            const CompositeOps ops = composite_operators(p);
            raw[static_cast<size_t>(i)] =
                (ops.sigma_plus * ops.sigma_minus * rho).trace().real();
            ok[static_cast<size_t>(i)] = 1.0;
        } catch (const std::exception&) {
            // flagged via ok = 0
        }
    });

    double peak = 0.0;
    for (size_t i = 0; i < raw.size(); ++i)
        if (ok[i] != 0.0) peak = std::max(peak, raw[i]);
    std::vector<double> s(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) s[i] = peak > 0 ? raw[i] / peak : 0.0;

    ScanResult out;
    out.abscissa_name = "detuning_e";
    out.abscissa = delta_e_grid;
    out.add_column("spectrum", std::move(s));
    out.add_column("raw", std::move(raw));
    out.add_column("ok", std::move(ok));
    out.add_metadata("drive_target", to_string(DriveTarget::mode2));
    out.add_metadata("amplitude", format_double(eps));
    out.validate();
    return out;
}

} // namespace dsqed
