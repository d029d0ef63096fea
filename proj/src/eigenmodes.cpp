#include "dsqed/eigenmodes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dsqed/effective.hpp"
#include "dsqed/hilbert.hpp"

namespace dsqed {

namespace {

std::vector<std::array<int, 3>> subspace_basis(int n_exc) {
    // Emitter-excited states first, then decreasing n1.
    std::vector<std::array<int, 3>> basis;
    for (int s = 1; s >= 0; --s)
        for (int n1 = n_exc - s; n1 >= 0; --n1) {
            const int n2 = n_exc - s - n1;
            if (n2 >= 0) basis.push_back({s, n1, n2});
        }
    return basis;
}

} // namespace

ExcitationSubspace excitation_block(const SystemParams& p, int n_exc) {
    p.validate();
    if (n_exc != 1 && n_exc != 2)
        throw std::invalid_argument("excitation_block: n_exc must be 1 or 2");
    if (p.n1_cutoff < n_exc || p.n2_cutoff < n_exc)
        throw std::invalid_argument("excitation_block: cutoffs below n_exc");

    ExcitationSubspace sub;
    sub.n_exc = n_exc;
    sub.basis = subspace_basis(n_exc);
    const int d = static_cast<int>(sub.basis.size());

    std::map<std::array<int, 3>, int> index;
    for (int i = 0; i < d; ++i) index[sub.basis[i]] = i;

    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const auto [s, n1, n2] = sub.basis[i];
        m(i, i) = Complex(p.delta1 * n1 + p.delta2 * n2,
                          -0.5 * (p.kappa1 * n1 + p.kappa2 * n2 + p.gamma * s));
        // g a1^+ sm : (e, n1, n2) -> (g, n1+1, n2), element g*sqrt(n1+1)
        if (s == 1) {
            auto it = index.find({0, n1 + 1, n2});
            if (it != index.end()) {
                m(it->second, i) += p.g * std::sqrt(double(n1 + 1));
                m(i, it->second) += p.g * std::sqrt(double(n1 + 1));
            }
        }
        // J a1^+ a2 : (s, n1, n2) -> (s, n1+1, n2-1), element J*sqrt((n1+1) n2)
        if (n2 >= 1) {
            auto it = index.find({s, n1 + 1, n2 - 1});
            if (it != index.end()) {
                const double el = p.J * std::sqrt(double((n1 + 1) * n2));
                m(it->second, i) += el;
                m(i, it->second) += el;
            }
        }
    }
    sub.matrix = std::move(m);
    return sub;
}

std::vector<EigenBranch> eigendecompose(const ExcitationSubspace& sub) {
    Eigen::ComplexEigenSolver<Matrix> solver(sub.matrix, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: solver failed to converge");

    const Complex trace = sub.matrix.trace();
    const Complex esum = solver.eigenvalues().sum();
    const double scale = std::max(1.0, std::abs(trace));
    if (std::abs(esum - trace) > 1e-10 * scale)
        throw std::runtime_error("eigendecompose: eigenvalue sum disagrees with trace");

    const int d = static_cast<int>(sub.matrix.rows());
    std::vector<EigenBranch> branches(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
        EigenBranch& b = branches[static_cast<size_t>(k)];
        b.value = solver.eigenvalues()(k);
        b.energy = b.value.real();
        b.linewidth = -2.0 * b.value.imag();
        b.vector = solver.eigenvectors().col(k);
        b.vector /= b.vector.norm();
    }

    // Label: two smallest linewidths form the dark doublet.
    std::vector<int> order(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) order[static_cast<size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return branches[static_cast<size_t>(a)].linewidth <
               branches[static_cast<size_t>(b)].linewidth;
    });
    if (d >= 2) {
        int lo = order[0], hi = order[1];
        if (branches[static_cast<size_t>(lo)].energy >
            branches[static_cast<size_t>(hi)].energy)
            std::swap(lo, hi);
        branches[static_cast<size_t>(lo)].label = "dark-minus";
        branches[static_cast<size_t>(hi)].label = "dark-plus";
        for (size_t k = 2; k < order.size(); ++k)
            branches[static_cast<size_t>(order[k])].label = "bright";
    }
    return branches;
}

namespace {

// Weight carried by basis states with photons in the lossy mode a1.
double lossy_weight(const ExcitationSubspace& sub, const Vector& v) {
    double w = 0.0;
    for (size_t i = 0; i < sub.basis.size(); ++i)
        if (sub.basis[i][1] > 0) w += std::norm(v(static_cast<Eigen::Index>(i)));
    return w;
}

std::pair<EigenBranch, EigenBranch> pick_dark_pair(const ExcitationSubspace& sub,
                                                   std::vector<EigenBranch> branches) {
    std::stable_sort(branches.begin(), branches.end(),
                     [](const EigenBranch& a, const EigenBranch& b) {
                         return a.linewidth < b.linewidth;
                     });
    // Tie on the doublet boundary: prefer the candidate with the smaller
    // weight on the lossy mode.
    const double tie = 1e-9 * std::max(1.0, branches[1].linewidth);
    size_t second = 1;
    for (size_t k = 2; k < branches.size(); ++k) {
        if (std::abs(branches[k].linewidth - branches[1].linewidth) > tie) break;
        if (lossy_weight(sub, branches[k].vector) <
            lossy_weight(sub, branches[second].vector))
            second = k;
    }
    EigenBranch a = branches[0];
    EigenBranch b = branches[second];
    if (a.energy > b.energy) std::swap(a, b);
    a.label = "dark-minus";
    b.label = "dark-plus";
    return {a, b};
}

} // namespace

DarkDoublet dark_doublet(const SystemParams& p, int n_exc) {
    const ExcitationSubspace sub = excitation_block(p, n_exc);
    auto [lower, upper] = pick_dark_pair(sub, eigendecompose(sub));
    DarkDoublet d;
    d.lower = std::move(lower);
    d.upper = std::move(upper);
    d.splitting = d.upper.energy - d.lower.energy;
    d.adiabatic_regime = std::abs(p.delta1) >= 5.0 * p.kappa1;
    return d;
}

ScanResult avoided_crossing_scan(const SystemParams& p,
                                 const std::vector<double>& delta2_grid) {
    if (delta2_grid.empty())
        throw std::invalid_argument("avoided_crossing_scan: empty grid");
    const int n = static_cast<int>(delta2_grid.size());

    std::vector<std::pair<EigenBranch, EigenBranch>> pairs(static_cast<size_t>(n));
    std::vector<ExcitationSubspace> subs(static_cast<size_t>(n));
    map_index(n, [&](int i) {
        SystemParams q = p;
        q.delta2 = delta2_grid[static_cast<size_t>(i)];
        subs[static_cast<size_t>(i)] = excitation_block(q, 1);
        pairs[static_cast<size_t>(i)] =
            pick_dark_pair(subs[static_cast<size_t>(i)],
                           eigendecompose(subs[static_cast<size_t>(i)]));
    });

    // Serial continuity pass: keep branch identity by maximal overlap with
    // the previous point.
    std::vector<double> ea(static_cast<size_t>(n)), eb(static_cast<size_t>(n));
    std::vector<double> la(static_cast<size_t>(n)), lb(static_cast<size_t>(n));
    std::vector<double> split(static_cast<size_t>(n));
    EigenBranch branch_a = pairs[0].first;
    EigenBranch branch_b = pairs[0].second;
    for (int i = 0; i < n; ++i) {
        const auto& [lo, hi] = pairs[static_cast<size_t>(i)];
        if (i > 0) {
            const double keep = std::min(std::abs(branch_a.vector.dot(lo.vector)),
                                         std::abs(branch_b.vector.dot(hi.vector)));
            const double swap = std::min(std::abs(branch_a.vector.dot(hi.vector)),
                                         std::abs(branch_b.vector.dot(lo.vector)));
            if (std::max(keep, swap) < 0.5)
                throw std::runtime_error(
                    "avoided_crossing_scan: branch overlap below 0.5; grid too coarse");
            if (swap > keep) {
                branch_a = hi;
                branch_b = lo;
            } else {
                branch_a = lo;
                branch_b = hi;
            }
        }
        ea[static_cast<size_t>(i)] = branch_a.energy;
        la[static_cast<size_t>(i)] = branch_a.linewidth;
        eb[static_cast<size_t>(i)] = branch_b.energy;
        lb[static_cast<size_t>(i)] = branch_b.linewidth;
        split[static_cast<size_t>(i)] = std::abs(hi.energy - lo.energy);
    }

    // Effective-model reference on the same grid.
    std::vector<double> eeff_lo(static_cast<size_t>(n)), eeff_hi(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        SystemParams q = p;
        q.delta2 = delta2_grid[static_cast<size_t>(i)];
        const Eigen::Matrix2cd m =
            effective_single_excitation_matrix(effective_params(q));
        const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m, false);
        double r0 = es.eigenvalues()(0).real(), r1 = es.eigenvalues()(1).real();
        if (r0 > r1) std::swap(r0, r1);
        eeff_lo[static_cast<size_t>(i)] = r0;
        eeff_hi[static_cast<size_t>(i)] = r1;
    }

    ScanResult out;
    out.abscissa_name = "delta2";
    out.abscissa = delta2_grid;
    out.add_column("E_a", std::move(ea));
    out.add_column("linewidth_a", std::move(la));
    out.add_column("E_b", std::move(eb));
    out.add_column("linewidth_b", std::move(lb));
    out.add_column("splitting", std::move(split));
    out.add_column("E_eff_lower", std::move(eeff_lo));
    out.add_column("E_eff_upper", std::move(eeff_hi));
    out.validate();
    return out;
}

ScanResult effective_agreement_scan(const SystemParams& base,
                                    const std::vector<double>& kappa1_grid) {
    if (kappa1_grid.empty())
        throw std::invalid_argument("effective_agreement_scan: empty grid");
    const int n = static_cast<int>(kappa1_grid.size());

    std::vector<double> el(static_cast<size_t>(n)), eu(static_cast<size_t>(n));
    std::vector<double> ll(static_cast<size_t>(n)), lu(static_cast<size_t>(n));
    std::vector<double> efl(static_cast<size_t>(n)), efu(static_cast<size_t>(n));
    std::vector<double> lwg(static_cast<size_t>(n)), lwk(static_cast<size_t>(n));
    std::vector<double> se(static_cast<size_t>(n)), sf(static_cast<size_t>(n));
    std::vector<double> disc(static_cast<size_t>(n));

    map_index(n, [&](int i) {
        SystemParams q = base;
        q.kappa1 = kappa1_grid[static_cast<size_t>(i)];
        q.delta2 = resonance_delta2(q);
        const DarkDoublet d = dark_doublet(q, 1);
        const EffectiveParams e = effective_params(q);
        const size_t k = static_cast<size_t>(i);
        el[k] = d.lower.energy;
        eu[k] = d.upper.energy;
        ll[k] = d.lower.linewidth;
        lu[k] = d.upper.linewidth;
        efl[k] = e.shift_e - e.g_eff;
        efu[k] = e.shift_e + e.g_eff;
        lwg[k] = e.gamma_eff;
        lwk[k] = e.kappa_eff;
        se[k] = d.splitting;
        sf[k] = 2.0 * e.g_eff;
        disc[k] = sf[k] > 0.0 ? std::abs(se[k] - sf[k]) / sf[k] : 0.0;
    });

    ScanResult out;
    out.abscissa_name = "kappa1";
    out.abscissa = kappa1_grid;
    out.add_column("E_lower", std::move(el));
    out.add_column("E_upper", std::move(eu));
    out.add_column("linewidth_lower", std::move(ll));
    out.add_column("linewidth_upper", std::move(lu));
    out.add_column("E_eff_lower", std::move(efl));
    out.add_column("E_eff_upper", std::move(efu));
    out.add_column("gamma_eff", std::move(lwg));
    out.add_column("kappa_eff", std::move(lwk));
    out.add_column("splitting", std::move(se));
    out.add_column("splitting_eff", std::move(sf));
    out.add_column("rel_discrepancy", std::move(disc));
    out.validate();
    return out;
}

std::array<Complex, 3> cubic_eigenvalues(const Eigen::Matrix3cd& m) {
    // Characteristic polynomial x^3 + a x^2 + b x + c, solved by Cardano
    // after the depressed-cubic substitution x = y - a/3.
    const Complex a = -m.trace();
    const Complex b = 0.5 * (m.trace() * m.trace() - (m * m).trace());
    const Complex c = -m.determinant();

    const Complex p = b - a * a / 3.0;
    const Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const Complex disc = q * q / 4.0 + p * p * p / 27.0;

    const Complex sq = std::sqrt(disc);
    Complex u3 = -q / 2.0 + sq;
    if (std::abs(u3) < std::abs(-q / 2.0 - sq)) u3 = -q / 2.0 - sq;
    const Complex u = std::pow(u3, 1.0 / 3.0);
    const Complex w(-0.5, std::sqrt(3.0) / 2.0);

    std::array<Complex, 3> roots;
    for (int k = 0; k < 3; ++k) {
        const Complex uk = u * (k == 0 ? Complex(1.0) : (k == 1 ? w : w * w));
        const Complex v = std::abs(uk) > 0 ? -p / (3.0 * uk) : Complex(0.0);
        roots[static_cast<size_t>(k)] = uk + v - a / 3.0;
    }
    return roots;
}

} // namespace dsqed
