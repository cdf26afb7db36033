#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "banded.hpp"
#include "fbdual/spectral.hpp"
#include "solver_common.hpp"

namespace fbdual::spectral {

namespace {

using contact::ConnectionMatrix;
using detail::Banded;
using detail::BandedLU;
using detail_common::flag_degenerate;
using detail_common::parity_matches;
using detail_common::points_for;
using detail_common::trap_potential;

// Reconstruction of the eliminated origin values phi(0-) and phi(0+) as
// linear functionals of the four nearest interior unknowns, ordered
// (y(-2h), y(-h), y(+h), y(+2h)).  One-sided three-point derivative
// stencils close the junction condition to second order:
//   phi'(0-) = t phi(0-) + a,  a = (-4 y(-h) + y(-2h)) / (2h),
//   phi'(0+) = -t phi(0+) + b, b = (4 y(+h) - y(+2h)) / (2h),  t = 3/(2h),
// and (phi(0+), phi'(0+))^T = M (phi(0-), phi'(0-))^T is solved for both
// origin values.
struct OriginElim {
    std::size_t col[4];
    double p[4]; // phi(0-)
    double q[4]; // phi(0+)
};

OriginElim make_elim(const ConnectionMatrix& m, double h, std::size_t um2, std::size_t um1,
                     std::size_t up1, std::size_t up2) {
    const double t = 3.0 / (2.0 * h);
    const double dlt = m.m21 + t * (m.m11 + m.m22) + t * t * m.m12;
    const double scale = std::fabs(m.m21) + t * (std::fabs(m.m11) + std::fabs(m.m22))
                         + t * t * std::fabs(m.m12) + 1.0;
    if (std::fabs(dlt) < 1e-10 * scale)
        throw resolution_error("origin elimination is singular at this grid step; "
                               "perturb the spacing");
    const double pm_a = -(m.m22 + t * m.m12) / dlt;
    const double pm_b = 1.0 / dlt;
    const double r = m.m11 + m.m12 * t;
    const double w_a = r * pm_a + m.m12;
    const double w_b = r * pm_b;
    const double a_m2 = 0.5 / h, a_m1 = -2.0 / h;
    const double b_p1 = 2.0 / h, b_p2 = -0.5 / h;
    OriginElim e;
    e.col[0] = um2;
    e.col[1] = um1;
    e.col[2] = up1;
    e.col[3] = up2;
    e.p[0] = pm_a * a_m2;
    e.p[1] = pm_a * a_m1;
    e.p[2] = pm_b * b_p1;
    e.p[3] = pm_b * b_p2;
    e.q[0] = w_a * a_m2;
    e.q[1] = w_a * a_m1;
    e.q[2] = w_b * b_p1;
    e.q[3] = w_b * b_p2;
    return e;
}

// Line: unknowns are the interior nodes minus the origin pair, left block
// then right block; walls and origin eliminated.  Bandwidth 2 because the
// origin functionals reach two nodes deep on each side.
struct LineProblem {
    Banded a;
    OriginElim elim;
    std::size_t m = 0; // nodes per side

    std::size_t grid_of(std::size_t u) const { return u < m - 1 ? u + 1 : u + 3; }
};

LineProblem build_line(const Grid& grid, double omega, const ConnectionMatrix& cm) {
    const std::size_t m = grid.per_side();
    LineProblem pr{Banded(static_cast<int>(2 * (m - 1)), 2, 2), OriginElim{}, m};
    const double h = grid.h;
    const double ih2 = 1.0 / (h * h);
    pr.elim = make_elim(cm, h, m - 3, m - 2, m - 1, m);
    const int n = pr.a.n;
    for (int u = 0; u < n; ++u) {
        const std::size_t g = pr.grid_of(static_cast<std::size_t>(u));
        pr.a.add(u, u, 2.0 * ih2 + trap_potential(omega, grid.xs[g]));
        for (std::size_t gn : {g - 1, g + 1}) {
            if (gn == 0 || gn == 2 * m + 1)
                continue; // Dirichlet wall
            if (gn == m) { // 0- slot
                for (int k = 0; k < 4; ++k)
                    pr.a.add(u, static_cast<int>(pr.elim.col[k]), -ih2 * pr.elim.p[k]);
            } else if (gn == m + 1) { // 0+ slot
                for (int k = 0; k < 4; ++k)
                    pr.a.add(u, static_cast<int>(pr.elim.col[k]), -ih2 * pr.elim.q[k]);
            } else {
                const std::size_t un = gn <= m - 1 ? gn - 1 : gn - 3;
                pr.a.add(u, static_cast<int>(un), -ih2);
            }
        }
    }
    return pr;
}

// Ring: the seam hop between the antipode and the leftmost node leaves the
// band; it is carried as a symmetric rank-2 correction
//   A = B + w (e_0 e_{n-1}^T + e_{n-1} e_0^T),  w = -sigma / h^2,
// and determinants/solves use the rank-2 update formula against the banded
// factorization of B - E.
struct RingProblem {
    Banded b;
    OriginElim elim;
    double corner = 0.0;
    std::size_t m = 0;

    std::size_t grid_of(std::size_t u) const { return u <= m - 2 ? u : u + 2; }
    std::size_t unknown_of(std::size_t g) const { return g <= m - 2 ? g : g - 2; }
};

RingProblem build_ring(const Grid& grid, const ConnectionMatrix& cm) {
    const std::size_t m = grid.per_side();
    const double h = grid.h;
    const double ih2 = 1.0 / (h * h);
    RingProblem pr{Banded(static_cast<int>(2 * m - 1), 2, 2), OriginElim{},
                   -grid.ring_sigma * ih2, m};
    pr.elim = make_elim(cm, h, pr.unknown_of(m - 3), pr.unknown_of(m - 2),
                        pr.unknown_of(m + 1), pr.unknown_of(m + 2));
    const int n = pr.b.n;
    auto add_neighbor = [&](int u, std::size_t gn) {
        if (gn == m - 1) { // 0- slot
            for (int k = 0; k < 4; ++k)
                pr.b.add(u, static_cast<int>(pr.elim.col[k]), -ih2 * pr.elim.p[k]);
        } else if (gn == m) { // 0+ slot
            for (int k = 0; k < 4; ++k)
                pr.b.add(u, static_cast<int>(pr.elim.col[k]), -ih2 * pr.elim.q[k]);
        } else {
            pr.b.add(u, static_cast<int>(pr.unknown_of(gn)), -ih2);
        }
    };
    for (int u = 0; u < n; ++u) {
        const std::size_t g = pr.grid_of(static_cast<std::size_t>(u));
        pr.b.add(u, u, 2.0 * ih2);
        if (g == 0) {
            add_neighbor(u, 1); // the other neighbor wraps: corner term
        } else if (g == 2 * m) {
            add_neighbor(u, 2 * m - 1);
        } else {
            add_neighbor(u, g - 1);
            add_neighbor(u, g + 1);
        }
    }
    return pr;
}

int line_det_sign(const LineProblem& pr, double e_val) {
    Banded a = pr.a;
    a.shift_diagonal(-e_val);
    return BandedLU::factor(std::move(a)).det_sign();
}

struct RingFactor {
    BandedLU lu;
    std::vector<double> x0, x1; // (B - E)^{-1} e_0 and (B - E)^{-1} e_{n-1}
    double s[4] = {0, 0, 0, 0}; // I_2 + W^T (B - E)^{-1} U, row-major
    double dets = 0.0;
};

RingFactor factor_ring(const RingProblem& pr, double e_val) {
    Banded b = pr.b;
    b.shift_diagonal(-e_val);
    RingFactor f{BandedLU::factor(std::move(b)), {}, {}, {0, 0, 0, 0}, 0.0};
    if (f.lu.singular)
        return f;
    const int n = pr.b.n;
    f.x0.assign(n, 0.0);
    f.x0[0] = 1.0;
    f.x1.assign(n, 0.0);
    f.x1[n - 1] = 1.0;
    f.lu.solve(f.x0.data());
    f.lu.solve(f.x1.data());
    const double w = pr.corner;
    f.s[0] = 1.0 + w * f.x0[n - 1];
    f.s[1] = w * f.x1[n - 1];
    f.s[2] = w * f.x0[0];
    f.s[3] = 1.0 + w * f.x1[0];
    f.dets = f.s[0] * f.s[3] - f.s[1] * f.s[2];
    return f;
}

int ring_det_sign(const RingProblem& pr, double e_val) {
    const RingFactor f = factor_ring(pr, e_val);
    const int sb = f.lu.det_sign();
    if (sb == 0 || f.dets == 0.0 || !std::isfinite(f.dets))
        return 0;
    return f.dets > 0.0 ? sb : -sb;
}

// y <- (A - E)^{-1} y through the rank-2 update of the banded factorization.
void ring_solve(const RingProblem& pr, const RingFactor& f, std::vector<double>& y) {
    f.lu.solve(y.data());
    const int n = pr.b.n;
    const double w = pr.corner;
    const double g0 = w * y[n - 1];
    const double g1 = w * y[0];
    const double z0 = (f.s[3] * g0 - f.s[1] * g1) / f.dets;
    const double z1 = (-f.s[2] * g0 + f.s[0] * g1) / f.dets;
    for (int i = 0; i < n; ++i)
        y[i] -= f.x0[i] * z0 + f.x1[i] * z1;
}

// Inverse iteration with a deterministic start vector.  Throws on overflow
// so the caller can retry with a nudged shift.
std::vector<double> inverse_iteration(int n,
                                      const std::function<void(std::vector<double>&)>& apply_inv) {
    std::mt19937 rng(20240517u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y)
        v = dist(rng);
    for (int it = 0; it < 4; ++it) {
        apply_inv(y);
        double nrm = 0.0;
        for (double v : y)
            nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw solver_inconsistency("inverse iteration overflowed");
        for (double& v : y)
            v /= nrm;
    }
    return y;
}

std::vector<double> line_eigvec(const LineProblem& pr, double e_val) {
    const double nudge = 1e-11 * std::fmax(1.0, std::fabs(e_val));
    for (double k : {0.0, 1.0, -1.0, 4.0, -4.0}) {
        Banded a = pr.a;
        a.shift_diagonal(-(e_val + k * nudge));
        BandedLU lu = BandedLU::factor(std::move(a));
        if (lu.singular)
            continue;
        try {
            return inverse_iteration(pr.a.n, [&](std::vector<double>& y) { lu.solve(y.data()); });
        } catch (const solver_inconsistency&) {
            continue;
        }
    }
    throw solver_inconsistency("could not extract an eigenvector near E = "
                               + std::to_string(e_val));
}

std::vector<double> ring_eigvec(const RingProblem& pr, double e_val) {
    const double nudge = 1e-11 * std::fmax(1.0, std::fabs(e_val));
    for (double k : {0.0, 1.0, -1.0, 4.0, -4.0}) {
        const RingFactor f = factor_ring(pr, e_val + k * nudge);
        if (f.lu.singular || f.dets == 0.0 || !std::isfinite(f.dets))
            continue;
        try {
            return inverse_iteration(pr.b.n,
                                     [&](std::vector<double>& y) { ring_solve(pr, f, y); });
        } catch (const solver_inconsistency&) {
            continue;
        }
    }
    throw solver_inconsistency("could not extract a ring eigenvector near E = "
                               + std::to_string(e_val));
}

double line_residual(const LineProblem& pr, double e_val, const std::vector<double>& y) {
    std::vector<double> r(y.size());
    pr.a.matvec(y.data(), r.data());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = r[i] - e_val * y[i];
        num += d * d;
        den += y[i] * y[i];
    }
    return std::sqrt(num / den);
}

double ring_residual(const RingProblem& pr, double e_val, const std::vector<double>& y) {
    const int n = pr.b.n;
    std::vector<double> r(y.size());
    pr.b.matvec(y.data(), r.data());
    r[0] += pr.corner * y[n - 1];
    r[n - 1] += pr.corner * y[0];
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = r[i] - e_val * y[i];
        num += d * d;
        den += y[i] * y[i];
    }
    return std::sqrt(num / den);
}

Wavefunction line_state(const Grid& grid, const LineProblem& pr, const std::vector<double>& y) {
    Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
    const std::size_t m = pr.m;
    for (std::size_t u = 0; u < y.size(); ++u)
        wf.values[pr.grid_of(u)] = y[u];
    double p = 0.0, q = 0.0;
    for (int k = 0; k < 4; ++k) {
        p += pr.elim.p[k] * y[pr.elim.col[k]];
        q += pr.elim.q[k] * y[pr.elim.col[k]];
    }
    wf.values[m] = p;
    wf.values[m + 1] = q;
    wf.normalize();
    wf.fix_sign();
    return wf;
}

Wavefunction ring_state(const Grid& grid, const RingProblem& pr, const std::vector<double>& y) {
    Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
    const std::size_t m = pr.m;
    for (std::size_t u = 0; u < y.size(); ++u)
        wf.values[pr.grid_of(u)] = y[u];
    double p = 0.0, q = 0.0;
    for (int k = 0; k < 4; ++k) {
        p += pr.elim.p[k] * y[pr.elim.col[k]];
        q += pr.elim.q[k] * y[pr.elim.col[k]];
    }
    wf.values[m - 1] = p;
    wf.values[m] = q;
    wf.normalize();
    wf.fix_sign();
    return wf;
}

void check_grid(const TrapSpec& trap, const Grid& grid) {
    if (trap.is_ring() != grid.ring)
        throw invalid_input("grid geometry does not match the trap geometry");
    if (trap.is_ring()) {
        if (trap.omega != 0.0)
            throw invalid_input("ring traps must have omega = 0");
        const auto& rg = trap.ring_geom();
        const double len = 2.0 * static_cast<double>(grid.per_side()) * grid.h;
        if (std::fabs(len - rg.length) > 1e-9 * std::fmax(1.0, rg.length))
            throw invalid_input("ring grid length does not match the trap");
        if (grid.ring_sigma != ring_sigma_of(rg.twist))
            throw invalid_input("ring grid sigma does not match the trap twist");
    } else {
        const double w = trap.line_geom().half_width;
        if (std::fabs(grid.xs.back() - w) > 1e-9 * std::fmax(1.0, w))
            throw invalid_input("line grid half-width does not match the trap");
    }
    if (grid.per_side() < 200)
        throw resolution_error("interface solver needs at least 200 interior nodes per side; got "
                               + std::to_string(grid.per_side()));
}

// Dirichlet-at-the-origin limits: for a line the problem reduces to a
// half-line symmetric tridiagonal matrix whose eigenfunctions are mirrored
// back with the sector sign; both sectors share the energies.
Spectrum hardcore_line(const TrapSpec& trap, const Grid& grid, Sector sector, int n_levels) {
    if (trap.omega == 0.0)
        throw bracket_error("an impenetrable core binds nothing on a free line");
    const std::size_t m = grid.per_side();
    if (n_levels > static_cast<int>(m) - 1)
        throw invalid_input("more levels requested than the half-line grid holds");
    const double ih2 = 1.0 / (grid.h * grid.h);
    std::vector<double> d(m - 1), e(m - 2, -ih2);
    for (std::size_t i = 0; i + 1 < m; ++i)
        d[i] = 2.0 * ih2 + trap_potential(trap.omega, grid.xs[grid.origin_right() + 1 + i]);
    const auto eig = detail::tridiag_lowest(d, e, n_levels);
    const double sgn = sector == Sector::fermionic ? -1.0 : 1.0;
    Spectrum sp;
    sp.sector = sector;
    sp.solver = SolverTag::interface_fd;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const std::size_t g = grid.origin_right() + 1 + i;
            wf.values[g] = eig.vectors[k][i];
            wf.values[grid.mirror(g)] = sgn * eig.vectors[k][i];
        }
        wf.normalize();
        wf.fix_sign();
        sp.levels.push_back(Level{eig.values[k], std::move(wf), false});
    }
    flag_degenerate(sp.levels, eig.values);
    return sp;
}

// On a ring the core cuts the loop into a single Dirichlet interval of the
// full circumference; the spectrum is twist independent, and the interval
// modes alternate between the two exchange sectors when glued back.
Spectrum hardcore_ring(const Grid& grid, Sector sector, int n_levels) {
    const std::size_t m = grid.per_side();
    const int nn = static_cast<int>(2 * m - 1);
    const int want = std::min(2 * n_levels + 2, nn);
    const double ih2 = 1.0 / (grid.h * grid.h);
    std::vector<double> d(static_cast<std::size_t>(nn), 2.0 * ih2);
    std::vector<double> e(static_cast<std::size_t>(nn) - 1, -ih2);
    const auto eig = detail::tridiag_lowest(d, e, want);
    Spectrum sp;
    sp.sector = sector;
    sp.solver = SolverTag::interface_fd;
    for (std::size_t kk = 0; kk < eig.values.size(); ++kk) {
        Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
        for (std::size_t k = 1; k <= 2 * m - 1; ++k) {
            const double v = eig.vectors[kk][k - 1];
            if (k <= m)
                wf.values[m + k] = v; // unrolled (0, L/2]
            else
                wf.values[k - m - 1] = grid.ring_sigma * v; // wrapped back past the seam
        }
        wf.values[m - 1] = 0.0;
        wf.values[m] = 0.0;
        wf.normalize();
        wf.fix_sign();
        if (!parity_matches(wf.parity_score(), sector))
            continue;
        sp.levels.push_back(Level{eig.values[kk], std::move(wf), false});
        if (static_cast<int>(sp.levels.size()) == n_levels)
            break;
    }
    if (static_cast<int>(sp.levels.size()) < n_levels)
        throw solver_inconsistency("ring interval modes did not alternate as expected");
    flag_degenerate(sp.levels, eig.values);
    return sp;
}

} // namespace

Spectrum solve_interface(const TrapSpec& trap, const contact::Coupling& coupling, int n_levels,
                         const Grid& grid, const SolveOptions& opt) {
    if (n_levels <= 0)
        throw invalid_input("n_levels must be positive");
    check_grid(trap, grid);

    Sector sector = sector_of(coupling);
    if (opt.complement_sector)
        sector = sector == Sector::fermionic ? Sector::bosonic : Sector::fermionic;

    // Limits that leave the transfer-matrix family.
    const auto* eps = std::get_if<contact::EpsilonCoupling>(&coupling);
    const auto* dlt = std::get_if<contact::DeltaCoupling>(&coupling);
    const bool impenetrable = std::holds_alternative<contact::HardCore>(coupling)
                              || (eps != nullptr && eps->c == 0.0);
    if (impenetrable)
        return trap.is_ring() ? hardcore_ring(grid, sector, n_levels)
                              : hardcore_line(trap, grid, sector, n_levels);
    if (trap.is_ring() && dlt != nullptr && dlt->v == 0.0)
        throw unsupported("the free ring spectrum is doubly degenerate; the determinant "
                          "scan cannot separate the pairs");

    const ConnectionMatrix cm = contact::connection_matrix(coupling);
    const bool ring = trap.is_ring();

    LineProblem line_pr = ring ? LineProblem{Banded(1, 0, 0), OriginElim{}, 0}
                               : build_line(grid, trap.omega, cm);
    RingProblem ring_pr = ring ? build_ring(grid, cm)
                               : RingProblem{Banded(1, 0, 0), OriginElim{}, 0.0, 0};

    auto det = [&](double e_val) {
        return static_cast<double>(ring ? ring_det_sign(ring_pr, e_val)
                                        : line_det_sign(line_pr, e_val));
    };

    detail_common::ScanWindow win = detail_common::make_window(trap, coupling, n_levels, opt);
    const double e_cap = (3.1415926535897932 / (4.0 * grid.h)) * (3.1415926535897932 / (4.0 * grid.h));

    Spectrum sp;
    sp.sector = sector;
    sp.solver = SolverTag::interface_fd;
    std::vector<double> all_roots;
    double lo = win.floor_e;
    while (true) {
        const auto roots = detscan::find_roots(det, lo, win.hi, points_for(lo, win.hi, win.step),
                                               opt.bisect_rel_tol, opt.exec);
        for (double r : roots) {
            bool seen = false;
            for (double prev : all_roots)
                if (std::fabs(r - prev) <= 1e-10 * std::fmax(1.0, std::fabs(r)))
                    seen = true;
            if (seen)
                continue;
            all_roots.push_back(r);
            if (static_cast<int>(sp.levels.size()) >= n_levels)
                continue; // still record the root for the degeneracy flags
            const std::vector<double> y = ring ? ring_eigvec(ring_pr, r) : line_eigvec(line_pr, r);
            const double resid = ring ? ring_residual(ring_pr, r, y) : line_residual(line_pr, r, y);
            const double scale = 8.0 / (grid.h * grid.h) + std::fabs(r);
            if (resid > opt.residual_tol * scale)
                throw solver_inconsistency("eigenpair residual " + std::to_string(resid)
                                           + " exceeds tolerance near E = " + std::to_string(r));
            Wavefunction wf = ring ? ring_state(grid, ring_pr, y) : line_state(grid, line_pr, y);
            if (!parity_matches(wf.parity_score(), sector))
                continue;
            sp.levels.push_back(Level{r, std::move(wf), false});
        }
        if (static_cast<int>(sp.levels.size()) >= n_levels || !win.extendable)
            break;
        const double new_hi = win.next_hi();
        if (new_hi > e_cap)
            throw capacity_error("grid spacing cannot resolve states up to E = "
                                 + std::to_string(new_hi) + "; refine the grid");
        lo = win.hi;
        win.hi = new_hi;
    }

    if (sp.levels.empty())
        throw bracket_error("no eigenvalue brackets found in the scan window");
    flag_degenerate(sp.levels, all_roots);
    return sp;
}

} // namespace fbdual::spectral
