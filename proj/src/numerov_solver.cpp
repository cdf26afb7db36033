#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fbdual/spectral.hpp"
#include "solver_common.hpp"

namespace fbdual::spectral {

namespace {

using contact::ConnectionMatrix;
using detail_common::flag_degenerate;
using detail_common::parity_matches;
using detail_common::points_for;
using detail_common::trap_potential;

// Numerov sweep of u'' = f u from a wall seed (0, tiny) toward the origin;
// index order follows the sweep.  The result is scaled to unit max so the
// matching determinant stays inside double range for wide boxes.
std::vector<double> numerov_sweep(const std::vector<double>& f, double h) {
    const double h12 = h * h / 12.0;
    std::vector<double> u(f.size());
    u[0] = 0.0;
    u[1] = 1e-10;
    for (std::size_t i = 2; i < f.size(); ++i) {
        u[i] = (2.0 * (1.0 + 5.0 * h12 * f[i - 1]) * u[i - 1]
                - (1.0 - h12 * f[i - 2]) * u[i - 2])
               / (1.0 - h12 * f[i]);
        if (std::fabs(u[i]) > 1e100) // deep classically forbidden sweeps
            for (std::size_t j = 0; j <= i; ++j)
                u[j] *= 1e-100;
    }
    double vmax = 0.0;
    for (double v : u)
        vmax = std::fmax(vmax, std::fabs(v));
    if (!(vmax > 0.0) || !std::isfinite(vmax))
        throw solver_inconsistency("integration sweep overflowed");
    for (double& v : u)
        v /= vmax;
    return u;
}

// Derivative at the final sweep node, one-sided five-point, O(h^4); sign is
// along increasing index.
double end_derivative(const std::vector<double>& u, double h) {
    const std::size_t n = u.size();
    return (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] - 16.0 * u[n - 4]
            + 3.0 * u[n - 5])
           / (12.0 * h);
}

struct LineShot {
    std::vector<double> ul; // wall to 0-, ascending x
    std::vector<double> ur; // wall to 0+, descending x
    double dl = 0.0;        // phi'(0-)
    double dr = 0.0;        // phi'(0+)
};

LineShot shoot_line(const Grid& grid, double omega, double e_val) {
    const std::size_t m = grid.per_side();
    std::vector<double> fl(m + 1), fr(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        fl[i] = trap_potential(omega, grid.xs[i]) - e_val;
        fr[i] = trap_potential(omega, grid.xs[2 * m + 1 - i]) - e_val;
    }
    LineShot s;
    s.ul = numerov_sweep(fl, grid.h);
    s.ur = numerov_sweep(fr, grid.h);
    s.dl = end_derivative(s.ul, grid.h);
    s.dr = -end_derivative(s.ur, grid.h); // that sweep runs against x
    return s;
}

// Matching determinant: the transported left boundary data M (phi, phi')(0-)
// must be parallel to the right data (phi, phi')(0+).
double line_match(const Grid& grid, double omega, const ConnectionMatrix& cm, double e_val) {
    const LineShot s = shoot_line(grid, omega, e_val);
    const double v0 = cm.m11 * s.ul.back() + cm.m12 * s.dl;
    const double v1 = cm.m21 * s.ul.back() + cm.m22 * s.dl;
    return v0 * s.dr - v1 * s.ur.back();
}

Wavefunction line_matched_state(const Grid& grid, double omega, const ConnectionMatrix& cm,
                                double e_val) {
    const LineShot s = shoot_line(grid, omega, e_val);
    const double v0 = cm.m11 * s.ul.back() + cm.m12 * s.dl;
    const double v1 = cm.m21 * s.ul.back() + cm.m22 * s.dl;
    const double w0 = s.ur.back(), w1 = s.dr;
    const double cross = v0 * w1 - v1 * w0;
    const double size = std::hypot(v0, v1) * std::hypot(w0, w1);
    if (!(std::fabs(cross) <= 1e-3 * size))
        throw solver_inconsistency("matched state is discontinuous at the origin");
    // Scale the right sweep onto the transported left data, dividing by the
    // dominant component so Dirichlet-like states stay stable.
    const double scale = std::fabs(w0) >= std::fabs(w1) ? v0 / w0 : v1 / w1;
    const std::size_t m = grid.per_side();
    Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t i = 0; i <= m; ++i)
        wf.values[i] = s.ul[i];
    for (std::size_t j = 0; j <= m; ++j)
        wf.values[2 * m + 1 - j] = scale * s.ur[j];
    wf.normalize();
    wf.fix_sign();
    return wf;
}

double hardcore_line_match(const Grid& grid, double omega, double e_val) {
    const std::size_t m = grid.per_side();
    std::vector<double> fl(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        fl[i] = trap_potential(omega, grid.xs[i]) - e_val;
    return numerov_sweep(fl, grid.h).back();
}

Wavefunction hardcore_line_state(const Grid& grid, double omega, double e_val, Sector sector) {
    const std::size_t m = grid.per_side();
    std::vector<double> fl(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        fl[i] = trap_potential(omega, grid.xs[i]) - e_val;
    const std::vector<double> ul = numerov_sweep(fl, grid.h);
    const double sgn = sector == Sector::fermionic ? -1.0 : 1.0;
    Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t i = 0; i <= m; ++i) {
        wf.values[i] = ul[i];
        wf.values[grid.mirror(i)] = sgn * ul[i];
    }
    wf.values[m] = 0.0;
    wf.values[m + 1] = 0.0;
    wf.normalize();
    wf.fix_sign();
    return wf;
}

// On the ring the potential vanishes, so transport over a distance is the
// closed-form free transfer matrix and the quantization condition is exact:
// going once around must reproduce the boundary data up to the twist sign,
//   det(T_L M - sigma I) = 2 - sigma tr(T_L M)   (both factors have det 1).
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

Mat2 free_transfer(double e_val, double len) {
    if (e_val > 1e-14) {
        const double k = std::sqrt(e_val);
        const double s = std::sin(k * len), co = std::cos(k * len);
        return Mat2{co, s / k, -k * s, co};
    }
    if (e_val < -1e-14) {
        const double k = std::sqrt(-e_val);
        const double s = std::sinh(k * len), co = std::cosh(k * len);
        return Mat2{co, s / k, k * s, co};
    }
    return Mat2{1.0, len, -e_val * len, 1.0};
}

Mat2 mul(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
}

// tr(T_L M) written termwise so the k -> 0 limit is smooth and the deep
// negative-energy scan can be rescaled by e^{-kappa L} instead of
// overflowing (a positive rescale leaves the root structure alone).
double ring_match(double length, double sigma, const ConnectionMatrix& cm, double e_val) {
    const double tr_sum = cm.m11 + cm.m22;
    if (e_val >= 0.0) {
        // k sinh(kappa L) continues to -k sin(k L); the m12 term flips sign.
        const double k = std::sqrt(e_val);
        const double kl = k * length;
        const double s_k = k > 1e-8 ? std::sin(kl) / k : length * (1.0 - kl * kl / 6.0);
        return 2.0 - sigma * (std::cos(kl) * tr_sum + s_k * cm.m21 - k * std::sin(kl) * cm.m12);
    }
    const double k = std::sqrt(-e_val);
    const double x = k * length;
    if (x < 300.0) {
        const double s_k = k > 1e-8 ? std::sinh(x) / k : length * (1.0 + x * x / 6.0);
        return 2.0 - sigma * (std::cosh(x) * tr_sum + s_k * cm.m21 + k * std::sinh(x) * cm.m12);
    }
    const double em = std::exp(-2.0 * x);
    const double ch = 0.5 * (1.0 + em), sh = 0.5 * (1.0 - em);
    return 2.0 * std::exp(-x) - sigma * (ch * tr_sum + sh * (cm.m21 / k + k * cm.m12));
}

Wavefunction ring_state(const Grid& grid, double length, const ConnectionMatrix& cm,
                        double e_val) {
    const double sigma = grid.ring_sigma;
    const Mat2 t = mul(free_transfer(e_val, length), Mat2{cm.m11, cm.m12, cm.m21, cm.m22});
    const Mat2 k{t.a - sigma, t.b, t.c, t.d - sigma};
    // Null vector of the once-around condition, taken from the larger row.
    double w0, w1;
    if (std::fabs(k.a) + std::fabs(k.b) >= std::fabs(k.c) + std::fabs(k.d)) {
        w0 = -k.b;
        w1 = k.a;
    } else {
        w0 = -k.d;
        w1 = k.c;
    }
    if (w0 == 0.0 && w1 == 0.0)
        throw solver_inconsistency("once-around condition degenerate at this energy");
    const double p0 = cm.m11 * w0 + cm.m12 * w1; // data just right of the origin
    const double p1 = cm.m21 * w0 + cm.m22 * w1;
    const std::size_t m = grid.per_side();
    Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
    wf.values[m - 1] = w0;
    wf.values[m] = p0;
    for (std::size_t j = 1; j <= m; ++j) {
        const Mat2 tx = free_transfer(e_val, grid.xs[m + j]);
        wf.values[m + j] = tx.a * p0 + tx.b * p1;
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const Mat2 tx = free_transfer(e_val, grid.xs[i] + length);
        wf.values[i] = sigma * (tx.a * p0 + tx.b * p1);
    }
    wf.normalize();
    wf.fix_sign();
    return wf;
}

double hardcore_ring_match(double length, double e_val) {
    return free_transfer(e_val, length).b; // interval solution seeded (0, 1)
}

Wavefunction hardcore_ring_state(const Grid& grid, double length, double e_val) {
    const std::size_t m = grid.per_side();
    Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t j = 1; j <= m; ++j)
        wf.values[m + j] = free_transfer(e_val, grid.xs[m + j]).b;
    for (std::size_t i = 0; i + 1 < m; ++i)
        wf.values[i] = grid.ring_sigma * free_transfer(e_val, grid.xs[i] + length).b;
    wf.values[m - 1] = 0.0;
    wf.values[m] = 0.0;
    wf.normalize();
    wf.fix_sign();
    return wf;
}

} // namespace

Spectrum solve_numerov(const TrapSpec& trap, const contact::Coupling& coupling, int n_levels,
                       double tol, const SolveOptions& opt) {
    if (n_levels <= 0)
        throw invalid_input("n_levels must be positive");
    if (!(tol > 0.0))
        throw invalid_input("bisection tolerance must be positive");

    Grid grid;
    if (opt.grid_h > 0.0) {
        if (trap.is_ring()) {
            const auto& rg = trap.ring_geom();
            const auto per_side =
                static_cast<std::size_t>(std::ceil(rg.length / 2.0 / opt.grid_h));
            grid = Grid::ring_grid(rg.length, per_side, ring_sigma_of(rg.twist));
        } else {
            const double w = trap.line_geom().half_width;
            grid = Grid::line(w, static_cast<std::size_t>(std::ceil(w / opt.grid_h)));
        }
    } else {
        grid = default_numerov_grid(trap);
    }
    if (!trap.is_ring() && grid.per_side() < 8)
        throw resolution_error("shooting stencils need at least 8 nodes per side");

    Sector sector = sector_of(coupling);
    if (opt.complement_sector)
        sector = sector == Sector::fermionic ? Sector::bosonic : Sector::fermionic;
    const auto* eps = std::get_if<contact::EpsilonCoupling>(&coupling);
    const auto* dlt = std::get_if<contact::DeltaCoupling>(&coupling);
    const bool impenetrable = std::holds_alternative<contact::HardCore>(coupling)
                              || (eps != nullptr && eps->c == 0.0);
    if (trap.is_ring() && !impenetrable && dlt != nullptr && dlt->v == 0.0)
        throw unsupported("the free ring spectrum is doubly degenerate; the matching "
                          "scan cannot separate the pairs");
    if (!trap.is_ring() && trap.omega == 0.0 && impenetrable)
        throw bracket_error("an impenetrable core binds nothing on a free line");

    const bool ring = trap.is_ring();
    const double length = ring ? trap.ring_geom().length : 0.0;
    const double sigma = ring ? grid.ring_sigma : 1.0;
    ConnectionMatrix cm{1.0, 0.0, 0.0, 1.0};
    if (!impenetrable)
        cm = contact::connection_matrix(coupling);

    std::function<double(double)> det;
    if (ring && impenetrable)
        det = [&](double e) { return hardcore_ring_match(length, e); };
    else if (ring)
        det = [&](double e) { return ring_match(length, sigma, cm, e); };
    else if (impenetrable)
        det = [&](double e) { return hardcore_line_match(grid, trap.omega, e); };
    else
        det = [&](double e) { return line_match(grid, trap.omega, cm, e); };

    detail_common::ScanWindow win = detail_common::make_window(trap, coupling, n_levels, opt);
    const double e_cap =
        ring ? 1e12 : (3.1415926535897932 / (4.0 * grid.h)) * (3.1415926535897932 / (4.0 * grid.h));

    Spectrum sp;
    sp.sector = sector;
    sp.solver = SolverTag::numerov_shoot;
    std::vector<double> all_roots;
    double lo = win.floor_e;
    while (true) {
        const auto roots =
            detscan::find_roots(det, lo, win.hi, points_for(lo, win.hi, win.step), tol, opt.exec);
        for (double r : roots) {
            bool seen = false;
            for (double prev : all_roots)
                if (std::fabs(r - prev) <= 1e-10 * std::fmax(1.0, std::fabs(r)))
                    seen = true;
            if (seen)
                continue;
            all_roots.push_back(r);
            if (static_cast<int>(sp.levels.size()) >= n_levels)
                continue;
            Wavefunction wf = ring ? (impenetrable ? hardcore_ring_state(grid, length, r)
                                                   : ring_state(grid, length, cm, r))
                                   : (impenetrable
                                          ? hardcore_line_state(grid, trap.omega, r, sector)
                                          : line_matched_state(grid, trap.omega, cm, r));
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
