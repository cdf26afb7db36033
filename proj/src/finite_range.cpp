// Finite-range potentials (square wells and the three-spike realization) on
// the trapped line, reduced to a symmetric tridiagonal problem per parity
// sector, plus the spacing-convergence study against the exact interface
// solution.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <variant>
#include <vector>

#include "banded.hpp"
#include "fbdual/errors.hpp"
#include "fbdual/spectral.hpp"
#include "solver_common.hpp"

namespace fbdual::spectral {

namespace {

using contact::Parity;
using detail::TridiagEigen;
using detail_common::trap_potential;

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Potential samples on the half line x = j h, j = 0..m-1 (j = m is the wall).
std::vector<double> half_potential(const TrapSpec& trap, const FiniteRangePotential& pot,
                                   const Grid& grid) {
    const std::size_t m = grid.per_side();
    const double h = grid.h;
    const double w = trap.line_geom().half_width;
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j)
        v[j] = trap_potential(trap.omega, static_cast<double>(j) * h);

    double range = 0.0;
    if (const auto* sw = std::get_if<SquareWell>(&pot.kind)) {
        if (!(sw->a > 0.0) || !std::isfinite(sw->a) || !std::isfinite(sw->v0))
            throw invalid_input("square well needs a finite height and a positive range");
        range = sw->a;
        const double edge = sw->a * (1.0 + 1e-12);
        for (std::size_t j = 0; j < m; ++j)
            if (static_cast<double>(j) * h <= edge)
                v[j] += sw->v0;
    } else {
        const auto& td = std::get<contact::ThreeDeltaRealization>(pot.kind);
        if (!(td.a > 0.0) || !std::isfinite(td.a))
            throw invalid_input("spike spacing must be positive and finite");
        if (td.u_minus != td.u_plus)
            throw unsupported("the side spikes must carry equal strength; an uneven pair "
                              "makes the potential asymmetric and the parity reduction invalid");
        range = td.a;
        const auto j_a = static_cast<std::size_t>(std::lround(td.a / h));
        if (j_a >= m)
            throw invalid_input("spike spacing reaches the wall; widen the domain");
        // Grid-delta: a spike of strength u occupies one cell as height u/h.
        v[j_a] += td.u_plus / h;
        v[0] += td.u_zero / h; // only the even sector has weight at the origin
    }
    if (range < 2.0 * h)
        throw resolution_error("potential range " + fmt_g(range)
                               + " is below two grid cells (h = " + fmt_g(h) + ")");
    if (range >= w)
        throw invalid_input("potential range reaches the wall; widen the domain");
    return v;
}

} // namespace

Spectrum solve_finite_range(const TrapSpec& trap, const FiniteRangePotential& pot,
                            Parity sector, int n_levels, const Grid& grid) {
    if (n_levels <= 0)
        throw invalid_input("n_levels must be positive");
    if (trap.is_ring() || grid.ring)
        throw unsupported("finite-range solves run on the trapped line; rings keep the "
                          "interaction exact through the interface solver");
    const std::size_t m = grid.per_side();
    const double w = trap.line_geom().half_width;
    if (std::fabs(grid.h * static_cast<double>(m) - w) > 1e-9 * w)
        throw invalid_input("grid does not span the trap half-width");
    if (m < 200)
        throw resolution_error("need at least 200 interior points per side");

    const std::vector<double> v = half_potential(trap, pot, grid);
    const double h = grid.h;
    const double h2 = h * h;
    const bool even = sector == Parity::even;

    // Odd sector: unknowns at j = 1..m-1, phi(0) = 0.  Even sector: include
    // j = 0; the folded row -2 phi_1 / h^2 turns symmetric under the
    // similarity y_0 = phi_0 / sqrt(2), giving the sqrt(2) off-diagonal.
    const std::size_t nn = even ? m : m - 1;
    if (static_cast<std::size_t>(n_levels) > nn)
        throw capacity_error("requested " + std::to_string(n_levels)
                             + " levels from a sector basis of dimension " + std::to_string(nn));
    std::vector<double> diag(nn), off(nn > 0 ? nn - 1 : 0, -1.0 / h2);
    for (std::size_t k = 0; k < nn; ++k)
        diag[k] = 2.0 / h2 + v[even ? k : k + 1];
    if (even && nn >= 2)
        off[0] = -std::sqrt(2.0) / h2;

    const int want = std::min<std::size_t>(static_cast<std::size_t>(n_levels) + 1, nn);
    TridiagEigen eig = detail::tridiag_lowest(diag, off, want);

    Spectrum sp;
    sp.sector = even ? Sector::bosonic : Sector::fermionic;
    sp.solver = SolverTag::finite_range_fd;
    for (int k = 0; k < n_levels; ++k) {
        Wavefunction wf{grid, std::vector<double>(grid.size(), 0.0)};
        const std::vector<double>& y = eig.vectors[static_cast<std::size_t>(k)];
        if (even) {
            const double phi0 = std::sqrt(2.0) * y[0];
            wf.values[grid.origin_left] = phi0;
            wf.values[grid.origin_right()] = phi0;
        }
        for (std::size_t j = 1; j < m; ++j) {
            const double phi = y[even ? j : j - 1];
            wf.values[grid.origin_right() + j] = phi;
            wf.values[grid.origin_left - j] = even ? phi : -phi;
        }
        wf.normalize();
        wf.fix_sign();
        sp.levels.push_back(Level{eig.values[static_cast<std::size_t>(k)], std::move(wf), false});
    }
    detail_common::flag_degenerate(sp.levels, eig.values);
    return sp;
}

ConvergenceTable convergence_study(contact::EpsilonCoupling c, const TrapSpec& trap,
                                   const std::vector<double>& a_values,
                                   const SolveOptions& opt) {
    if (c.c == 0.0)
        throw unsupported("the impenetrable limit has no finite-strength spike realization");
    if (trap.is_ring() || trap.omega <= 0.0)
        throw invalid_input("the convergence study tracks the trapped ground level; "
                            "it needs a line with omega > 0");
    if (a_values.empty())
        throw invalid_input("no spacings given");
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        if (!(a_values[i] > 0.0) || !std::isfinite(a_values[i]))
            throw invalid_input("spacings must be positive and finite");
        if (i > 0 && !(a_values[i] < a_values[i - 1]))
            throw invalid_input("spacings must be strictly decreasing");
    }

    ConvergenceTable table;
    table.e_exact =
        solve_interface(trap, c, 1, default_interface_grid(trap), opt).levels[0].energy;

    const Grid fine = default_finite_grid(trap);
    const auto n = static_cast<int>(a_values.size());
    table.rows.resize(a_values.size());
    std::vector<std::exception_ptr> failures(a_values.size());

    const auto run_one = [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            const contact::ThreeDeltaRealization td =
                contact::three_delta_strengths(contact::epsilon_as_chi(c), a_values[idx]);
            const Spectrum sp =
                solve_finite_range(trap, FiniteRangePotential{td}, Parity::odd, 1, fine);
            table.rows[idx] = ConvergenceRow{a_values[idx], sp.levels[0].energy,
                                             std::fabs(sp.levels[0].energy - table.e_exact)};
        } catch (...) {
            failures[idx] = std::current_exception();
        }
    };
    if (opt.exec == exec_mode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i)
            run_one(i);
    } else {
        for (int i = 0; i < n; ++i)
            run_one(i);
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        if (table.rows[i + 1].abs_error >= table.rows[i].abs_error) {
            table.warning = "error stopped shrinking below a = " + fmt_g(table.rows[i + 1].a)
                            + "; the grid resolution floor is reached";
            break;
        }
    }

    if (table.rows.size() >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const ConvergenceRow& r : table.rows) {
            const double x = std::log(r.a), y = std::log(r.abs_error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const auto cnt = static_cast<double>(table.rows.size());
        table.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    return table;
}

} // namespace fbdual::spectral
