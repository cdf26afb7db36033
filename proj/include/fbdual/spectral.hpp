#pragma once

// Eigenvalue/eigenfunction solvers for the 1D relative-coordinate problem
//   -phi'' + (omega^2/4) x^2 phi + (contact interaction at 0) phi = E phi
// on a truncated line or a ring, with three interchangeable interaction
// treatments: exact interface (connection-matrix) conditions, finite-range
// potentials, and the three-delta realization at finite spacing.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "fbdual/contact.hpp"
#include "fbdual/detscan.hpp"

namespace fbdual::spectral {

struct LineGeometry {
    double half_width = 0.0; // Dirichlet walls at +-half_width
};

struct RingGeometry {
    double length = 0.0;
    double twist = 0.0; // phi(x + L) = e^{i twist} phi(x); in [0, 2pi)
};

struct TrapSpec {
    double omega = 0.0;
    std::variant<LineGeometry, RingGeometry> geometry{LineGeometry{}};

    static TrapSpec line(double omega, double half_width);
    // Rings carry no trap (a harmonic term is not translation invariant on a
    // ring); omega is fixed to 0 here.
    static TrapSpec ring(double length, double twist);

    bool is_ring() const { return std::holds_alternative<RingGeometry>(geometry); }
    const LineGeometry& line_geom() const { return std::get<LineGeometry>(geometry); }
    const RingGeometry& ring_geom() const { return std::get<RingGeometry>(geometry); }
};

// Symmetric grid with the origin stored twice (0- and 0+ slots), because the
// value-jump interaction makes the wavefunction genuinely two-valued there.
// Line grids include the wall points; ring grids cover (-L/2, L/2] with the
// antipode stored once.
struct Grid {
    double h = 0.0;
    bool ring = false;
    double ring_sigma = 1.0; // e^{i twist} restricted to +-1; unused for lines
    std::vector<double> xs;
    std::size_t origin_left = 0;

    static Grid line(double half_width, std::size_t per_side);
    static Grid ring_grid(double length, std::size_t per_side, double sigma);

    std::size_t size() const { return xs.size(); }
    std::size_t origin_right() const { return origin_left + 1; }
    std::size_t per_side() const { return ring ? (xs.size() - 1) / 2 : xs.size() / 2 - 1; }
    // Index holding the value at -x of index i (the antipode maps to itself).
    std::size_t mirror(std::size_t i) const;
};

struct Wavefunction {
    Grid grid;
    std::vector<double> values;

    double norm() const; // trapezoid; the 0-/0+ gap has zero width
    void normalize();
    void fix_sign(); // first nonvanishing value right of the origin becomes > 0
    // +1 for even, -1 for odd, graded by the normalized mirror overlap.
    double parity_score() const;
};

double inner_product(const Wavefunction& a, const Wavefunction& b);

enum class Sector { fermionic, bosonic, none };
enum class SolverTag { interface_fd, numerov_shoot, finite_range_fd };

struct Level {
    double energy = 0.0;
    Wavefunction state;
    bool degenerate_flag = false; // closer than 1e-9 to a neighbor
};

struct Spectrum {
    std::vector<Level> levels;
    Sector sector = Sector::none;
    SolverTag solver = SolverTag::interface_fd;
};

struct SquareWell {
    double v0 = 0.0; // depth (<0) or height (>0)
    double a = 0.0;  // V = v0 on |x| <= a
};

struct FiniteRangePotential {
    std::variant<SquareWell, contact::ThreeDeltaRealization> kind;
};

struct SolveOptions {
    exec_mode exec = exec_mode::openmp;
    double scan_step = 0.0;      // 0: choose from the trap scale
    double energy_floor = 1.0;   // >0 sentinel: choose from the coupling
    double bisect_rel_tol = 1e-12;
    double residual_tol = 1e-8;  // eigenpair residual per unit norm
    double grid_h = 0.0;         // 0: solver default (Numerov path only)
    // Keep the levels of the opposite parity instead.  A coupling acts on one
    // sector and is invisible on the other; this exposes the invisible side.
    bool complement_sector = false;
};

// Lowest n_levels eigenpairs with the origin condition imposed exactly
// through the connection matrix.  The coupling tag fixes the physical
// sector: value-jump and hard-core spectra are fermionic (odd), the
// derivative-jump spectrum is bosonic (even).  The doubled origin node is
// eliminated through one-sided second-order stencils, giving a nonsymmetric
// banded matrix; eigenpair residuals are asserted instead of symmetrizing.
// On an omega = 0 line only bound states (E < 0) are searched, and fewer
// than n_levels may exist; the returned spectrum holds what was found.
Spectrum solve_interface(const TrapSpec& trap, const contact::Coupling& coupling,
                         int n_levels, const Grid& grid, const SolveOptions& opt = {});

// Independent oracle: outward Numerov integration from both walls matched at
// the origin through the connection matrix (O(h^4)); on a ring the potential
// vanishes, so the transfer matrices are closed-form and the matching
// determinant is exact.  tol is the energy bisection tolerance.
Spectrum solve_numerov(const TrapSpec& trap, const contact::Coupling& coupling,
                       int n_levels, double tol, const SolveOptions& opt = {});

// Lowest n_levels eigenpairs of the symmetric tridiagonal problem restricted
// to a parity sector.  Dirac spikes are grid-deltas: strength u becomes a
// potential value u/h at the nearest grid point.
Spectrum solve_finite_range(const TrapSpec& trap, const FiniteRangePotential& pot,
                            contact::Parity sector, int n_levels, const Grid& grid);

struct ConvergenceRow {
    double a = 0.0;
    double energy = 0.0;
    double abs_error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double e_exact = 0.0;
    double slope = 0.0;  // log-log fit of error against spacing
    std::string warning; // set when the grid floor breaks monotonicity at the end
};

// Ground-energy error of the three-delta realization against the interface
// solution, for a decreasing list of spacings.
ConvergenceTable convergence_study(contact::EpsilonCoupling c, const TrapSpec& trap,
                                   const std::vector<double>& a_values,
                                   const SolveOptions& opt = {});

// Domain half-width covering the oscillator tails and shallow bound states:
// max(6/sqrt(omega), 10 |c|, 10) with |c| read from the coupling (1/|v| for
// the derivative-jump form, 0 for the hard core).
double default_half_width(double omega, const contact::Coupling& coupling);

Grid default_interface_grid(const TrapSpec& trap);
Grid default_numerov_grid(const TrapSpec& trap);
Grid default_finite_grid(const TrapSpec& trap);

// e^{i twist} as a real sign; throws unsupported unless twist is 0 or pi.
double ring_sigma_of(double twist);

Sector sector_of(const contact::Coupling& coupling);
contact::Parity parity_of(Sector s);

} // namespace fbdual::spectral
