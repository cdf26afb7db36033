#pragma once

// Algebra of the generalized four-parameter contact interaction in 1D:
// parameter validation, the transfer (connection) matrix at the origin,
// the two physical special cases (value-jump and derivative-jump couplings),
// and the finite-range three-delta realization.

#include <variant>

#include "fbdual/errors.hpp"

namespace fbdual::contact {

// The four real self-adjoint-extension parameters (alpha, beta, gamma, delta)
// subject to alpha*gamma - beta*delta = 1.  Units: alpha, gamma dimensionless;
// beta ~ 1/length; delta ~ length.
struct SaeParams {
    double alpha;
    double beta;
    double gamma;
    double delta;

    // Validates finiteness and the unit-determinant constraint to 1e-12,
    // then renormalizes (delta if beta != 0, else gamma) so the constraint
    // holds exactly; downstream determinant checks must not inherit
    // constructor rounding.
    SaeParams(double alpha_, double beta_, double gamma_, double delta_);

    double constraint_residual() const { return alpha * gamma - beta * delta - 1.0; }
};

// Value-jump coupling: phi(0+) = -phi(0-) = 2c * phi'(0+), derivative
// continuous.  c = 0 encodes the impenetrable (Dirichlet) limit, not the
// free particle: the value constraint collapses to phi(0+-) = 0.
struct EpsilonCoupling {
    double c = 0.0;
};

// Derivative-jump coupling: phi continuous, phi'(0+) - phi'(0-) = v * phi(0).
// v = 0 is the free particle.
struct DeltaCoupling {
    double v = 0.0;
};

// Impenetrable core, the v -> infinity limit of DeltaCoupling and the
// c -> 0 limit of EpsilonCoupling.  Kept as an explicit tag so the
// coupling map never divides by zero.
struct HardCore {};

using Coupling = std::variant<EpsilonCoupling, DeltaCoupling, HardCore>;

enum class Parity { odd, even };

// Maps boundary data (phi(0-), phi'(0-)) to (phi(0+), phi'(0+)).
// Unit determinant is inherited from the SaeParams constraint.
struct ConnectionMatrix {
    double m11, m12, m21, m22;

    double det() const { return m11 * m22 - m12 * m21; }
};

// Three Dirac spikes at -a, 0, +a whose a -> 0 limit realizes the point
// interaction.  Strengths have units 1/length.
struct ThreeDeltaRealization {
    double a;
    double u_minus;
    double u_zero;
    double u_plus;
};

// (-1, 0, -1, -4c): the value-jump interaction as a parameter quadruple.
SaeParams epsilon_as_chi(EpsilonCoupling c);

// (-1, -v, -1, 0): the derivative-jump interaction as a parameter quadruple.
SaeParams delta_as_chi(DeltaCoupling v);

// Transfer form [[-gamma, -delta], [-beta, -alpha]].
ConnectionMatrix connection_matrix(const SaeParams& p);

// Spike strengths u_+ = -1/a + (alpha-1)/delta, u_- = -1/a + (gamma-1)/delta,
// u_0 = (1-alpha*gamma)/(beta a^2) (0 when beta = 0).  Parameters with
// delta = 0 get the single-spike realization (0, -beta, 0) instead; that
// case divides by nothing and is exact at any a.
ThreeDeltaRealization three_delta_strengths(const SaeParams& p, double a);

// True iff the interaction acts trivially on the given parity sector:
// the derivative-jump coupling never sees odd functions (their value at the
// origin vanishes), the value-jump coupling never sees even ones (their
// derivative does).  The hard core leaves only odd functions alone.
bool annihilation_check(const Coupling& p, Parity sector);
bool annihilation_check(const SaeParams& p, Parity sector);

// Canonicalizes a parameter quadruple to its tagged coupling.  Recognizes
// (-1,0,-1,-4c), (-1,-v,-1,0), and the odd-sector-equivalent family
// (1,beta,1,0) which acts like EpsilonCoupling{1/beta}.  The caller keeps
// the original quadruple if it matters; only the physics is canonical.
Coupling coupling_from_params(const SaeParams& p);

// Connection matrix for a tagged coupling.  HardCore has no transfer-matrix
// representation (the two half lines decouple) and is rejected here; solvers
// branch on the tag before calling this.
ConnectionMatrix connection_matrix(const Coupling& p);

SaeParams params_of(const Coupling& p);

} // namespace fbdual::contact
