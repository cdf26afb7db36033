#pragma once

// The fermion-boson map in one dimension: the coupling involution v = 1/c,
// the sign-flip wavefunction transform, a two-body spectrum-equivalence
// driver, the N-body contact-condition equivalence on sampled boundary data,
// and the ring twist rule tying the two statistics together.

#include <vector>

#include "fbdual/contact.hpp"
#include "fbdual/spectral.hpp"

namespace fbdual::duality {

// v = 1/c with the impenetrable tag at the endpoint: the value-jump c = 0
// maps to the hard core and back.  The free boson (v = 0) has no dual in
// the finite-parameter family and is rejected.
contact::Coupling dual_of(const contact::Coupling& coupling);

// phi(x) -> sgn(x) phi(x) on the doubled-origin grid; the 0- slot counts as
// x < 0.  Input must be odd (fermionic); the output is even, the map is an
// involution and an exact isometry of the grid norm.  On a ring the result
// lives in the opposite twist sector, so the stored sigma flips sign.
spectral::Wavefunction transform(const spectral::Wavefunction& phi_minus);

struct LevelPair {
    double e_fermi = 0.0;
    double e_bose = 0.0;     // from the independent shooting solver
    double rel_de = 0.0;
    double wf_distance = 0.0; // sup norm, minimized over the global sign
};

struct DualityReport {
    double c = 0.0;
    double v = 0.0; // infinite for the hard-core side
    std::vector<LevelPair> level_pairs;
    double energy_tol = 0.0;
    double wf_tol = 0.0;
    bool pass = false;
};

// Solves the odd problem with the value-jump coupling and the even problem
// with its dual, pairs levels in ascending order, and compares energies and
// sign-transformed states.  Energies on the bosonic side come from the
// shooting solver (an independent discretization); the pointwise state
// comparison uses a second interface solve so both states share one grid.
// Line traps only; ring equivalence runs through the ring solvers and the
// Bethe module, where the twist shift is handled explicitly.
DualityReport verify_two_body(contact::EpsilonCoupling c, const spectral::TrapSpec& trap,
                              int n_levels, double tol);

// Two-sided boundary data at a contact hyperplane between two coordinates:
// limits of Psi and of the antisymmetrized normal derivative D Psi taken
// from the two sides of the coincidence plane.
struct ContactData {
    double p_plus = 0.0;  // Psi on the + side
    double p_minus = 0.0; // Psi on the - side
    double d_plus = 0.0;  // D Psi on the + side
    double d_minus = 0.0; // D Psi on the - side
};

// Data satisfying the fermionic value-jump condition with strength c:
// Psi|+ = -Psi|- = c D Psi, with D Psi continuous.  d is the derivative datum.
ContactData fermi_contact_family(double c, double d);

// Data satisfying the bosonic derivative-jump condition with strength v:
// D Psi|+ = -D Psi|- = v Psi, with Psi continuous.  w is the value datum;
// for infinite v (hard core) w is the derivative datum and Psi vanishes.
ContactData bose_contact_family(double v, double w);

bool satisfies_fermi_contact(const ContactData& d, double c, double tol);
bool satisfies_bose_contact(const ContactData& d, double v, double tol);

// The sign transform across the hyperplane: minus-side limits flip sign.
ContactData flip_minus_side(const ContactData& d);

// Checks, on the given sampled boundary data, that the sign flip carries the
// fermionic contact condition with strength c into the bosonic one with
// strength 1/c and vice versa (c = 0 pairs with the hard core).
bool nbody_contact_equivalence_check(double c, const std::vector<ContactData>& fermi_trials,
                                     const std::vector<ContactData>& bose_trials, double tol);

struct TwistPair {
    int n = 0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
};

// On a ring, N-particle bosonic and fermionic descriptions of one system
// carry twists related by lambda_minus = lambda_plus + (N-1) pi (mod 2 pi).
TwistPair twist_rule(int n, double lambda_plus);
double dual_twist_minus(int n, double lambda_plus);
double dual_twist_plus(int n, double lambda_minus);

} // namespace fbdual::duality
