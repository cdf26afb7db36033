#pragma once

// Exact spectrum of N derivative-jump (delta) interacting bosons on a ring
// of length L with a boundary twist, via the coordinate Bethe ansatz.
// Repulsive couplings only; energies use the (1/2) sum k_j^2 normalization
// of the N-body Hamiltonian with -(1/2) d^2/dx^2 kinetic terms.

#include <vector>

#include "fbdual/contact.hpp"

namespace fbdual::bethe {

struct RingSpec {
    int n = 0;           // particle count
    double length = 0.0;
    double v = 0.0;      // repulsive coupling; infinity means the hard core
    double twist = 0.0;  // reduced into [0, 2 pi)

    RingSpec(int n, double length, double v, double twist);
};

struct BetheState {
    std::vector<double> quantum_numbers; // integers (odd N) or half-integers (even N)
    std::vector<double> roots;           // strictly increasing for v > 0
    double energy = 0.0;                 // (1/2) sum k_j^2
    double momentum = 0.0;               // sum k_j = (2 pi sum I + N twist) / L
    double residual = 0.0;               // sup norm of the root equations at the solution
};

// Solves L k_j = 2 pi I_j + twist - sum_{l != j} 2 atan((k_j - k_l)/v) by
// damped Newton from the decoupled momenta, with continuation in v for very
// small couplings.  v = 0 returns the v -> 0+ limit of the branch (clustered
// roots), and an infinite v returns the decoupled momenta exactly.  Quantum
// numbers must be strictly increasing and all integer or all half-integer
// as the parity of N demands.
BetheState solve_roots(const RingSpec& ring, const std::vector<double>& quantum_numbers);

// N consecutive integers or half-integers, centered to minimize the
// decoupled energy under the twist (ties resolve toward a centered set).
std::vector<double> ground_quantum_numbers(const RingSpec& ring);

BetheState ground_state(const RingSpec& ring);

// Ground energy of N fermions with the value-jump coupling c and fermionic
// twist lambda_minus, computed on the bosonic side: v = 1/c and
// lambda_plus = lambda_minus - (N-1) pi.  Repulsive duals only (c > 0).
double dual_fermion_energy(int n, double length, contact::EpsilonCoupling c,
                           double lambda_minus);

} // namespace fbdual::bethe
