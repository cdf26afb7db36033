#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "fbdual/bethe.hpp"
#include "fbdual/duality.hpp"
#include "fbdual/spectral.hpp"

using namespace fbdual;
using namespace fbdual::bethe;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("ring gas specification validation") {
    CHECK_NOTHROW(RingSpec(2, 10.0, 1.0, 0.0));
    CHECK_NOTHROW(RingSpec(5, 3.0, kInf, kPi));
    CHECK_THROWS_AS(RingSpec(1, 10.0, 1.0, 0.0), invalid_input);
    CHECK_THROWS_AS(RingSpec(2, 0.0, 1.0, 0.0), invalid_input);
    CHECK_THROWS_AS(RingSpec(2, 10.0, -0.5, 0.0), unsupported);
    CHECK_THROWS_AS(RingSpec(2, 10.0, std::nan(""), 0.0), unsupported);
    CHECK_THROWS_AS(RingSpec(2, 10.0, 1.0, kInf), invalid_input);
    // Twists reduce into [0, 2 pi).
    CHECK(RingSpec(2, 10.0, 1.0, -kPi).twist == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(RingSpec(2, 10.0, 1.0, 4.0 * kPi).twist == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("quantum number validation") {
    const RingSpec even(2, 10.0, 1.0, 0.0);
    const RingSpec odd(3, 10.0, 1.0, 0.0);
    CHECK_THROWS_AS(solve_roots(even, {0.5}), invalid_input);            // wrong count
    CHECK_THROWS_AS(solve_roots(even, {0.5, 0.5}), invalid_input);       // not increasing
    CHECK_THROWS_AS(solve_roots(even, {0.0, 1.0}), invalid_input);       // wrong class
    CHECK_THROWS_AS(solve_roots(odd, {-0.5, 0.5, 1.5}), invalid_input);  // wrong class
    CHECK_NOTHROW(solve_roots(even, {-0.5, 0.5}));
    CHECK_NOTHROW(solve_roots(odd, {-1.0, 0.0, 1.0}));
}

TEST_CASE("ground quantum numbers are symmetric consecutive sets") {
    CHECK(ground_quantum_numbers(RingSpec(2, 10.0, 1.0, 0.0)) ==
          std::vector<double>{-0.5, 0.5});
    CHECK(ground_quantum_numbers(RingSpec(3, 10.0, 1.0, 0.0)) ==
          std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(ground_quantum_numbers(RingSpec(4, 10.0, 1.0, 0.0)) ==
          std::vector<double>{-1.5, -0.5, 0.5, 1.5});
    // A twist of pi leaves two equal-energy centerings; the centered set wins.
    CHECK(ground_quantum_numbers(RingSpec(2, 10.0, 1.0, kPi)) ==
          std::vector<double>{-0.5, 0.5});
}

TEST_CASE("hard-core limit fills free decoupled momenta") {
    // N = 3 on L = 2 pi: roots are exactly {-1, 0, 1} and E = 1.
    BetheState st = ground_state(RingSpec(3, 2.0 * kPi, kInf, 0.0));
    REQUIRE(st.roots.size() == 3);
    CHECK(st.roots[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(st.roots[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(st.roots[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(st.energy == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(st.momentum == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(st.residual == 0.0);
}

TEST_CASE("hard-core periodic gas equals twist-shifted free fermions") {
    // N = 4 periodic impenetrable bosons match free fermions with twist
    // (N-1) pi = pi: both give E = 10 pi^2 / L^2.
    const double L = 7.0;
    const BetheState st = ground_state(RingSpec(4, L, kInf, 0.0));
    const double lm = duality::dual_twist_minus(4, 0.0);
    CHECK(lm == doctest::Approx(kPi).epsilon(1e-14));
    // Free-fermion filling of k = (2 pi m + pi)/L: +-pi/L and +-3pi/L.
    const double expect = 0.5 * (2.0 * (kPi / L) * (kPi / L) + 2.0 * 9.0 * (kPi / L) * (kPi / L));
    CHECK(st.energy == doctest::Approx(expect).epsilon(1e-13));
    // And with N = 3 the shift is 2 pi = 0: periodic matches periodic.
    const BetheState st3 = ground_state(RingSpec(3, L, kInf, 0.0));
    const double expect3 = (2.0 * kPi / L) * (2.0 * kPi / L); // k = 0, +-2pi/L
    CHECK(st3.energy == doctest::Approx(expect3).epsilon(1e-13));
    CHECK(duality::dual_twist_minus(3, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("two-particle ground energies at reference couplings") {
    // Fixed points of L k = pi - 2 atan(2 k / v) with E = k^2, L = 10.
    const double expect[][2] = {{0.5, 0.0346523232},
                                {1.0, 0.0521872875},
                                {2.0, 0.0690467818},
                                {8.0, 0.0895360736}};
    for (const auto& row : expect) {
        BetheState st = ground_state(RingSpec(2, 10.0, row[0], 0.0));
        CHECK(st.energy == doctest::Approx(row[1]).epsilon(1e-8));
        CHECK(st.roots[1] == doctest::Approx(-st.roots[0]).epsilon(1e-10));
        CHECK(st.residual < 1e-10);
    }
}

TEST_CASE("ground energy grows with the coupling toward the hard-core limit") {
    const double tg = ground_state(RingSpec(3, 10.0, kInf, 0.0)).energy;
    double prev = -1.0;
    for (double v : {0.0, 0.05, 0.5, 2.0, 20.0}) {
        const double e = ground_state(RingSpec(3, 10.0, v, 0.0)).energy;
        CHECK(e > prev);
        CHECK(e < tg);
        prev = e;
    }
}

TEST_CASE("free limit collapses the periodic ground state") {
    BetheState st = ground_state(RingSpec(4, 10.0, 0.0, 0.0));
    CHECK(st.energy == doctest::Approx(0.0).epsilon(1e-15));
    for (double k : st.roots)
        CHECK(std::fabs(k) < 1e-14);
    // Excited sets keep a nonzero limit: the phase shifts saturate at +-pi.
    BetheState ex = solve_roots(RingSpec(2, 10.0, 0.0, 0.0), {-0.5, 1.5});
    CHECK(ex.roots[0] == doctest::Approx((-kPi + kPi) / 10.0).epsilon(1e-12));
    CHECK(ex.roots[1] == doctest::Approx((3.0 * kPi - kPi) / 10.0).epsilon(1e-12));
    // Continuity: a tiny coupling lands near the limit from above.
    BetheState near0 = solve_roots(RingSpec(2, 10.0, 1e-4, 0.0), {-0.5, 1.5});
    CHECK(std::fabs(near0.roots[0] - ex.roots[0]) < 1e-2);
    CHECK(std::fabs(near0.roots[1] - ex.roots[1]) < 1e-2);
    CHECK(near0.energy > ex.energy - 1e-9);
}

TEST_CASE("small couplings go through continuation") {
    // The ground pair nearly coincides at v = 0.01; the solve must still
    // converge and order the roots.
    BetheState st = ground_state(RingSpec(2, 10.0, 0.01, 0.0));
    CHECK(st.roots[0] < st.roots[1]);
    CHECK(st.energy > 0.0);
    CHECK(st.energy < ground_state(RingSpec(2, 10.0, 0.05, 0.0)).energy);
    CHECK(st.residual < 1e-10);
}

TEST_CASE("momentum matches the quantum-number identity") {
    const RingSpec ring(3, 7.0, 2.5, 1.0);
    BetheState st = solve_roots(ring, {-1.0, 0.0, 2.0});
    const double expect = (2.0 * kPi * 1.0 + 3.0 * 1.0) / 7.0;
    CHECK(st.momentum == doctest::Approx(expect).epsilon(1e-12));
    CHECK(st.energy > ground_state(ring).energy);
}

TEST_CASE("twist moves the spectrum continuously and periodically") {
    const double e0 = ground_state(RingSpec(2, 10.0, 1.0, 0.0)).energy;
    const double e_small = ground_state(RingSpec(2, 10.0, 1.0, 1e-6)).energy;
    const double e_wrap = ground_state(RingSpec(2, 10.0, 1.0, 2.0 * kPi)).energy;
    CHECK(std::fabs(e_small - e0) < 1e-5);
    CHECK(e_wrap == e0);
}

TEST_CASE("dual fermion energy runs on the mapped coupling and twist") {
    // Antiperiodic fermions with c = 1 map to periodic bosons with v = 1.
    const double e = dual_fermion_energy(2, 10.0, contact::EpsilonCoupling{1.0}, kPi);
    CHECK(e == doctest::Approx(0.0521872875).epsilon(1e-8));
    // Direct check against the antiperiodic relative-coordinate eigenvalue.
    const spectral::TrapSpec anti = spectral::TrapSpec::ring(10.0, kPi);
    const double direct = spectral::solve_numerov(anti, contact::Coupling{contact::EpsilonCoupling{1.0}},
                                                  1, 1e-12)
                              .levels[0].energy;
    CHECK(std::fabs(e - direct) < 1e-8);
    CHECK_THROWS_AS(dual_fermion_energy(2, 10.0, contact::EpsilonCoupling{0.0}, kPi),
                    unsupported);
    CHECK_THROWS_AS(dual_fermion_energy(2, 10.0, contact::EpsilonCoupling{-1.0}, kPi),
                    unsupported);
}

TEST_CASE("three-particle dual consistency in the impenetrable regime") {
    // With N = 3 the twist shift vanishes, so a strongly repulsive gas under
    // periodic fermionic boundary conditions is nearly free-fermion filling.
    const double L = 10.0;
    const double e = dual_fermion_energy(3, L, contact::EpsilonCoupling{0.001}, 0.0);
    const double tg = ground_state(RingSpec(3, L, kInf, 0.0)).energy;
    CHECK(std::fabs(e - tg) / tg < 5e-3);
}
