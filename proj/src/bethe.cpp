#include "fbdual/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "banded.hpp"
#include "fbdual/duality.hpp"
#include "fbdual/errors.hpp"

namespace fbdual::bethe {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normalize_twist(double t) {
    double r = std::fmod(t, 2.0 * kPi);
    if (r < 0.0)
        r += 2.0 * kPi;
    if (r >= 2.0 * kPi)
        r = 0.0;
    return r + 0.0; // flush -0 so exact multiples print as 0
}

void check_quantum_numbers(const RingSpec& ring, const std::vector<double>& qn) {
    if (static_cast<int>(qn.size()) != ring.n)
        throw invalid_input("need exactly one quantum number per particle");
    const bool half = ring.n % 2 == 0;
    for (std::size_t j = 0; j < qn.size(); ++j) {
        const double shifted = half ? qn[j] + 0.5 : qn[j];
        if (std::fabs(shifted - std::round(shifted)) > 1e-9)
            throw invalid_input(half ? "even particle counts take half-integer quantum numbers"
                                     : "odd particle counts take integer quantum numbers");
        if (j > 0 && !(qn[j] > qn[j - 1]))
            throw invalid_input("quantum numbers must be strictly increasing");
    }
}

std::vector<double> decoupled_roots(const RingSpec& ring, const std::vector<double>& qn) {
    std::vector<double> k(qn.size());
    for (std::size_t j = 0; j < qn.size(); ++j)
        k[j] = (2.0 * kPi * qn[j] + ring.twist) / ring.length;
    return k;
}

// Sup norm of the root equations at k.
double residual_at(const RingSpec& ring, double v, const std::vector<double>& qn,
                   const std::vector<double>& k) {
    const auto n = qn.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double f = ring.length * k[j] - 2.0 * kPi * qn[j] - ring.twist;
        for (std::size_t l = 0; l < n; ++l)
            if (l != j)
                f += 2.0 * std::atan((k[j] - k[l]) / v);
        worst = std::fmax(worst, std::fabs(f));
    }
    return worst;
}

// One damped Newton solve at fixed coupling, warm-started from k.
void newton_solve(const RingSpec& ring, double v, const std::vector<double>& qn,
                  std::vector<double>& k, double& residual) {
    const auto n = qn.size();
    const auto ni = static_cast<int>(n);
    const double tol = 1e-12
                       * std::fmax(1.0, 2.0 * kPi
                                            * (std::fmax(std::fabs(qn.front()),
                                                         std::fabs(qn.back()))
                                               + 1.0));
    residual = residual_at(ring, v, qn, k);
    for (int iter = 0; iter < 200; ++iter) {
        if (residual <= tol)
            return;
        std::vector<double> jac(n * n, 0.0), rhs(n);
        for (std::size_t j = 0; j < n; ++j) {
            double f = ring.length * k[j] - 2.0 * kPi * qn[j] - ring.twist;
            double diag = ring.length;
            for (std::size_t l = 0; l < n; ++l) {
                if (l == j)
                    continue;
                const double dk = k[j] - k[l];
                f += 2.0 * std::atan(dk / v);
                const double kern = 2.0 * v / (v * v + dk * dk);
                diag += kern;
                jac[j * n + l] = -kern;
            }
            jac[j * n + j] = diag;
            rhs[j] = -f;
        }
        detail::dense_solve(jac, rhs, ni);
        double t = 1.0;
        std::vector<double> trial(n);
        while (true) {
            for (std::size_t j = 0; j < n; ++j)
                trial[j] = k[j] + t * rhs[j];
            const double r = residual_at(ring, v, qn, trial);
            if (r < residual || t <= 1.0 / 1024.0) {
                k = trial;
                residual = r;
                break;
            }
            t *= 0.5;
        }
    }
    if (residual > tol)
        throw convergence_error("root iteration stalled at residual "
                                + std::to_string(residual));
}

} // namespace

RingSpec::RingSpec(int n_, double length_, double v_, double twist_)
    : n(n_), length(length_), v(v_), twist(normalize_twist(twist_)) {
    if (n < 2)
        throw invalid_input("a ring gas needs at least two particles");
    if (!(length > 0.0) || !std::isfinite(length))
        throw invalid_input("ring length must be positive and finite");
    if (std::isnan(v) || v < 0.0)
        throw unsupported("attractive couplings form bound strings; only v >= 0 is in scope");
    if (!std::isfinite(twist_))
        throw invalid_input("twist must be finite");
}

BetheState solve_roots(const RingSpec& ring, const std::vector<double>& quantum_numbers) {
    check_quantum_numbers(ring, quantum_numbers);
    BetheState st;
    st.quantum_numbers = quantum_numbers;
    st.roots = decoupled_roots(ring, quantum_numbers);
    const auto n = quantum_numbers.size();

    if (std::isinf(ring.v)) {
        st.residual = 0.0; // the phase shifts vanish identically
    } else if (ring.v == 0.0) {
        // v -> 0+ limit: each phase shift saturates at +-pi, so the ordered
        // roots shift by pi (N + 1 - 2j) / L; consecutive ground sets cluster.
        for (std::size_t j = 0; j < n; ++j)
            st.roots[j] = (2.0 * kPi * quantum_numbers[j] + ring.twist
                           - kPi * (2.0 * (static_cast<double>(j) + 1.0) - 1.0
                                    - static_cast<double>(n)))
                          / ring.length;
        st.residual = 0.0;
    } else {
        double v_work = ring.v;
        if (ring.v < 0.05) {
            // Roots nearly coincide at small v; walk the branch down from a
            // comfortably repulsive coupling instead of starting cold.
            v_work = 1.0;
            while (true) {
                newton_solve(ring, v_work, quantum_numbers, st.roots, st.residual);
                if (v_work == ring.v)
                    break;
                v_work = std::fmax(0.5 * v_work, ring.v);
            }
        } else {
            newton_solve(ring, v_work, quantum_numbers, st.roots, st.residual);
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(st.roots[j]))
            throw solver_inconsistency("non-finite root");
        if (j > 0 && ring.v > 0.0 && !(st.roots[j] > st.roots[j - 1]))
            throw solver_inconsistency("roots must stay real and strictly increasing "
                                       "in the repulsive regime");
    }

    double sum_i = 0.0;
    for (double i : quantum_numbers)
        sum_i += i;
    for (double k : st.roots) {
        st.energy += 0.5 * k * k;
        st.momentum += k;
    }
    const double p_expect =
        (2.0 * kPi * sum_i + static_cast<double>(ring.n) * ring.twist) / ring.length;
    if (std::fabs(st.momentum - p_expect) > 1e-10 * std::fmax(1.0, std::fabs(p_expect)))
        throw solver_inconsistency("total momentum drifted off the quantum-number value");
    return st;
}

std::vector<double> ground_quantum_numbers(const RingSpec& ring) {
    const int n = ring.n;
    const double base = n % 2 == 0 ? 0.5 : 0.0;
    const int centers[] = {0, 1, -1, 2, -2};
    std::vector<double> best;
    double best_e = 0.0;
    for (int m : centers) {
        std::vector<double> qn(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            qn[static_cast<std::size_t>(j)] = m + base + j - n / 2;
        double e = 0.0;
        for (double i : qn) {
            const double k = (2.0 * kPi * i + ring.twist) / ring.length;
            e += 0.5 * k * k;
        }
        if (best.empty() || e < best_e * (1.0 - 1e-14) - 1e-300) {
            best = std::move(qn);
            best_e = e;
        }
    }
    return best;
}

BetheState ground_state(const RingSpec& ring) {
    return solve_roots(ring, ground_quantum_numbers(ring));
}

double dual_fermion_energy(int n, double length, contact::EpsilonCoupling c,
                           double lambda_minus) {
    if (!(c.c > 0.0) || !std::isfinite(c.c))
        throw unsupported("attractive or impenetrable duals are out of the repulsive-gas "
                          "scope; c must be positive and finite");
    const double lambda_plus = duality::dual_twist_plus(n, lambda_minus);
    const RingSpec ring(n, length, 1.0 / c.c, lambda_plus);
    return ground_state(ring).energy;
}

} // namespace fbdual::bethe
