#include "fbdual/duality.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "fbdual/errors.hpp"

namespace fbdual::duality {

namespace {

using spectral::Spectrum;
using spectral::Wavefunction;

constexpr double kPi = 3.14159265358979323846;

double mod_two_pi(double x) {
    double r = std::fmod(x, 2.0 * kPi);
    if (r < 0.0)
        r += 2.0 * kPi;
    if (r >= 2.0 * kPi)
        r = 0.0;
    return r + 0.0; // flush -0 so exact multiples print as 0
}

double data_scale(const ContactData& d) {
    const double s = std::fmax(std::fmax(std::fabs(d.p_plus), std::fabs(d.p_minus)),
                               std::fmax(std::fabs(d.d_plus), std::fabs(d.d_minus)));
    return std::fmax(s, 1e-300);
}

// Largest pointwise gap between a and s*b over the shared grid.
double sup_distance(const Wavefunction& a, const Wavefunction& b, double s) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::fmax(m, std::fabs(a.values[i] - s * b.values[i]));
    return m;
}

} // namespace

contact::Coupling dual_of(const contact::Coupling& coupling) {
    if (const auto* e = std::get_if<contact::EpsilonCoupling>(&coupling)) {
        if (e->c == 0.0)
            return contact::HardCore{};
        return contact::DeltaCoupling{1.0 / e->c};
    }
    if (const auto* d = std::get_if<contact::DeltaCoupling>(&coupling)) {
        if (d->v == 0.0)
            throw unsupported("the free boson has no dual in the finite-parameter family");
        return contact::EpsilonCoupling{1.0 / d->v};
    }
    return contact::EpsilonCoupling{0.0};
}

Wavefunction transform(const Wavefunction& phi_minus) {
    const double score = phi_minus.parity_score();
    if (!(score < -0.5))
        throw sector_error("the sign transform acts on odd input; parity score "
                           + std::to_string(score));
    Wavefunction out = phi_minus;
    for (std::size_t i = 0; i <= out.grid.origin_left; ++i)
        out.values[i] = -out.values[i];
    if (out.grid.ring)
        out.grid.ring_sigma = -out.grid.ring_sigma;
    return out;
}

DualityReport verify_two_body(contact::EpsilonCoupling c, const spectral::TrapSpec& trap,
                              int n_levels, double tol) {
    if (trap.is_ring())
        throw unsupported("the two-body driver runs on a line; ring equivalence goes "
                          "through the twist-shifted ring solvers");
    if (n_levels <= 0)
        throw invalid_input("n_levels must be positive");
    if (!(tol > 0.0))
        throw invalid_input("tolerance must be positive");

    const contact::Coupling fermi = c;
    const contact::Coupling bose = dual_of(fermi);

    const spectral::Grid grid = spectral::default_interface_grid(trap);
    const Spectrum sf = spectral::solve_interface(trap, fermi, n_levels, grid);
    const Spectrum sb = spectral::solve_interface(trap, bose, n_levels, grid);
    const Spectrum sn = spectral::solve_numerov(trap, bose, n_levels, 1e-10);

    if (sf.levels.size() != sb.levels.size() || sf.levels.size() != sn.levels.size())
        throw solver_inconsistency("the dual solves returned different level counts: "
                                   + std::to_string(sf.levels.size()) + " odd vs "
                                   + std::to_string(sb.levels.size()) + " even vs "
                                   + std::to_string(sn.levels.size()) + " shooting");

    DualityReport rep;
    rep.c = c.c;
    rep.v = c.c != 0.0 ? 1.0 / c.c : std::numeric_limits<double>::infinity();
    rep.energy_tol = tol;
    rep.wf_tol = 1e-4;
    rep.pass = true;
    for (std::size_t k = 0; k < sf.levels.size(); ++k) {
        LevelPair p;
        p.e_fermi = sf.levels[k].energy;
        p.e_bose = sn.levels[k].energy;
        const double denom =
            std::fmax(std::fmax(std::fabs(p.e_fermi), std::fabs(p.e_bose)), 1e-300);
        p.rel_de = std::fabs(p.e_fermi - p.e_bose) / denom;
        const Wavefunction mapped = transform(sf.levels[k].state);
        p.wf_distance = std::fmin(sup_distance(mapped, sb.levels[k].state, 1.0),
                                  sup_distance(mapped, sb.levels[k].state, -1.0));
        if (p.rel_de > rep.energy_tol || p.wf_distance > rep.wf_tol)
            rep.pass = false;
        rep.level_pairs.push_back(p);
    }
    return rep;
}

ContactData fermi_contact_family(double c, double d) {
    if (!std::isfinite(c) || !std::isfinite(d))
        throw invalid_input("contact data must be finite");
    return ContactData{c * d, -c * d, d, d};
}

ContactData bose_contact_family(double v, double w) {
    if (!std::isfinite(w))
        throw invalid_input("contact data must be finite");
    if (std::isinf(v))
        return ContactData{0.0, 0.0, w, -w};
    if (!std::isfinite(v))
        throw invalid_input("coupling must be finite or the hard-core infinity");
    return ContactData{w, w, v * w, -v * w};
}

bool satisfies_fermi_contact(const ContactData& d, double c, double tol) {
    const double s = data_scale(d);
    if (std::fabs(d.d_plus - d.d_minus) > tol * s)
        return false;
    if (c == 0.0)
        return std::fabs(d.p_plus) <= tol * s && std::fabs(d.p_minus) <= tol * s;
    return std::fabs(d.p_plus + d.p_minus) <= tol * s
           && std::fabs(d.p_plus - c * d.d_plus) <= tol * s * std::fmax(1.0, std::fabs(c))
           && std::fabs(d.p_minus + c * d.d_minus) <= tol * s * std::fmax(1.0, std::fabs(c));
}

bool satisfies_bose_contact(const ContactData& d, double v, double tol) {
    const double s = data_scale(d);
    if (std::fabs(d.d_plus + d.d_minus) > tol * s)
        return false;
    if (std::isinf(v))
        return std::fabs(d.p_plus) <= tol * s && std::fabs(d.p_minus) <= tol * s;
    return std::fabs(d.p_plus - d.p_minus) <= tol * s
           && std::fabs(d.d_plus - v * d.p_plus) <= tol * s * std::fmax(1.0, std::fabs(v))
           && std::fabs(d.d_minus + v * d.p_minus) <= tol * s * std::fmax(1.0, std::fabs(v));
}

ContactData flip_minus_side(const ContactData& d) {
    return ContactData{d.p_plus, -d.p_minus, d.d_plus, -d.d_minus};
}

bool nbody_contact_equivalence_check(double c, const std::vector<ContactData>& fermi_trials,
                                     const std::vector<ContactData>& bose_trials, double tol) {
    if (!std::isfinite(c))
        throw invalid_input("coupling must be finite");
    const double v = c != 0.0 ? 1.0 / c : std::numeric_limits<double>::infinity();
    for (const ContactData& d : fermi_trials) {
        if (!satisfies_fermi_contact(d, c, tol))
            return false;
        if (!satisfies_bose_contact(flip_minus_side(d), v, tol))
            return false;
    }
    for (const ContactData& d : bose_trials) {
        if (!satisfies_bose_contact(d, v, tol))
            return false;
        if (!satisfies_fermi_contact(flip_minus_side(d), c, tol))
            return false;
    }
    return true;
}

TwistPair twist_rule(int n, double lambda_plus) {
    if (n < 2)
        throw invalid_input("the twist rule needs at least two particles");
    if (!std::isfinite(lambda_plus))
        throw invalid_input("twist must be finite");
    TwistPair t;
    t.n = n;
    t.lambda_plus = mod_two_pi(lambda_plus);
    t.lambda_minus = dual_twist_minus(n, lambda_plus);
    return t;
}

double dual_twist_minus(int n, double lambda_plus) {
    if (n < 2)
        throw invalid_input("the twist rule needs at least two particles");
    return mod_two_pi(lambda_plus + (n - 1) * kPi);
}

double dual_twist_plus(int n, double lambda_minus) {
    if (n < 2)
        throw invalid_input("the twist rule needs at least two particles");
    return mod_two_pi(lambda_minus - (n - 1) * kPi);
}

} // namespace fbdual::duality
