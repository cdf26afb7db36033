#include "fbdual/contact.hpp"

#include <cmath>
#include <string>

namespace fbdual::contact {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x))
        throw invalid_input(std::string("non-finite parameter: ") + name);
}

} // namespace

SaeParams::SaeParams(double alpha_, double beta_, double gamma_, double delta_)
    : alpha(alpha_), beta(beta_), gamma(gamma_), delta(delta_) {
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(gamma, "gamma");
    require_finite(delta, "delta");
    const double resid = alpha * gamma - beta * delta - 1.0;
    if (std::fabs(resid) > 1e-12)
        throw invalid_input("parameter constraint alpha*gamma - beta*delta = 1 violated, residual "
                            + std::to_string(resid));
    // Make the constraint exact so connection-matrix determinants are clean.
    if (beta != 0.0) {
        delta = (alpha * gamma - 1.0) / beta;
    } else {
        // beta = 0 requires alpha*gamma = 1; alpha = 0 cannot pass the check above.
        gamma = 1.0 / alpha;
    }
}

SaeParams epsilon_as_chi(EpsilonCoupling c) {
    require_finite(c.c, "c");
    return SaeParams(-1.0, 0.0, -1.0, -4.0 * c.c);
}

SaeParams delta_as_chi(DeltaCoupling v) {
    require_finite(v.v, "v");
    return SaeParams(-1.0, -v.v, -1.0, 0.0);
}

ConnectionMatrix connection_matrix(const SaeParams& p) {
    return ConnectionMatrix{-p.gamma, -p.delta, -p.beta, -p.alpha};
}

ThreeDeltaRealization three_delta_strengths(const SaeParams& p, double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw invalid_input("three-delta spacing a must be positive and finite");
    if (p.delta == 0.0) {
        // Derivative-jump class: a single spike of strength v = -beta, exact
        // at any spacing.  Anything else with delta = 0 has no realization
        // in this construction (the u_0 formula divides by beta * a^2 with
        // a non-cancelling numerator).
        if (p.beta == 0.0 && !(p.alpha == -1.0 && p.gamma == -1.0))
            throw unsupported("no three-delta realization for delta = 0, beta = 0, "
                              "(alpha, gamma) != (-1, -1)");
        if (p.beta != 0.0 && !(p.alpha == -1.0 && p.gamma == -1.0))
            throw unsupported("no three-delta realization for delta = 0 with "
                              "(alpha, gamma) != (-1, -1)");
        return ThreeDeltaRealization{a, 0.0, -p.beta, 0.0};
    }
    const double u_plus = -1.0 / a + (p.alpha - 1.0) / p.delta;
    const double u_minus = -1.0 / a + (p.gamma - 1.0) / p.delta;
    const double u_zero = (p.beta != 0.0) ? (1.0 - p.alpha * p.gamma) / (p.beta * a * a) : 0.0;
    return ThreeDeltaRealization{a, u_minus, u_zero, u_plus};
}

bool annihilation_check(const Coupling& p, Parity sector) {
    if (std::holds_alternative<HardCore>(p))
        return sector == Parity::odd; // odd functions vanish at 0 already
    if (auto* e = std::get_if<EpsilonCoupling>(&p)) {
        if (e->c == 0.0)
            return sector == Parity::odd; // Dirichlet limit, same as hard core
        return sector == Parity::even;
    }
    const auto& d = std::get<DeltaCoupling>(p);
    if (d.v == 0.0)
        return true; // free: trivial on both sectors
    return sector == Parity::odd;
}

bool annihilation_check(const SaeParams& p, Parity sector) {
    // Predicate on the connection matrix restricted to the sector's boundary
    // data: odd data is (0, s) and must map to itself; even data is (s, 0).
    const ConnectionMatrix m = connection_matrix(p);
    if (sector == Parity::odd)
        return m.m12 == 0.0 && m.m22 == 1.0;
    return m.m21 == 0.0 && m.m11 == 1.0;
}

Coupling coupling_from_params(const SaeParams& p) {
    const double tol = 1e-12;
    auto near = [tol](double x, double y) { return std::fabs(x - y) <= tol; };
    if (near(p.alpha, -1.0) && near(p.gamma, -1.0) && p.beta == 0.0)
        return EpsilonCoupling{-p.delta / 4.0};
    if (near(p.alpha, -1.0) && near(p.gamma, -1.0) && near(p.delta, 0.0))
        return DeltaCoupling{-p.beta};
    // (1, beta, 1, 0) acts on odd functions exactly like the value-jump
    // coupling with c = 1/beta; canonicalize it to that form.
    if (near(p.alpha, 1.0) && near(p.gamma, 1.0) && near(p.delta, 0.0)) {
        if (p.beta == 0.0)
            throw unsupported("(1, 0, 1, 0) has no finite canonical coupling");
        return EpsilonCoupling{1.0 / p.beta};
    }
    throw unsupported("parameter quadruple is not in a recognized coupling family");
}

ConnectionMatrix connection_matrix(const Coupling& p) {
    return connection_matrix(params_of(p));
}

SaeParams params_of(const Coupling& p) {
    if (auto* e = std::get_if<EpsilonCoupling>(&p))
        return epsilon_as_chi(*e);
    if (auto* d = std::get_if<DeltaCoupling>(&p))
        return delta_as_chi(*d);
    throw unsupported("the hard core has no transfer-matrix parameters; "
                      "solvers must branch on the tag");
}

} // namespace fbdual::contact
