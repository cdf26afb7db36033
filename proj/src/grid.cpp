#include <algorithm>
#include <cmath>
#include <string>

#include "fbdual/spectral.hpp"

namespace fbdual::spectral {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

double normalize_twist(double t) {
    if (!std::isfinite(t))
        throw invalid_input("non-finite twist");
    double r = std::fmod(t, two_pi);
    if (r < 0.0)
        r += two_pi;
    return r;
}

} // namespace

TrapSpec TrapSpec::line(double omega, double half_width) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw invalid_input("trap frequency must be finite and >= 0");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw invalid_input("line half-width must be positive");
    TrapSpec t;
    t.omega = omega;
    t.geometry = LineGeometry{half_width};
    return t;
}

TrapSpec TrapSpec::ring(double length, double twist) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw invalid_input("ring length must be positive");
    TrapSpec t;
    t.omega = 0.0;
    t.geometry = RingGeometry{length, normalize_twist(twist)};
    return t;
}

double ring_sigma_of(double twist) {
    const double t = normalize_twist(twist);
    const double pi = two_pi / 2.0;
    if (std::fabs(t) < 1e-12 || std::fabs(t - two_pi) < 1e-12)
        return 1.0;
    if (std::fabs(t - pi) < 1e-12)
        return -1.0;
    throw unsupported("ring solvers run in real arithmetic; only twist 0 or pi is supported");
}

Grid Grid::line(double half_width, std::size_t per_side) {
    if (!(half_width > 0.0) || per_side < 2)
        throw invalid_input("grid: need positive half-width and at least 2 points per side");
    Grid g;
    g.h = half_width / static_cast<double>(per_side);
    g.ring = false;
    const std::size_t m = per_side;
    g.xs.resize(2 * m + 2);
    for (std::size_t i = 0; i < m; ++i)
        g.xs[i] = -half_width + static_cast<double>(i) * g.h;
    g.xs[m] = 0.0;     // 0-
    g.xs[m + 1] = 0.0; // 0+
    for (std::size_t k = 1; k <= m; ++k)
        g.xs[m + 1 + k] = static_cast<double>(k) * g.h;
    g.origin_left = m;
    return g;
}

Grid Grid::ring_grid(double length, std::size_t per_side, double sigma) {
    if (!(length > 0.0) || per_side < 2)
        throw invalid_input("grid: need positive ring length and at least 2 points per side");
    if (sigma != 1.0 && sigma != -1.0)
        throw invalid_input("ring grid sigma must be +1 or -1");
    Grid g;
    const std::size_t m = per_side;
    g.h = (length / 2.0) / static_cast<double>(m);
    g.ring = true;
    g.ring_sigma = sigma;
    g.xs.resize(2 * m + 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        g.xs[i] = -static_cast<double>(m - 1 - i) * g.h;
    g.xs[m - 1] = 0.0; // 0-
    g.xs[m] = 0.0;     // 0+
    for (std::size_t j = 1; j <= m; ++j)
        g.xs[m + j] = static_cast<double>(j) * g.h;
    g.origin_left = m - 1;
    return g;
}

std::size_t Grid::mirror(std::size_t i) const {
    if (ring) {
        const std::size_t antipode = xs.size() - 1;
        return i == antipode ? antipode : antipode - 1 - i;
    }
    return xs.size() - 1 - i;
}

double Wavefunction::norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double w = grid.xs[i + 1] - grid.xs[i];
        s += 0.5 * w * (values[i] * values[i] + values[i + 1] * values[i + 1]);
    }
    if (grid.ring) // wrap segment from the antipode back to the first node
        s += 0.5 * grid.h * (values.back() * values.back() + values.front() * values.front());
    return std::sqrt(s);
}

void Wavefunction::normalize() {
    const double n = norm();
    if (!(n > 0.0))
        throw invalid_input("cannot normalize a zero wavefunction");
    for (double& v : values)
        v /= n;
}

void Wavefunction::fix_sign() {
    double vmax = 0.0;
    for (double v : values)
        vmax = std::fmax(vmax, std::fabs(v));
    for (std::size_t i = grid.origin_right(); i < values.size(); ++i) {
        if (std::fabs(values[i]) > 1e-12 * vmax) {
            if (values[i] < 0.0)
                for (double& v : values)
                    v = -v;
            return;
        }
    }
}

double Wavefunction::parity_score() const {
    double num = 0.0, den = 0.0;
    const std::size_t antipode = grid.xs.size() - 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double vm = values[grid.mirror(i)];
        if (grid.ring && i == antipode)
            vm *= grid.ring_sigma; // -L/2 and L/2 are one point up to the twist
        num += values[i] * vm;
        den += values[i] * values[i];
    }
    return num / den;
}

double inner_product(const Wavefunction& a, const Wavefunction& b) {
    if (a.values.size() != b.values.size())
        throw invalid_input("inner_product: mismatched grids");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < a.values.size(); ++i) {
        const double w = a.grid.xs[i + 1] - a.grid.xs[i];
        s += 0.5 * w * (a.values[i] * b.values[i] + a.values[i + 1] * b.values[i + 1]);
    }
    if (a.grid.ring)
        s += 0.5 * a.grid.h
             * (a.values.back() * b.values.back() + a.values.front() * b.values.front());
    return s;
}

Sector sector_of(const contact::Coupling& coupling) {
    // The hard core is tagged from the impenetrable-boson side (the
    // infinite-strength derivative-jump limit), so it sits in the even
    // sector; its fermionic twin is EpsilonCoupling{0}.
    if (std::holds_alternative<contact::EpsilonCoupling>(coupling))
        return Sector::fermionic;
    return Sector::bosonic;
}

contact::Parity parity_of(Sector s) {
    if (s == Sector::fermionic)
        return contact::Parity::odd;
    if (s == Sector::bosonic)
        return contact::Parity::even;
    throw invalid_input("sector 'none' has no parity");
}

double default_half_width(double omega, const contact::Coupling& coupling) {
    double c_scale = 0.0;
    if (auto* e = std::get_if<contact::EpsilonCoupling>(&coupling))
        c_scale = std::fabs(e->c);
    else if (auto* d = std::get_if<contact::DeltaCoupling>(&coupling))
        c_scale = d->v != 0.0 ? 1.0 / std::fabs(d->v) : 0.0;
    double w = std::fmax(10.0, 10.0 * c_scale);
    if (omega > 0.0)
        w = std::fmax(w, 6.0 / std::sqrt(omega));
    return w;
}

namespace {

std::size_t sides_for(double extent, double target_h) {
    return static_cast<std::size_t>(std::ceil(extent / target_h));
}

} // namespace

Grid default_interface_grid(const TrapSpec& trap) {
    if (trap.is_ring()) {
        const auto& rg = trap.ring_geom();
        return Grid::ring_grid(rg.length, 2 * sides_for(rg.length / 2.0, 0.005),
                               ring_sigma_of(rg.twist));
    }
    const double w = trap.line_geom().half_width;
    // twice the Numerov resolution, so the two default grids share abscissae
    return Grid::line(w, 2 * sides_for(w, 0.005));
}

Grid default_numerov_grid(const TrapSpec& trap) {
    if (trap.is_ring()) {
        const auto& rg = trap.ring_geom();
        return Grid::ring_grid(rg.length, sides_for(rg.length / 2.0, 0.005),
                               ring_sigma_of(rg.twist));
    }
    const double w = trap.line_geom().half_width;
    return Grid::line(w, sides_for(w, 0.005));
}

Grid default_finite_grid(const TrapSpec& trap) {
    if (trap.is_ring())
        throw unsupported("finite-range potentials are solved on the line only");
    const double w = trap.line_geom().half_width;
    return Grid::line(w, 4 * sides_for(w, 0.005));
}

} // namespace fbdual::spectral
