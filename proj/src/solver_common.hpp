#pragma once

// Pieces shared by the two eigenvalue solvers: the trap potential, default
// scan windows for the determinant root search, and post-processing of the
// collected levels.  Internal to the solver translation units.

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "fbdual/spectral.hpp"

namespace fbdual::spectral::detail_common {

inline double trap_potential(double omega, double x) { return 0.25 * omega * omega * x * x; }

// Magnitude of the deepest two-body binding energy the coupling can produce;
// the default scan floor sits a safe factor below it.
inline double binding_scale(const contact::Coupling& coupling) {
    if (auto* e = std::get_if<contact::EpsilonCoupling>(&coupling))
        return e->c != 0.0 ? 1.0 / (4.0 * e->c * e->c) : 0.0;
    if (auto* d = std::get_if<contact::DeltaCoupling>(&coupling))
        return d->v * d->v;
    return 0.0;
}

inline int points_for(double lo, double hi, double step) {
    const int n = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
    return n < 3 ? 3 : n;
}

inline bool parity_matches(double score, Sector sector) {
    const double target = sector == Sector::bosonic ? 1.0 : -1.0;
    return score * target > 0.5;
}

inline void flag_degenerate(std::vector<Level>& levels, const std::vector<double>& all_roots) {
    for (Level& lv : levels) {
        int close = 0;
        for (double r : all_roots)
            if (std::fabs(r - lv.energy) <= 1e-9 * std::fmax(1.0, std::fabs(lv.energy)))
                ++close;
        lv.degenerate_flag = close >= 2;
    }
}

struct ScanWindow {
    double floor_e = 0.0;
    double hi = 0.0;
    double step = 0.0;
    bool extendable = false;
    double omega = 0.0;
    bool ring = false;

    double next_hi() const { return ring ? hi * 2.0 : hi + omega * 8.0; }
};

inline ScanWindow make_window(const TrapSpec& trap, const contact::Coupling& coupling,
                              int n_levels, const SolveOptions& opt) {
    ScanWindow w;
    w.omega = trap.omega;
    w.ring = trap.is_ring();
    w.floor_e = opt.energy_floor <= 0.0 ? opt.energy_floor : -4.0 * binding_scale(coupling) - 1.0;
    if (trap.omega > 0.0) {
        // Harmonic levels are omega apart and the two sectors interleave.
        w.hi = trap.omega * (2.0 * n_levels + 6.0);
        w.step = opt.scan_step > 0.0 ? opt.scan_step : trap.omega / 18.0;
        w.extendable = true;
    } else if (w.ring) {
        const double len = trap.ring_geom().length;
        const double k0 = 2.0 * 3.1415926535897932 * (n_levels + 3.0) / len;
        w.hi = k0 * k0;
        w.step = opt.scan_step > 0.0 ? opt.scan_step : (w.hi - w.floor_e) / 400.0;
        w.extendable = true;
    } else {
        // A free line has only bound states as isolated eigenvalues.
        w.hi = -1e-12;
        w.step = opt.scan_step > 0.0 ? opt.scan_step : (w.hi - w.floor_e) / 400.0;
        w.extendable = false;
    }
    if (!(w.floor_e < w.hi))
        throw invalid_input("scan window is empty");
    return w;
}

} // namespace fbdual::spectral::detail_common
