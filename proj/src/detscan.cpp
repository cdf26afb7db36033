#include "fbdual/detscan.hpp"

#include <cmath>
#include <cstddef>

#include "fbdual/errors.hpp"

namespace fbdual::detscan {

namespace {

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double bisect_one(const std::function<double(double)>& f, Bracket b, double rel_tol) {
    double lo = b.lo, hi = b.hi;
    if (lo == hi)
        return lo;
    int s_lo = sgn(b.f_lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * std::fmax(1.0, std::fabs(mid)))
            return mid;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if (sgn(fm) == s_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<double> eval_grid(const std::function<double(double)>& f,
                              const std::vector<double>& pts, exec_mode mode) {
    std::vector<double> vals(pts.size());
    if (mode == exec_mode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i)
            vals[static_cast<std::size_t>(i)] = f(pts[static_cast<std::size_t>(i)]);
    } else {
        // serial reference path, kept for testing against the parallel one
        for (std::size_t i = 0; i < pts.size(); ++i)
            vals[i] = f(pts[i]);
    }
    return vals;
}

std::vector<Bracket> sign_brackets(const std::vector<double>& pts,
                                   const std::vector<double>& vals) {
    if (pts.size() != vals.size())
        throw invalid_input("sign_brackets: point/value length mismatch");
    std::vector<Bracket> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (vals[i] == 0.0) {
            out.push_back({pts[i], pts[i], 1.0});
            continue;
        }
        if (vals[i + 1] != 0.0 && sgn(vals[i]) != sgn(vals[i + 1]))
            out.push_back({pts[i], pts[i + 1], vals[i]});
    }
    if (!vals.empty() && vals.back() == 0.0)
        out.push_back({pts.back(), pts.back(), 1.0});
    return out;
}

std::vector<double> bisect_all(const std::function<double(double)>& f,
                               const std::vector<Bracket>& brackets, double rel_tol,
                               exec_mode mode) {
    std::vector<double> roots(brackets.size());
    if (mode == exec_mode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(brackets.size()); ++i)
            roots[static_cast<std::size_t>(i)] =
                bisect_one(f, brackets[static_cast<std::size_t>(i)], rel_tol);
    } else {
        for (std::size_t i = 0; i < brackets.size(); ++i)
            roots[i] = bisect_one(f, brackets[i], rel_tol);
    }
    return roots;
}

std::vector<double> find_roots(const std::function<double(double)>& f, double lo,
                               double hi, int n_points, double rel_tol, exec_mode mode) {
    if (!(hi > lo) || n_points < 2)
        throw invalid_input("find_roots: need hi > lo and at least two scan points");
    std::vector<double> pts(static_cast<std::size_t>(n_points));
    const double step = (hi - lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i)
        pts[static_cast<std::size_t>(i)] = lo + step * i;
    const std::vector<double> vals = eval_grid(f, pts, mode);
    return bisect_all(f, sign_brackets(pts, vals), rel_tol, mode);
}

} // namespace fbdual::detscan
