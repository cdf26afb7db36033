#pragma once

// Sign-change scan + bisection for characteristic functions D(E) whose roots
// are the eigenvalues we want.  Every evaluation of D is independent, so the
// scan and the per-bracket refinement both come in a serial reference version
// and an OpenMP version that must produce bit-identical results.

#include <functional>
#include <vector>

namespace fbdual {

enum class exec_mode { serial, openmp };

namespace detscan {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0; // sign carrier; only its sign is used
};

// D evaluated on each point, in order.
std::vector<double> eval_grid(const std::function<double(double)>& f,
                              const std::vector<double>& pts, exec_mode mode);

// Sign-change intervals of a sampled function.  Exact zeros at sample points
// become width-zero brackets.
std::vector<Bracket> sign_brackets(const std::vector<double>& pts,
                                   const std::vector<double>& vals);

// Bisection to |hi - lo| <= rel_tol * max(1, |mid|) on each bracket.
std::vector<double> bisect_all(const std::function<double(double)>& f,
                               const std::vector<Bracket>& brackets, double rel_tol,
                               exec_mode mode);

// Scan [lo, hi] at n_points equally spaced samples and refine every sign
// change found.  Roots come back sorted ascending.
std::vector<double> find_roots(const std::function<double(double)>& f, double lo,
                               double hi, int n_points, double rel_tol, exec_mode mode);

} // namespace detscan
} // namespace fbdual
